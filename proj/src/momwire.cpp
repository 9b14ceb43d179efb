#include "mpq/momwire.hpp"

#include "kernel.hpp"
#include "mpq/error.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace mpq {

namespace {

Eigen::Vector3d unit_axis(const Wire& w) {
    const double n = w.axis.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        fail(ErrorCode::geometry, "wire axis must be a non-zero vector");
    }
    return w.axis / n;
}

double axis_coordinate(const Wire& w, const Eigen::Vector3d& axis) {
    return w.center.dot(axis) - 0.5 * w.length;
}

double transverse_distance(const Wire& a, const Wire& b, const Eigen::Vector3d& axis) {
    const Eigen::Vector3d d = b.center - a.center;
    return (d - d.dot(axis) * axis).norm();
}

} // namespace

void WireArrayGeometry::validate() const {
    if (wires.empty()) {
        fail(ErrorCode::geometry, "geometry has no wires");
    }
    const Eigen::Vector3d axis = unit_axis(wires.front());
    for (std::size_t i = 0; i < wires.size(); ++i) {
        const Wire& w = wires[i];
        const std::string tag = "wire " + std::to_string(i) + ": ";
        if (!(w.length > 0.0) || !(w.radius > 0.0) || !w.center.allFinite()) {
            fail(ErrorCode::geometry, tag + "length and radius must be positive and the centre finite");
        }
        if (!(w.radius < w.length / 50.0)) {
            fail(ErrorCode::geometry, tag + "radius must be below length / 50 for the thin-wire kernel");
        }
        if (w.segments < 10 || w.segments % 2 != 0) {
            fail(ErrorCode::geometry, tag + "segment count must be even and at least 10");
        }
        if (w.port_segment && (*w.port_segment < 1 || *w.port_segment > w.segments - 1)) {
            fail(ErrorCode::geometry, tag + "port_segment must lie in 1 .. segments-1");
        }
        const Eigen::Vector3d ai = unit_axis(w);
        if (ai.cross(axis).norm() > 1e-12 || ai.dot(axis) < 0.0) {
            fail(ErrorCode::geometry, tag + "all wires must share one axis direction");
        }
        for (std::size_t k = 0; k < i; ++k) {
            const double rho = transverse_distance(wires[k], w, axis);
            const double gap = rho - w.radius - wires[k].radius;
            if (!(std::max(w.radius, wires[k].radius) < gap / 4.0)) {
                std::ostringstream os;
                os << "wires " << k << " and " << i << " are too close: radius must be below a quarter of the "
                   << "gap (" << gap << " m)";
                fail(ErrorCode::geometry, os.str());
            }
        }
    }
    if (port_count() == 0) {
        fail(ErrorCode::geometry, "geometry has no ports");
    }
}

int WireArrayGeometry::basis_count() const {
    int n = 0;
    for (const Wire& w : wires) {
        n += w.segments - 1;
    }
    return n;
}

int WireArrayGeometry::port_count() const {
    int n = 0;
    for (const Wire& w : wires) {
        n += w.port_segment.has_value() ? 1 : 0;
    }
    return n;
}

double WireArrayGeometry::max_segment_length() const {
    double m = 0.0;
    for (const Wire& w : wires) {
        m = std::max(m, w.segment_length());
    }
    return m;
}

WireArrayGeometry dipole_array(int count, double f0_hz, double d_over_lambda, int segments,
                               double radius_over_lambda) {
    if (count < 1 || !(f0_hz > 0.0)) {
        fail(ErrorCode::invalid_argument, "dipole array needs count >= 1 and f0 > 0");
    }
    const double lambda = c0 / f0_hz;
    WireArrayGeometry g;
    for (int i = 0; i < count; ++i) {
        Wire w;
        w.length = 0.5 * lambda;
        w.radius = radius_over_lambda * lambda;
        w.center = Eigen::Vector3d(i * d_over_lambda * lambda, 0.0, 0.0);
        w.axis = Eigen::Vector3d::UnitZ();
        w.segments = segments;
        w.port_segment = segments / 2;
        g.wires.push_back(w);
    }
    g.validate();
    return g;
}

BasisLayout BasisLayout::of(const WireArrayGeometry& geometry) {
    BasisLayout lay;
    int offset = 0;
    for (std::size_t wi = 0; wi < geometry.wires.size(); ++wi) {
        const Wire& w = geometry.wires[wi];
        for (int node = 1; node < w.segments; ++node) {
            lay.wire.push_back(static_cast<int>(wi));
            lay.node.push_back(node);
            lay.segment_length.push_back(w.segment_length());
        }
        if (w.port_segment) {
            lay.port_rows.push_back(offset + *w.port_segment - 1);
        }
        offset += w.segments - 1;
    }
    return lay;
}

namespace {

// Segment-pair integrals for one wire pair. Wires with the same profile
// (length, segments, axial start) give a Toeplitz table in the segment offset.
class PairTable {
public:
    PairTable(const Wire& obs, const Wire& src, double z_obs, double z_src, double rho, double k, bool toeplitz)
        : ns_obs_(obs.segments), ns_src_(src.segments), toeplitz_(toeplitz) {
        const double lo = obs.segment_length();
        const double ls = src.segment_length();
        if (toeplitz_) {
            table_.reserve(static_cast<std::size_t>(2 * ns_obs_ - 1));
            for (int off = -(ns_obs_ - 1); off <= ns_obs_ - 1; ++off) {
                table_.push_back(detail::segment_pair(0.0, lo, off * ls, ls, rho, k));
            }
        } else {
            table_.reserve(static_cast<std::size_t>(ns_obs_ * ns_src_));
            for (int s = 0; s < ns_obs_; ++s) {
                for (int t = 0; t < ns_src_; ++t) {
                    table_.push_back(detail::segment_pair(z_obs + s * lo, lo, z_src + t * ls, ls, rho, k));
                }
            }
        }
    }

    const detail::PairIntegrals& at(int s, int t) const {
        if (toeplitz_) {
            return table_[static_cast<std::size_t>(t - s + ns_obs_ - 1)];
        }
        return table_[static_cast<std::size_t>(s * ns_src_ + t)];
    }

private:
    int ns_obs_;
    int ns_src_;
    bool toeplitz_;
    std::vector<detail::PairIntegrals> table_;
};

struct CachedTable {
    std::size_t obs;
    std::size_t src;
    double rho;
    std::unique_ptr<PairTable> table;
};

bool same_profile(const Wire& a, const Wire& b, double za, double zb) {
    return a.length == b.length && a.segments == b.segments && za == zb;
}

} // namespace

MoMSystem assemble(const WireArrayGeometry& geometry, double omega) {
    geometry.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        fail(ErrorCode::invalid_argument, "assembly frequency must be positive");
    }
    const double lambda = 2.0 * pi * c0 / omega;
    for (const Wire& w : geometry.wires) {
        if (!(w.segment_length() < lambda / 10.0)) {
            const int need = 2 * static_cast<int>(std::ceil(w.length / (lambda / 10.0) / 2.0 + 0.5));
            std::ostringstream os;
            os << "segment length " << w.segment_length() << " m exceeds lambda/10 = " << lambda / 10.0
               << " m at f = " << omega / (2.0 * pi) << " Hz; use at least " << need << " segments";
            fail(ErrorCode::geometry, os.str());
        }
    }

    const double k = omega / c0;
    const Eigen::Vector3d axis = unit_axis(geometry.wires.front());
    const std::size_t nw = geometry.wires.size();
    std::vector<double> zstart(nw);
    std::vector<int> offset(nw);
    int n = 0;
    for (std::size_t i = 0; i < nw; ++i) {
        zstart[i] = axis_coordinate(geometry.wires[i], axis);
        offset[i] = n;
        n += geometry.wires[i].segments - 1;
    }

    // Blocks of equal profile pair and transverse distance share their table.
    std::vector<CachedTable> cache;
    std::vector<std::size_t> profile(nw);
    for (std::size_t i = 0; i < nw; ++i) {
        profile[i] = i;
        for (std::size_t p = 0; p < i; ++p) {
            if (profile[p] == p && same_profile(geometry.wires[p], geometry.wires[i], zstart[p], zstart[i])) {
                profile[i] = p;
                break;
            }
        }
    }
    auto table_for = [&](std::size_t i, std::size_t j) -> const PairTable& {
        const Wire& wi = geometry.wires[i];
        const Wire& wj = geometry.wires[j];
        const double rho = (i == j) ? wi.radius : transverse_distance(wi, wj, axis);
        for (const CachedTable& c : cache) {
            if (c.obs == profile[i] && c.src == profile[j] && std::abs(c.rho - rho) <= 1e-12 * rho) {
                return *c.table;
            }
        }
        const bool toeplitz = profile[i] == profile[j];
        cache.push_back({profile[i], profile[j], rho,
                         std::make_unique<PairTable>(wi, wj, zstart[i], zstart[j], rho, k, toeplitz)});
        return *cache.back().table;
    };

    // Z_mn = j w mu/(4 pi) sum ramp * ramp G + 1/(j w eps 4 pi) sum sign * sign G
    const cplx vector_coef = j1 * omega * mu0 / (4.0 * pi);
    const cplx scalar_coef = 1.0 / (j1 * omega * eps0 * 4.0 * pi);

    CMatrix Z(n, n);
    for (std::size_t i = 0; i < nw; ++i) {
        for (std::size_t j = 0; j < nw; ++j) {
            const PairTable& tab = table_for(i, j);
            const int bi = geometry.wires[i].segments - 1;
            const int bj = geometry.wires[j].segments - 1;
            for (int m = 0; m < bi; ++m) {
                // Basis m peaks at node m+1: rising on segment m, falling on m+1.
                for (int q = 0; q < bj; ++q) {
                    cplx vec = 0.0;
                    cplx sca = 0.0;
                    for (int a = 0; a < 2; ++a) {
                        const int s = m + a;
                        const double sign_s = a == 0 ? 1.0 : -1.0;
                        for (int b = 0; b < 2; ++b) {
                            const int t = q + b;
                            const double sign_t = b == 0 ? 1.0 : -1.0;
                            const detail::PairIntegrals& pi_st = tab.at(s, t);
                            vec += pi_st.ramp[a][b];
                            sca += sign_s * sign_t * pi_st.plain;
                        }
                    }
                    Z(offset[i] + m, offset[j] + q) = vector_coef * vec + scalar_coef * sca;
                }
            }
        }
    }
    const CMatrix sym = 0.5 * (Z + Z.transpose());

    MoMSystem sys;
    sys.geometry = geometry;
    sys.layout = BasisLayout::of(geometry);
    sys.omega = omega;
    sys.Z = sym;
    return sys;
}

CMatrix impedance_central_difference(const WireArrayGeometry& geometry, double omega, double h) {
    const CMatrix zp = assemble(geometry, omega * (1.0 + h)).Z;
    const CMatrix zm = assemble(geometry, omega * (1.0 - h)).Z;
    return (zp - zm) / (2.0 * omega * h);
}

CMatrix impedance_derivative(const WireArrayGeometry& geometry, double omega, double h) {
    const CMatrix coarse = impedance_central_difference(geometry, omega, h);
    const CMatrix fine = impedance_central_difference(geometry, omega, 0.5 * h);
    const CMatrix d = (4.0 * fine - coarse) / 3.0;
    return 0.5 * (d + d.transpose());
}

LossModel LossModel::uniform(int n, double ohms) {
    LossModel l;
    l.resistance = RMatrix::Identity(n, n) * ohms;
    return l;
}

LossModel LossModel::wire_resistance(const WireArrayGeometry& geometry, double ohm_per_metre) {
    if (!(ohm_per_metre >= 0.0)) {
        fail(ErrorCode::invalid_argument, "wire resistance must be non-negative");
    }
    const BasisLayout lay = BasisLayout::of(geometry);
    const int n = lay.size();
    LossModel l;
    l.resistance = RMatrix::Zero(n, n);
    for (int m = 0; m < n; ++m) {
        const double d = lay.segment_length[static_cast<std::size_t>(m)];
        // Basis peak is d, support 2d: int f^2 = 2 d^3 / 3, neighbour overlap d^3 / 6.
        l.resistance(m, m) = ohm_per_metre * 2.0 * d * d * d / 3.0;
        if (m + 1 < n && lay.wire[static_cast<std::size_t>(m + 1)] == lay.wire[static_cast<std::size_t>(m)]) {
            l.resistance(m, m + 1) = ohm_per_metre * d * d * d / 6.0;
            l.resistance(m + 1, m) = l.resistance(m, m + 1);
        }
    }
    return l;
}

void LossModel::validate(int n) const {
    if (empty()) {
        return;
    }
    if (resistance.rows() != n || resistance.cols() != n) {
        fail(ErrorCode::invalid_argument, "loss matrix dimensions disagree with the system");
    }
    const double scale = resistance.cwiseAbs().maxCoeff();
    if ((resistance - resistance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        fail(ErrorCode::invalid_argument, "loss matrix must be symmetric");
    }
    if (scale > 0.0 && min_eigenvalue(resistance) < -1e-12 * scale) {
        fail(ErrorCode::invalid_argument, "loss matrix must be positive semidefinite");
    }
}

CMatrix loaded_impedance(const MoMSystem& system, const LossModel& loss) {
    if (loss.empty()) {
        return system.Z;
    }
    loss.validate(system.size());
    return system.Z + loss.resistance.cast<cplx>();
}

CVector solve_current(const MoMSystem& system, const LossModel& loss, const CVector& V) {
    if (V.size() != system.size()) {
        fail(ErrorCode::invalid_argument, "excitation length disagrees with the system size");
    }
    const CMatrix A = loaded_impedance(system, loss);
    auto lu = checked_lu(A, "MoM system");
    CVector I = lu.solve(V);
    const double vn = V.norm();
    if (vn > 0.0) {
        const double res = (A * I - V).norm() / vn;
        if (!(res < 1e-10)) {
            std::ostringstream os;
            os << "MoM solve residual " << res << " exceeds 1e-10 (rcond estimate " << lu.rcond() << ")";
            fail(ErrorCode::singular, os.str());
        }
    }
    return I;
}

Powers powers(const MoMSystem& system, const LossModel& loss, const CVector& I) {
    if (I.size() != system.size()) {
        fail(ErrorCode::invalid_argument, "current length disagrees with the system size");
    }
    Powers p;
    const CVector zi = system.Z * I;
    const cplx form = I.dot(zi);   // I^H Z I
    p.radiated = 0.5 * form.real();
    p.reactive = 0.5 * form.imag();
    if (!loss.empty()) {
        loss.validate(system.size());
        p.loss = 0.5 * I.dot(loss.resistance.cast<cplx>() * I).real();
    }
    return p;
}

} // namespace mpq
