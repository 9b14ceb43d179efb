#include "mpq/matching.hpp"

#include "mpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpq {

const char* to_string(ElementKind kind) noexcept {
    return kind == ElementKind::capacitor ? "capacitor" : "inductor";
}

void MatchingState::validate() const {
    const auto n = R0.size();
    if (n < 1 || B_L.size() != n || static_cast<Eigen::Index>(kind.size()) != n) {
        fail(ErrorCode::invalid_argument, "matching state needs R0, B_L and element kinds for every port");
    }
    if (!(omega_ref > 0.0)) {
        fail(ErrorCode::invalid_argument, "matching state needs a positive reference frequency");
    }
    for (Eigen::Index p = 0; p < n; ++p) {
        if (!(R0[p] > 0.0) || !std::isfinite(R0[p])) {
            fail(ErrorCode::invalid_argument, "line resistance R0 must be positive on port " + std::to_string(p + 1));
        }
        const bool cap = kind[static_cast<std::size_t>(p)] == ElementKind::capacitor;
        if (cap != (B_L[p] >= 0.0)) {
            fail(ErrorCode::invalid_argument,
                 "element kind on port " + std::to_string(p + 1) + " disagrees with the sign of B_L");
        }
    }
}

double MatchingState::element_value(int port) const {
    const double b = B_L[port];
    if (kind[static_cast<std::size_t>(port)] == ElementKind::capacitor) {
        return b / omega_ref;
    }
    return -1.0 / (omega_ref * b);
}

RVector MatchingState::susceptance(double omega) const {
    RVector out(ports());
    for (int p = 0; p < ports(); ++p) {
        out[p] = kind[static_cast<std::size_t>(p)] == ElementKind::capacitor ? B_L[p] * omega / omega_ref
                                                                               : B_L[p] * omega_ref / omega;
    }
    return out;
}

RVector MatchingState::susceptance_derivative(double omega) const {
    RVector out(ports());
    for (int p = 0; p < ports(); ++p) {
        out[p] = kind[static_cast<std::size_t>(p)] == ElementKind::capacitor ? B_L[p] / omega_ref
                                                                               : -B_L[p] * omega_ref / (omega * omega);
    }
    return out;
}

RVector MatchingState::susceptance_second_derivative(double omega) const {
    RVector out(ports());
    for (int p = 0; p < ports(); ++p) {
        out[p] = kind[static_cast<std::size_t>(p)] == ElementKind::capacitor
                     ? 0.0
                     : 2.0 * B_L[p] * omega_ref / (omega * omega * omega);
    }
    return out;
}

MatchingState MatchingState::from_elements(RVector R0, const std::vector<ElementKind>& kind,
                                           const std::vector<double>& values, double omega_ref) {
    if (static_cast<Eigen::Index>(values.size()) != R0.size()) {
        fail(ErrorCode::invalid_argument, "one element value per port is required");
    }
    MatchingState m;
    m.R0 = std::move(R0);
    m.kind = kind;
    m.omega_ref = omega_ref;
    m.B_L.resize(m.R0.size());
    for (Eigen::Index p = 0; p < m.R0.size(); ++p) {
        const double v = values[static_cast<std::size_t>(p)];
        if (kind[static_cast<std::size_t>(p)] == ElementKind::capacitor) {
            if (!(v >= 0.0)) {
                fail(ErrorCode::invalid_argument, "capacitance must be non-negative");
            }
            m.B_L[p] = omega_ref * v;
        } else {
            if (!(v > 0.0)) {
                fail(ErrorCode::invalid_argument, "inductance must be positive");
            }
            m.B_L[p] = -1.0 / (omega_ref * v);
        }
    }
    m.validate();
    return m;
}

WavePair waves(const CMatrix& y0, const MatchingState& match, double omega, const PortExcitation& v) {
    const int n = match.ports();
    if (y0.rows() != n || y0.cols() != n || v.size() != n) {
        fail(ErrorCode::invalid_argument, "waves: admittance, matching and excitation sizes disagree");
    }
    const RVector lam = match.R0.cwiseSqrt();
    const RVector lam_inv = lam.cwiseInverse();
    const CVector yv = y0 * v.vector() + (j1 * match.susceptance(omega).cast<cplx>()).cwiseProduct(v.vector());
    const CVector inc = lam_inv.cast<cplx>().cwiseProduct(v.vector());
    const CVector ref = lam.cast<cplx>().cwiseProduct(yv);
    return {0.5 * (inc + ref), 0.5 * (inc - ref)};
}

MatchingState synthesize_match(const CMatrix& y0, const PortExcitation& v, double omega0) {
    const int n = static_cast<int>(y0.rows());
    v.require_nonzero(n);
    if (!(omega0 > 0.0)) {
        fail(ErrorCode::invalid_argument, "match synthesis needs a positive frequency");
    }
    const CVector i = y0 * v.vector();
    MatchingState m;
    m.R0.resize(n);
    m.B_L.resize(n);
    m.kind.resize(static_cast<std::size_t>(n));
    m.omega_ref = omega0;
    for (int p = 0; p < n; ++p) {
        const cplx vp = v.vector()[p];
        if (vp == cplx(0.0)) {
            fail(ErrorCode::synthesis, "port " + std::to_string(p + 1) + " has zero voltage; every port must be driven");
        }
        const cplx yin = i[p] / vp;
        if (!(yin.real() > 0.0)) {
            std::ostringstream os;
            os << "port " << p + 1 << " has active input conductance " << yin.real()
               << " S <= 0; coupling drives it active and it cannot be matched";
            fail(ErrorCode::synthesis, os.str());
        }
        m.R0[p] = 1.0 / yin.real();
        m.B_L[p] = -yin.imag();
        m.kind[static_cast<std::size_t>(p)] = m.B_L[p] >= 0.0 ? ElementKind::capacitor : ElementKind::inductor;
    }
    return m;
}

double total_efficiency(const WavePair& w, double p_loss) {
    const double pin = w.incident_power();
    if (!(pin > 0.0)) {
        fail(ErrorCode::invalid_argument, "zero incident power");
    }
    return 1.0 - w.b.squaredNorm() / w.a.squaredNorm() - p_loss / pin;
}

double tarc(const WavePair& w, double p_loss) {
    const double eta = total_efficiency(w, p_loss);
    return std::clamp(std::sqrt(std::max(0.0, 1.0 - eta)), 0.0, 1.0);
}

} // namespace mpq
