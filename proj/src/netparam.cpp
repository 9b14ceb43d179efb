#include "mpq/netparam.hpp"

#include "mpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpq {

double unit_scale(FrequencyUnit unit) noexcept {
    switch (unit) {
    case FrequencyUnit::hz: return 1.0;
    case FrequencyUnit::khz: return 1e3;
    case FrequencyUnit::mhz: return 1e6;
    case FrequencyUnit::ghz: return 1e9;
    }
    return 1.0;
}

const char* unit_name(FrequencyUnit unit) noexcept {
    switch (unit) {
    case FrequencyUnit::hz: return "Hz";
    case FrequencyUnit::khz: return "kHz";
    case FrequencyUnit::mhz: return "MHz";
    case FrequencyUnit::ghz: return "GHz";
    }
    return "Hz";
}

const char* kind_letter(NetworkKind kind) noexcept {
    switch (kind) {
    case NetworkKind::scattering: return "S";
    case NetworkKind::impedance: return "Z";
    case NetworkKind::admittance: return "Y";
    }
    return "S";
}

FrequencyGrid::FrequencyGrid(std::vector<double> omega, FrequencyUnit unit)
    : omega_(std::move(omega)), unit_(unit) {
    if (omega_.empty()) {
        fail(ErrorCode::invalid_argument, "frequency grid needs at least one point");
    }
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        if (!std::isfinite(omega_[i]) || omega_[i] <= 0.0) {
            fail(ErrorCode::invalid_argument, "frequency grid points must be finite and positive");
        }
        if (i > 0 && !(omega_[i] > omega_[i - 1])) {
            fail(ErrorCode::invalid_argument, "frequency grid must be strictly increasing");
        }
    }
}

FrequencyGrid FrequencyGrid::around(double omega0, double span, int count, FrequencyUnit unit) {
    if (count < 1 || !(span > 0.0) || !(span < 1.0)) {
        fail(ErrorCode::invalid_argument, "sweep needs count >= 1 and span in (0, 1)");
    }
    std::vector<double> w(static_cast<std::size_t>(count));
    if (count == 1) {
        w[0] = omega0;
    } else {
        const int half = (count - 1) / 2;
        for (int i = 0; i < count; ++i) {
            // Symmetric construction keeps omega0 exactly on an odd grid.
            const double frac = (count % 2 == 1)
                                    ? span * static_cast<double>(i - half) / static_cast<double>(half)
                                    : span * (2.0 * i / (count - 1) - 1.0);
            w[static_cast<std::size_t>(i)] = (i == half && count % 2 == 1) ? omega0 : omega0 * (1.0 + frac);
        }
    }
    return FrequencyGrid(std::move(w), unit);
}

long FrequencyGrid::find(double omega) const noexcept {
    const auto it = std::lower_bound(omega_.begin(), omega_.end(), omega);
    if (it != omega_.end() && *it == omega) {
        return static_cast<long>(it - omega_.begin());
    }
    return -1;
}

MultiportNetwork::MultiportNetwork(FrequencyGrid grid, NetworkKind kind, std::vector<CMatrix> samples,
                                   std::vector<double> reference)
    : grid_(std::move(grid)), kind_(kind), samples_(std::move(samples)), reference_(std::move(reference)) {
    if (samples_.size() != grid_.size()) {
        fail(ErrorCode::invalid_argument, "network needs one sample per frequency");
    }
    ports_ = static_cast<int>(samples_.front().rows());
    if (ports_ < 1) {
        fail(ErrorCode::invalid_argument, "network needs at least one port");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const CMatrix& m = samples_[i];
        if (m.rows() != ports_ || m.cols() != ports_) {
            fail(ErrorCode::invalid_argument, "every network sample must be P x P");
        }
        if (!m.allFinite()) {
            std::ostringstream os;
            os << "network sample " << i << " has non-finite entries";
            fail(ErrorCode::invalid_argument, os.str());
        }
    }
    if (reference_.size() == 1 && ports_ > 1) {
        reference_.assign(static_cast<std::size_t>(ports_), reference_.front());
    }
    if (reference_.size() != static_cast<std::size_t>(ports_)) {
        fail(ErrorCode::invalid_argument, "network needs one reference resistance per port");
    }
    for (double r : reference_) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            fail(ErrorCode::invalid_argument, "reference resistances must be positive");
        }
    }
}

MultiportNetwork::MultiportNetwork(FrequencyGrid grid, NetworkKind kind, std::vector<CMatrix> samples,
                                   double reference)
    : MultiportNetwork(std::move(grid), kind, std::move(samples), std::vector<double>{reference}) {}

double MultiportNetwork::reciprocity_defect() const {
    double worst = 0.0;
    for (const CMatrix& m : samples_) {
        worst = std::max(worst, symmetry_defect(m));
    }
    return worst;
}

namespace {

RVector sqrt_ref(std::span<const double> reference) {
    RVector r(static_cast<Eigen::Index>(reference.size()));
    for (std::size_t i = 0; i < reference.size(); ++i) {
        r[static_cast<Eigen::Index>(i)] = std::sqrt(reference[i]);
    }
    return r;
}

CMatrix solve_right(const CMatrix& num, const CMatrix& den, const std::string& what) {
    // num * den^{-1}; num and den commute for every caller here.
    auto lu = checked_lu(den, what);
    return lu.solve(num);
}

void check_dims(const CMatrix& m, std::span<const double> reference) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != reference.size()) {
        fail(ErrorCode::invalid_argument, "matrix and reference dimensions disagree");
    }
}

} // namespace

CMatrix s_to_y(const CMatrix& s, std::span<const double> reference) {
    check_dims(s, reference);
    const auto n = s.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix ynorm = solve_right(id - s, id + s, "S to Y");
    const RVector g = sqrt_ref(reference).cwiseInverse();
    return g.asDiagonal() * ynorm * g.asDiagonal();
}

CMatrix s_to_z(const CMatrix& s, std::span<const double> reference) {
    check_dims(s, reference);
    const auto n = s.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix znorm = solve_right(id + s, id - s, "S to Z");
    const RVector r = sqrt_ref(reference);
    return r.asDiagonal() * znorm * r.asDiagonal();
}

CMatrix y_to_s(const CMatrix& y, std::span<const double> reference) {
    check_dims(y, reference);
    const auto n = y.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const RVector r = sqrt_ref(reference);
    const CMatrix ynorm = r.asDiagonal() * y * r.asDiagonal();
    return solve_right(id - ynorm, id + ynorm, "Y to S");
}

CMatrix z_to_s(const CMatrix& z, std::span<const double> reference) {
    check_dims(z, reference);
    const auto n = z.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const RVector g = sqrt_ref(reference).cwiseInverse();
    const CMatrix znorm = g.asDiagonal() * z * g.asDiagonal();
    return solve_right(znorm - id, znorm + id, "Z to S");
}

namespace {

std::string at_frequency(const FrequencyGrid& grid, std::size_t i) {
    std::ostringstream os;
    os.precision(12);
    os << " at f = " << grid[i] / (2.0 * pi) << " Hz";
    return os.str();
}

template <typename F>
MultiportNetwork convert(const MultiportNetwork& net, NetworkKind target, F&& f) {
    std::vector<CMatrix> out;
    out.reserve(net.samples().size());
    for (std::size_t i = 0; i < net.samples().size(); ++i) {
        try {
            out.push_back(f(net.sample(i)));
        } catch (const Error& e) {
            fail(e.code(), std::string(e.what()) + at_frequency(net.grid(), i));
        }
    }
    return MultiportNetwork(net.grid(), target, std::move(out), net.reference());
}

CMatrix inverse(const CMatrix& m, const char* what) {
    auto lu = checked_lu(m, what);
    return lu.inverse();
}

} // namespace

MultiportNetwork to_admittance(const MultiportNetwork& net) {
    const auto& ref = net.reference();
    switch (net.kind()) {
    case NetworkKind::admittance:
        return net;
    case NetworkKind::impedance:
        return convert(net, NetworkKind::admittance, [](const CMatrix& z) { return inverse(z, "Z to Y"); });
    case NetworkKind::scattering:
        return convert(net, NetworkKind::admittance, [&](const CMatrix& s) { return s_to_y(s, ref); });
    }
    return net;
}

MultiportNetwork to_impedance(const MultiportNetwork& net) {
    const auto& ref = net.reference();
    switch (net.kind()) {
    case NetworkKind::impedance:
        return net;
    case NetworkKind::admittance:
        return convert(net, NetworkKind::impedance, [](const CMatrix& y) { return inverse(y, "Y to Z"); });
    case NetworkKind::scattering:
        return convert(net, NetworkKind::impedance, [&](const CMatrix& s) { return s_to_z(s, ref); });
    }
    return net;
}

MultiportNetwork to_scattering(const MultiportNetwork& net) {
    const auto& ref = net.reference();
    switch (net.kind()) {
    case NetworkKind::scattering:
        return net;
    case NetworkKind::admittance:
        return convert(net, NetworkKind::scattering, [&](const CMatrix& y) { return y_to_s(y, ref); });
    case NetworkKind::impedance:
        return convert(net, NetworkKind::scattering, [&](const CMatrix& z) { return z_to_s(z, ref); });
    }
    return net;
}

CMatrix sample_at(const MultiportNetwork& net, double omega) {
    const auto& w = net.grid().omega();
    if (!(omega >= w.front() && omega <= w.back())) {
        std::ostringstream os;
        os.precision(12);
        os << "frequency " << omega / (2.0 * pi) << " Hz lies outside the sampled range ["
           << w.front() / (2.0 * pi) << ", " << w.back() / (2.0 * pi) << "] Hz";
        fail(ErrorCode::range, os.str());
    }
    const HermiteStencil st = hermite_stencil(w, omega);
    if (st.count == 1) {
        return net.sample(st.index[0]);
    }
    // Real and imaginary parts are interpolated independently; since the
    // weights are real this is the same as weighting the complex entries.
    CMatrix out = CMatrix::Zero(net.ports(), net.ports());
    for (int k = 0; k < st.count; ++k) {
        out += st.weight[k] * net.sample(st.index[k]);
    }
    return out;
}

CMatrix sampled_derivative(const MultiportNetwork& net, double omega) {
    const auto& w = net.grid().omega();
    if (w.size() < 3 || !(omega > w.front() && omega < w.back())) {
        fail(ErrorCode::range, "derivative needs an interior frequency of a grid with at least 3 points");
    }
    auto it = std::upper_bound(w.begin(), w.end(), omega);
    const std::size_t hi = static_cast<std::size_t>(it - w.begin());
    double h = w[hi] - w[hi - 1];
    if (w[hi - 1] == omega) {
        h = std::min(w[hi] - omega, omega - w[hi - 2]);
    }
    h = std::min({h, omega - w.front(), w.back() - omega});
    return (sample_at(net, omega + h) - sample_at(net, omega - h)) / (2.0 * h);
}

} // namespace mpq
