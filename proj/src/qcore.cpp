#include "mpq/qcore.hpp"

#include "mpq/error.hpp"
#include "mpq/netparam.hpp"

#include <cmath>
#include <sstream>

namespace mpq {

namespace {

double real_form(const CVector& v, const CMatrix& m) {
    return v.dot(m * v).real();
}

void check_port_dims(const CMatrix& a, const CVector& v, const char* what) {
    if (a.rows() != a.cols() || a.rows() != v.size()) {
        fail(ErrorCode::invalid_argument, std::string(what) + ": matrix and feeding dimensions disagree");
    }
}

} // namespace

StoredEnergies stored_energies(const MoMSystem& system, const CMatrix& dZ, const CVector& I) {
    if (I.size() != system.size() || dZ.rows() != system.size()) {
        fail(ErrorCode::invalid_argument, "stored energies: dimensions disagree");
    }
    const double w = system.omega;
    const CMatrix W = dZ.imag().cast<cplx>();
    const CMatrix X = system.Z.imag().cast<cplx>();
    const double iwi = real_form(I, W);
    const double ixi = real_form(I, X);
    StoredEnergies e;
    e.W_m = (w * iwi + ixi) / (8.0 * w);
    e.W_e = (w * iwi - ixi) / (8.0 * w);
    e.P_rad = 0.5 * real_form(I, system.Z.real().cast<cplx>());
    e.P_react = 0.5 * ixi;
    e.indefinite = e.W_m + e.W_e < 0.0;
    return e;
}

double q_rad_mom(const MoMSystem& system, const CMatrix& dZ, const CVector& I) {
    const StoredEnergies e = stored_energies(system, dZ, I);
    if (!(e.P_rad > 0.0)) {
        fail(ErrorCode::invalid_argument, "radiation Q needs positive radiated power");
    }
    const double iri = 2.0 * e.P_rad;
    const double iwi = 4.0 * (e.W_m + e.W_e);
    return 0.5 * system.omega * iwi / iri + 0.5 * std::abs(2.0 * e.P_react) / iri;
}

double q_rad_port(const CMatrix& g, const CMatrix& b, const CMatrix& w, const CVector& v, double omega) {
    check_port_dims(g, v, "q_rad_port");
    check_port_dims(b, v, "q_rad_port");
    check_port_dims(w, v, "q_rad_port");
    const double vgv = real_form(v, g);
    if (!(vgv > 0.0)) {
        fail(ErrorCode::invalid_argument, "radiation Q: v^H g0 v must be positive (nonphysical excitation)");
    }
    const double q = 0.5 * omega * real_form(v, w) / vgv + 0.5 * std::abs(real_form(v, b)) / vgv;
    return std::max(q, 0.0);
}

double q_rad_port(const CMatrix& y0, const CMatrix& w, const CVector& v, double omega) {
    return q_rad_port(y0.real().cast<cplx>(), y0.imag().cast<cplx>(), w, v, omega);
}

double q_rad_port_admittance_variant(const CMatrix& y0, const CMatrix& dy0, const CVector& v, double omega) {
    check_port_dims(y0, v, "q_rad_port_admittance_variant");
    const double g = real_form(v, y0.real().cast<cplx>());
    if (!(g > 0.0)) {
        fail(ErrorCode::invalid_argument, "radiation Q: v^H g0 v must be positive (nonphysical excitation)");
    }
    const double b = real_form(v, y0.imag().cast<cplx>());
    const double db = real_form(v, dy0.imag().cast<cplx>());
    return 0.5 * omega * std::abs(db) / g + 0.5 * std::abs(b) / g;
}

namespace {

struct MatchedTerms {
    CVector Ki_v;     // a
    CVector L_Yd_v;   // Lambda Y' v
    CVector b;
    RVector lam;
    CVector Yv;
};

MatchedTerms matched_terms(const CMatrix& y0, const CMatrix& dy0, const MatchingState& match,
                           const PortExcitation& v, double omega0) {
    const int n = match.ports();
    v.require_nonzero(n);
    if (y0.rows() != n || dy0.rows() != n) {
        fail(ErrorCode::invalid_argument, "Q: admittance and matching sizes disagree");
    }
    const CVector& x = v.vector();
    MatchedTerms t;
    t.lam = match.R0.cwiseSqrt();
    const CVector jb = j1 * match.susceptance(omega0).cast<cplx>();
    const CVector jbd = j1 * match.susceptance_derivative(omega0).cast<cplx>();
    t.Yv = y0 * x + jb.cwiseProduct(x);
    const CVector ydv = dy0 * x + jbd.cwiseProduct(x);
    const CVector inc = t.lam.cwiseInverse().cast<cplx>().cwiseProduct(x);
    const CVector ref = t.lam.cast<cplx>().cwiseProduct(t.Yv);
    t.Ki_v = 0.5 * (inc + ref);
    t.b = 0.5 * (inc - ref);
    t.L_Yd_v = t.lam.cast<cplx>().cwiseProduct(ydv);
    return t;
}

} // namespace

EtaCurvature eta_curvature(const CMatrix& y0, const CMatrix& dy0, const CMatrix& ddy0,
                           const MatchingState& match, const PortExcitation& v, double omega0) {
    const MatchedTerms t = matched_terms(y0, dy0, match, v, omega0);
    const double denom = t.Ki_v.squaredNorm();
    if (!(denom > 0.0)) {
        fail(ErrorCode::invalid_argument, "eta'': zero incident power");
    }
    const CVector& x = v.vector();
    const CVector jbdd = j1 * match.susceptance_second_derivative(omega0).cast<cplx>();
    const CVector yddv = ddy0 * x + jbdd.cwiseProduct(x);
    // L (L^-1 - L Y) v = v - L^2 Y v
    const CVector tail = x - match.R0.cast<cplx>().cwiseProduct(t.Yv);
    if (ddy0.rows() != match.ports() || ddy0.cols() != match.ports()) {
        fail(ErrorCode::invalid_argument, "eta'': second derivative has the wrong size");
    }
    EtaCurvature c;
    c.first = -0.5 * t.L_Yd_v.squaredNorm() / denom;
    c.second = 0.5 * yddv.dot(tail).real() / denom;
    return c;
}

double eta_second_derivative(const CMatrix& y0, const CMatrix& dy0, const CMatrix& ddy0,
                             const MatchingState& match, const PortExcitation& v, double omega0) {
    return eta_curvature(y0, dy0, ddy0, match, v, omega0).total();
}

double q_tarc(const CMatrix& y0, const CMatrix& dy0, const MatchingState& match, const PortExcitation& v,
              double omega0) {
    const MatchedTerms t = matched_terms(y0, dy0, match, v, omega0);
    const double a = t.Ki_v.norm();
    if (!(a > 0.0)) {
        fail(ErrorCode::invalid_argument, "Q_TARC: zero incident power");
    }
    if (t.b.norm() > 1e-8 * a) {
        std::ostringstream os;
        os << "Q_TARC norm form needs a matched state (|b|/|a| = " << t.b.norm() / a
           << "); use eta_second_derivative for unmatched feeds";
        fail(ErrorCode::synthesis, os.str());
    }
    return 0.5 * omega0 * t.L_Yd_v.norm() / a;
}

double q_from_curvature(double eta_dd, double omega0) {
    if (eta_dd > 0.0) {
        fail(ErrorCode::invalid_argument, "efficiency curvature is positive: omega0 is not an efficiency maximum");
    }
    return std::sqrt(-0.5 * omega0 * omega0 * eta_dd);
}

double q_zm(const CMatrix& y0, const CMatrix& dy0, const PortExcitation& v, double omega0) {
    const CVector& x = v.vector();
    check_port_dims(y0, x, "q_zm");
    check_port_dims(dy0, x, "q_zm");
    const double g = real_form(x, y0.real().cast<cplx>());
    if (!(g > 0.0)) {
        fail(ErrorCode::invalid_argument, "Q_ZM: v^H g0 v must be positive");
    }
    const double b = real_form(x, y0.imag().cast<cplx>());
    const double dg = real_form(x, dy0.real().cast<cplx>());
    const double db = real_form(x, dy0.imag().cast<cplx>());
    return omega0 * std::abs(cplx(dg, db + std::abs(b) / omega0)) / (2.0 * g);
}

double q_z(cplx Z, cplx dZ, double omega0) {
    if (!(Z.real() > 0.0)) {
        fail(ErrorCode::invalid_argument, "Q_Z needs a positive input resistance");
    }
    return omega0 * std::abs(dZ) / (2.0 * Z.real());
}

double tarc_approx(double Q, double omega0, double omega, double eta_max) {
    if (!(Q >= 0.0) || !(eta_max > 0.0 && eta_max <= 1.0) || !(omega0 > 0.0)) {
        fail(ErrorCode::invalid_argument, "tarc_approx needs Q >= 0, eta_max in (0, 1] and omega0 > 0");
    }
    const double delta = (omega - omega0) / omega0;
    if (eta_max == 1.0) {
        return std::min(1.0, Q * std::abs(delta));
    }
    const double g2 = 1.0 - eta_max + Q * Q * delta * delta;
    return std::clamp(std::sqrt(std::max(0.0, g2)), 0.0, 1.0);
}

double fbw_predict(double Q, double gamma_max) {
    if (!(gamma_max > 0.0 && gamma_max < 1.0)) {
        fail(ErrorCode::invalid_argument, "Gamma_max must lie in (0, 1)");
    }
    if (Q == 0.0) {
        fail(ErrorCode::unbounded_bandwidth, "Q = 0 predicts an unbounded bandwidth");
    }
    if (!(Q > 0.0)) {
        fail(ErrorCode::invalid_argument, "Q must be positive");
    }
    return 2.0 * gamma_max / Q;
}

double q_from_bandwidth(double F, double gamma_max) {
    if (!(F > 0.0)) {
        fail(ErrorCode::invalid_argument, "fractional bandwidth must be positive");
    }
    return 2.0 * gamma_max / F;
}

namespace {

double bisect(const CubicInterpolant& f, double lo, double hi, double target, double tol) {
    // f(lo) < target <= f(hi) or the mirror; keep the sign pattern.
    double flo = f(lo) - target;
    for (int it = 0; it < 200 && std::abs(hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid) - target;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

BandEdges fbw_sweep(const TarcCurve& curve, double omega0, double gamma_max) {
    const auto& w = curve.omega;
    const auto& t = curve.tarc;
    if (w.size() != t.size() || w.size() < 3) {
        fail(ErrorCode::invalid_argument, "TARC curve needs at least three samples");
    }
    if (!(gamma_max > 0.0 && gamma_max < 1.0)) {
        fail(ErrorCode::invalid_argument, "Gamma_max must lie in (0, 1)");
    }
    if (!(omega0 > w.front() && omega0 < w.back())) {
        fail(ErrorCode::range, "omega0 must lie inside the swept range");
    }
    const CubicInterpolant f(w, t);
    if (!(f(omega0) < gamma_max)) {
        fail(ErrorCode::empty_band, "TARC at omega0 is not below Gamma_max; the band is empty");
    }
    const double tol = 1e-10 * omega0;

    std::size_t up = 0;
    while (up < w.size() && w[up] <= omega0) {
        ++up;
    }
    std::size_t k = up;
    while (k < w.size() && t[k] < gamma_max) {
        ++k;
    }
    if (k == w.size()) {
        fail(ErrorCode::range, "upper band edge is not bracketed within the sweep; widen the span");
    }
    const double hi_lo = k == up ? omega0 : w[k - 1];
    const double plus = bisect(f, hi_lo, w[k], gamma_max, tol);

    std::size_t lo_idx = up;   // first index above omega0
    long m = static_cast<long>(lo_idx) - 1;
    while (m >= 0 && w[static_cast<std::size_t>(m)] >= omega0) {
        --m;
    }
    long first_below = m;
    while (m >= 0 && t[static_cast<std::size_t>(m)] < gamma_max) {
        --m;
    }
    if (m < 0) {
        fail(ErrorCode::range, "lower band edge is not bracketed within the sweep; widen the span");
    }
    const double lo_hi = m == first_below ? omega0 : w[static_cast<std::size_t>(m + 1)];
    const double minus = bisect(f, w[static_cast<std::size_t>(m)], lo_hi, gamma_max, tol);

    std::size_t inside = 0;
    for (double x : w) {
        inside += (x > minus && x < plus) ? 1 : 0;
    }
    if (inside < 3) {
        fail(ErrorCode::range, "fewer than three samples inside the band; refine the sweep");
    }
    return {(plus - minus) / omega0, minus, plus};
}

bool double_resonance(const TarcCurve& curve, const BandEdges& band, double omega0, double gamma_max) {
    if (std::abs(band.omega_plus + band.omega_minus - 2.0 * omega0) / omega0 > 0.2 * band.F) {
        return true;
    }
    const auto& w = curve.omega;
    const auto& t = curve.tarc;
    int minima = 0;
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if (w[i] <= band.omega_minus || w[i] >= band.omega_plus) {
            continue;
        }
        if (t[i] < gamma_max && t[i] < t[i - 1] && t[i] <= t[i + 1]) {
            ++minima;
        }
    }
    return minima > 1;
}

} // namespace mpq
