#include "helpers.hpp"
#include "mpq/error.hpp"
#include "mpq/qcore.hpp"

#include <doctest.h>

#include <functional>

using namespace mpq;

namespace {

constexpr double f0 = 1e9;
const double w0 = 2.0 * pi * f0;

TarcCurve sampled(double omega0, double span, int points, const std::function<double(double)>& tarc_of_delta) {
    TarcCurve c;
    for (int i = 0; i < points; ++i) {
        const double delta = -span + 2.0 * span * i / (points - 1);
        c.omega.push_back(omega0 * (1.0 + delta));
        c.tarc.push_back(tarc_of_delta(delta));
    }
    return c;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::invalid_argument;
}

// Scalar admittance quadratic in omega around omega0.
struct ScalarLoad {
    cplx y0, y1, y2;
    cplx y(double w) const {
        const double d = w - w0;
        return y0 + y1 * d + y2 * d * d;
    }
};

} // namespace

TEST_SUITE("qcore") {

TEST_CASE("closed-form values") {
    CHECK(tarc_approx(10.0, w0, w0, 0.997) == doctest::Approx(std::sqrt(0.003)));
    CHECK(tarc_approx(10.0, w0, w0, 0.997) == doctest::Approx(0.0548).epsilon(1e-3));
    CHECK(tarc_approx(10.0, w0, 1.01 * w0) == doctest::Approx(0.1));
    CHECK(tarc_approx(10.0, w0, 1.5 * w0) == 1.0);
    CHECK(tarc_approx(10.0, w0, 0.99 * w0, 0.9) == doctest::Approx(std::sqrt(0.1 + 0.01)));
    CHECK(fbw_predict(10.0, 0.2) == doctest::Approx(0.04));
    CHECK(fbw_predict(40.0, 0.2) == doctest::Approx(0.01));
    CHECK(q_from_bandwidth(0.04, 0.2) == doctest::Approx(10.0));
    CHECK(code_of([] { (void)fbw_predict(0.0, 0.2); }) == ErrorCode::unbounded_bandwidth);
    CHECK(code_of([] { (void)fbw_predict(-1.0, 0.2); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { (void)fbw_predict(1.0, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { (void)tarc_approx(-1.0, w0, w0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { (void)q_from_curvature(1e-20, w0); }) == ErrorCode::invalid_argument);
    CHECK(q_from_curvature(-2.0 / (w0 * w0) * 25.0, w0) == doctest::Approx(5.0));
    CHECK(q_z(cplx(50.0, 10.0), cplx(0.0, 2e-8), w0) == doctest::Approx(w0 * 2e-8 / 100.0));
}

TEST_CASE("V-shaped curve gives the predicted bandwidth exactly") {
    for (double Q : {5.0, 10.0, 17.0}) {
        const TarcCurve c = sampled(w0, 0.1, 201, [Q](double d) { return std::min(1.0, Q * std::abs(d)); });
        for (double g : {0.1, 0.2, 0.3}) {
            const BandEdges b = fbw_sweep(c, w0, g);
            CAPTURE(Q);
            CAPTURE(g);
            // edges are bisected to 1e-10 omega0
            CHECK(std::abs(b.F - fbw_predict(Q, g)) < 4e-10);
            CHECK(test::rel(b.omega_plus - w0, w0 - b.omega_minus) < 1e-8);
            CHECK_FALSE(double_resonance(c, b, w0, g));
        }
    }
}

TEST_CASE("symmetric parabola: centred band, one minimum") {
    const TarcCurve c = sampled(w0, 0.1, 201, [](double d) { return 0.05 + 100.0 * d * d; });
    const BandEdges b = fbw_sweep(c, w0, 0.2);
    const double half = std::sqrt(0.15 / 100.0);
    CHECK(test::rel(b.F, 2.0 * half) < 1e-6);
    CHECK(std::abs(b.omega_plus + b.omega_minus - 2.0 * w0) / w0 < 1e-9);
    CHECK_FALSE(double_resonance(c, b, w0, 0.2));
}

TEST_CASE("double resonance is flagged") {
    // Two dips at +-2% inside one band.
    const TarcCurve w = sampled(w0, 0.1, 401, [](double d) {
        const double a = std::abs(d);
        return 0.02 + 5.0 * std::abs(a - 0.02) + (a > 0.04 ? 5.0 * (a - 0.04) : 0.0);
    });
    const BandEdges b = fbw_sweep(w, w0, 0.2);
    CHECK(double_resonance(w, b, w0, 0.2));

    // Lopsided band.
    const TarcCurve s = sampled(w0, 0.1, 201, [](double d) { return d < 0.0 ? 20.0 * -d : 2.0 * d; });
    const BandEdges bs = fbw_sweep(s, w0, 0.1);
    CHECK(double_resonance(s, bs, w0, 0.1));
}

TEST_CASE("fbw_sweep errors") {
    const TarcCurve v = sampled(w0, 0.1, 201, [](double d) { return 10.0 * std::abs(d); });
    CHECK(code_of([&] { (void)fbw_sweep(v, 2.0 * w0, 0.2); }) == ErrorCode::range);
    const TarcCurve high = sampled(w0, 0.1, 201, [](double d) { return 0.5 + std::abs(d); });
    CHECK(code_of([&] { (void)fbw_sweep(high, w0, 0.2); }) == ErrorCode::empty_band);
    const TarcCurve wide = sampled(w0, 0.1, 201, [](double d) { return std::abs(d); });
    try {
        (void)fbw_sweep(wide, w0, 0.2);
        FAIL("expected a range error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::range);
        CHECK(std::string(e.what()).find("upper") != std::string::npos);
    }
    const TarcCurve lop = sampled(w0, 0.1, 201, [](double d) { return d > 0.0 ? 10.0 * d : 0.5 * -d; });
    try {
        (void)fbw_sweep(lop, w0, 0.2);
        FAIL("expected a range error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("lower") != std::string::npos);
    }
    const TarcCurve sharp = sampled(w0, 0.1, 21, [](double d) { return 500.0 * std::abs(d); });
    CHECK(code_of([&] { (void)fbw_sweep(sharp, w0, 0.2); }) == ErrorCode::range);
    TarcCurve tiny;
    tiny.omega = {1.0, 2.0};
    tiny.tarc = {0.0, 0.0};
    CHECK(code_of([&] { (void)fbw_sweep(tiny, 1.5, 0.2); }) == ErrorCode::invalid_argument);
}

TEST_CASE("curvature formula against a finite difference of the matched efficiency") {
    const ScalarLoad load{cplx(0.012, -0.003), cplx(2e-12, 4e-11), cplx(-3e-22, 5e-22)};
    const PortExcitation v{1.0};
    const CMatrix y = CMatrix::Constant(1, 1, load.y(w0));
    const CMatrix dy = CMatrix::Constant(1, 1, load.y1);
    const CMatrix ddy = CMatrix::Constant(1, 1, 2.0 * load.y2);
    const MatchingState m = synthesize_match(y, v, w0);
    auto eta = [&](double w) { return total_efficiency(waves(CMatrix::Constant(1, 1, load.y(w)), m, w, v)); };
    auto second = [&](double h) { return (eta(w0 + h) - 2.0 * eta(w0) + eta(w0 - h)) / (h * h); };
    const double h = 1e-3 * w0;
    const double fd = (4.0 * second(0.5 * h) - second(h)) / 3.0;
    const EtaCurvature c = eta_curvature(y, dy, ddy, m, v, w0);
    CHECK(std::abs(c.second) < 1e-12 * std::abs(c.first));
    CHECK(test::rel(c.total(), fd) < 1e-4);
    CHECK(eta_second_derivative(y, dy, ddy, m, v, w0) == c.total());
    CHECK(test::rel(q_from_curvature(c.total(), w0), q_tarc(y, dy, m, v, w0)) < 1e-12);
}

TEST_CASE("single port: Q_tarc equals Q_zm, and Q_z agrees at resonance") {
    const ScalarLoad load{cplx(0.012, -0.003), cplx(2e-12, 4e-11), cplx(0.0)};
    const PortExcitation v{1.0};
    const CMatrix y = CMatrix::Constant(1, 1, load.y(w0));
    const CMatrix dy = CMatrix::Constant(1, 1, load.y1);
    const MatchingState m = synthesize_match(y, v, w0);
    CHECK(test::rel(q_tarc(y, dy, m, v, w0), q_zm(y, dy, v, w0)) < 1e-12);

    const cplx yr(0.012, 0.0);
    const cplx z = 1.0 / yr;
    const cplx dz = -load.y1 / (yr * yr);
    const CMatrix Yr = CMatrix::Constant(1, 1, yr);
    CHECK(test::rel(q_z(z, dz, w0), q_zm(Yr, dy, v, w0)) < 1e-12);
}

TEST_CASE("Q values do not depend on the feeding scale") {
    const CMatrix y0 = [] {
        const WireArrayGeometry g = dipole_array(2, f0, 0.3);
        const MoMSystem s = assemble(g, w0);
        return port_admittance(s, LossModel::none(), PortReduction::of(s));
    }();
    const WireArrayGeometry g = dipole_array(2, f0, 0.3);
    const MoMSystem sys = assemble(g, w0);
    const CMatrix dZ = impedance_derivative(g, w0);
    const PortResponse r = port_response(sys, dZ, LossModel::none(), PortReduction::of(sys));
    const CVector base{{cplx(1.0, 0.0), cplx(0.4, 0.2)}};
    const cplx scale(-3.0, 2.0);
    const PortExcitation v1(base), v2(CVector(scale * base));
    const double q1 = q_tarc(r.y0, r.dy0, synthesize_match(r.y0, v1, w0), v1, w0);
    const double q2 = q_tarc(r.y0, r.dy0, synthesize_match(r.y0, v2, w0), v2, w0);
    CHECK(test::rel(q1, q2) < 1e-10);
    CHECK(test::rel(q_zm(r.y0, r.dy0, v1, w0), q_zm(r.y0, r.dy0, v2, w0)) < 1e-10);
    CHECK(test::rel(q_rad_port(r.y0, r.w, v1.vector(), w0), q_rad_port(r.y0, r.w, v2.vector(), w0)) < 1e-10);
    CHECK(relative_difference(y0, r.y0) < 1e-14);
}

TEST_CASE("q_tarc refuses an unmatched state") {
    const CMatrix y = CMatrix::Constant(1, 1, cplx(0.01, 0.002));
    const MatchingState m =
        MatchingState::from_elements(RVector::Constant(1, 50.0), {ElementKind::capacitor}, {0.0}, w0);
    CHECK(code_of([&] { (void)q_tarc(y, y, m, PortExcitation{1.0}, w0); }) == ErrorCode::synthesis);
}

TEST_CASE("stored energies and radiation Q on both levels") {
    const WireArrayGeometry g = dipole_array(2, f0, 0.2);
    for (double s : {0.9, 1.0}) {
        const double w = s * w0;
        const MoMSystem sys = assemble(g, w);
        const PortReduction red = PortReduction::of(sys);
        const CMatrix dZ = impedance_derivative(g, w);
        const PortExcitation v{1.0, -0.5};
        const CVector I = solve_current(sys, LossModel::none(), expand_voltage(red, v));
        const StoredEnergies e = stored_energies(sys, dZ, I);
        const double ixi = I.dot(sys.X().cast<cplx>() * I).real();
        CHECK(test::rel(e.W_m - e.W_e, ixi / (4.0 * w)) < 1e-10);
        CHECK(test::rel(e.P_react, 0.5 * ixi) < 1e-12);
        CHECK_FALSE(e.indefinite);
        const PortResponse r = port_response(sys, dZ, LossModel::none(), red);
        CHECK(test::rel(q_rad_mom(sys, dZ, I), q_rad_port(r.y0, r.w, v.vector(), w)) < 1e-9);
        CHECK(test::rel(q_rad_port(r.y0, r.w, v.vector(), w), q_rad_port(r.g_rad, -r.x, r.w, v.vector(), w)) <
              1e-9);
        CHECK(q_rad_port_admittance_variant(r.y0, r.dy0, v.vector(), w) > 0.0);
    }
}

TEST_CASE("dimension and sign checks") {
    const CMatrix y = CMatrix::Constant(1, 1, cplx(-0.01, 0.0));
    CHECK(code_of([&] { (void)q_zm(y, y, PortExcitation{1.0}, w0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { (void)q_zm(CMatrix::Identity(2, 2), y, PortExcitation{1.0}, w0); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { (void)q_z(cplx(0.0, 1.0), cplx(1.0), w0); }) == ErrorCode::invalid_argument);
}

} // TEST_SUITE
