#include "helpers.hpp"
#include "mpq/error.hpp"
#include "mpq/portreduce.hpp"

#include <doctest.h>

using namespace mpq;

namespace {

constexpr double f0 = 1e9;
const double w0 = 2.0 * pi * f0;

CMatrix y_at(const WireArrayGeometry& g, double w, const LossModel& loss = LossModel::none()) {
    const MoMSystem sys = assemble(g, w);
    return port_admittance(sys, loss, PortReduction::of(sys));
}

CMatrix dy_at(const WireArrayGeometry& g, double w, const LossModel& loss = LossModel::none()) {
    const MoMSystem sys = assemble(g, w);
    return port_admittance_derivative(sys, impedance_derivative(g, w), loss, PortReduction::of(sys));
}

CMatrix dy_fd(const WireArrayGeometry& g, double w, const LossModel& loss = LossModel::none()) {
    auto step = [&](double h) { return ((y_at(g, w + h, loss) - y_at(g, w - h, loss)) / (2.0 * h)).eval(); };
    const double h = 1e-4 * w;
    return (4.0 * step(0.5 * h) - step(h)) / 3.0;
}

} // namespace

TEST_SUITE("portreduce") {

TEST_CASE("analytic dy0 matches a finite difference of y0") {
    for (double d : {0.125, 0.4}) {
        const WireArrayGeometry g = dipole_array(2, f0, d);
        for (double s : {0.9, 1.0, 1.07}) {
            const double w = s * w0;
            const CMatrix a = dy_at(g, w);
            const CMatrix fd = dy_fd(g, w);
            CAPTURE(d);
            CAPTURE(s);
            CHECK(relative_difference(a, fd) < 1e-5);
            CHECK(symmetry_defect(a) < 1e-10);
        }
    }
}

TEST_CASE("conjugating the left admittance factor would be caught") {
    // A conjugate transpose in place of the plain one gives a different
    // matrix whenever y0 is not real.
    const WireArrayGeometry g = dipole_array(2, f0, 0.2);
    const MoMSystem sys = assemble(g, w0);
    const PortReduction red = PortReduction::of(sys);
    const CMatrix dZ = impedance_derivative(g, w0);
    const CMatrix Y = loaded_impedance(sys, LossModel::none()).inverse();
    const CMatrix dp = red.DP();
    const CMatrix wrong = -(dp.adjoint() * Y.adjoint() * dZ * Y * dp);
    const CMatrix fd = dy_fd(g, w0);
    CHECK(relative_difference(wrong, fd) > 1e-2);
    CHECK(relative_difference(dy_at(g, w0), fd) < 1e-5);
}

TEST_CASE("lossy dy0 matches a finite difference") {
    const WireArrayGeometry g = dipole_array(2, f0, 0.25);
    const LossModel loss = LossModel::wire_resistance(g, 20.0);
    CHECK(relative_difference(dy_at(g, w0, loss), dy_fd(g, w0, loss)) < 1e-5);
}

TEST_CASE("single port: dy0 = -Z'/Z^2") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0);
    const double h = 1e-4 * w0;
    const cplx zp = 1.0 / y_at(g, w0 + h)(0, 0);
    const cplx zm = 1.0 / y_at(g, w0 - h)(0, 0);
    const cplx z = 1.0 / y_at(g, w0)(0, 0);
    const cplx dz = (zp - zm) / (2.0 * h);
    CHECK(relative_difference(dy_at(g, w0)(0, 0), -dz / (z * z)) < 1e-6);
}

TEST_CASE("expand_voltage places D v on the port rows") {
    const PortReduction red(5, {1, 3}, (RVector(5) << 1.0, 0.2, 1.0, 0.3, 1.0).finished());
    const CVector V = expand_voltage(red, PortExcitation(CVector{{cplx(1.0, 2.0), cplx(-1.0, 0.0)}}));
    CHECK(V[0] == cplx(0.0));
    CHECK(V[1] == cplx(0.2, 0.4));
    CHECK(V[2] == cplx(0.0));
    CHECK(V[3] == cplx(-0.3, 0.0));
    CHECK(V[4] == cplx(0.0));
    CHECK_THROWS_AS(expand_voltage(red, PortExcitation{1.0}), Error);
}

TEST_CASE("reduction validation") {
    const RVector d = RVector::Ones(4);
    CHECK_THROWS_AS(PortReduction(4, {}, d), Error);
    CHECK_THROWS_AS(PortReduction(4, {1, 1}, d), Error);
    CHECK_THROWS_AS(PortReduction(4, {4}, d), Error);
    CHECK_THROWS_AS(PortReduction(4, {0}, RVector::Ones(3)), Error);
    CHECK_THROWS_AS(PortReduction(4, {0}, RVector::Zero(4)), Error);
}

TEST_CASE("feeding validation") {
    CHECK_THROWS_AS(PortExcitation{1.0}.require_nonzero(2), Error);
    CHECK_THROWS_AS((PortExcitation{0.0, 0.0}.require_nonzero(2)), Error);
    CHECK_NOTHROW((PortExcitation{0.0, 1.0}.require_nonzero(2)));
}

TEST_CASE("reduced power forms agree with basis-level forms") {
    const WireArrayGeometry g = dipole_array(2, f0, 0.3);
    const MoMSystem sys = assemble(g, 1.03 * w0);
    const PortReduction red = PortReduction::of(sys);
    const CMatrix dZ = impedance_derivative(g, 1.03 * w0);
    const PortResponse r = port_response(sys, dZ, LossModel::none(), red);
    const PortExcitation v(CVector{{cplx(1.0, 0.0), cplx(0.3, -0.7)}});
    const CVector I = solve_current(sys, LossModel::none(), expand_voltage(red, v));
    const CVector& vv = v.vector();

    const double rad = I.dot(sys.R().cast<cplx>() * I).real();
    CHECK(test::rel(vv.dot(r.g_rad * vv).real(), rad) < 1e-10);
    CHECK(test::rel(vv.dot(r.y0.real().cast<cplx>() * vv).real(), rad) < 1e-10);
    const double react = I.dot(sys.X().cast<cplx>() * I).real();
    CHECK(test::rel(vv.dot(r.x * vv).real(), react) < 1e-10);
    CHECK(test::rel(vv.dot(r.y0.imag().cast<cplx>() * vv).real(), -react) < 1e-10);
    const cplx wb = reduce_bilinear(dZ.imag().cast<cplx>(), sys, LossModel::none(), red, v);
    CHECK(test::rel(vv.dot(r.w * vv).real(), wb.real()) < 1e-10);
    CHECK(relative_difference(reduce_matrix(dZ.imag().cast<cplx>(), sys, LossModel::none(), red), r.w) < 1e-12);
    CHECK(relative_difference(r.y0, port_admittance(sys, LossModel::none(), red)) < 1e-12);
    CHECK(relative_difference(r.dy0, port_admittance_derivative(sys, dZ, LossModel::none(), red)) < 1e-12);
}

TEST_CASE("with loss the radiated-power form is smaller than Re y0") {
    const WireArrayGeometry g = dipole_array(2, f0, 0.3);
    const MoMSystem sys = assemble(g, w0);
    const LossModel loss = LossModel::wire_resistance(g, 50.0);
    const PortResponse r = port_response(sys, CMatrix(), loss, PortReduction::of(sys));
    const CVector v = CVector::Ones(2);
    const double total = v.dot(r.y0.real().cast<cplx>() * v).real();
    const double radiated = v.dot(r.g_rad * v).real();
    CHECK(radiated > 0.0);
    CHECK(radiated < total);
    CHECK(r.dy0.size() == 0);
}

} // TEST_SUITE
