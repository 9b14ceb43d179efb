#include "helpers.hpp"
#include "mpq/error.hpp"
#include "mpq/momwire.hpp"
#include "mpq/portreduce.hpp"

#include <doctest.h>

using namespace mpq;

namespace {

constexpr cplx I1{0.0, 1.0};

constexpr double f0 = 1e9;
const double w0 = 2.0 * pi * f0;

cplx input_impedance(const WireArrayGeometry& g, double omega) {
    const MoMSystem sys = assemble(g, omega);
    return 1.0 / port_admittance(sys, LossModel::none(), PortReduction::of(sys))(0, 0);
}

// Induced-EMF input impedance of a centre-fed half-wave dipole with an
// assumed sinusoidal current, field evaluated on the wire surface.
cplx induced_emf_half_wave(double lambda, double radius) {
    const double k = 2.0 * pi / lambda;
    const double L = 0.5 * lambda;
    const double eta0 = mu0 * c0;
    const int n = 20000;
    cplx sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = -0.5 * L + (i + 0.5) * L / n;
        const double r1 = std::hypot(radius, z - 0.5 * L);
        const double r2 = std::hypot(radius, z + 0.5 * L);
        const cplx ez = -I1 * eta0 / (4.0 * pi) * (std::exp(-I1 * k * r1) / r1 + std::exp(-I1 * k * r2) / r2);
        sum += ez * std::sin(k * (0.5 * L - std::abs(z))) * (L / n);
    }
    return -sum;
}

} // namespace

TEST_SUITE("momwire") {

TEST_CASE("half-wave dipole input impedance") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0);
    CHECK(g.basis_count() == 31);
    const cplx z = input_impedance(g, w0);
    MESSAGE("Z_in = " << z);
    CHECK(z.real() >= 60.0);
    CHECK(z.real() <= 90.0);
    CHECK(z.imag() >= 20.0);
    CHECK(z.imag() <= 60.0);

    const cplx emf = induced_emf_half_wave(c0 / f0, g.wires[0].radius);
    MESSAGE("induced EMF = " << emf);
    CHECK(std::abs(emf - cplx(73.1, 42.5)) < 1.0);
    // The assumed sinusoidal current ignores the finite radius, so only coarse agreement.
    CHECK(std::abs(z - emf) / std::abs(emf) < 0.2);
}

TEST_CASE("reciprocity, passivity and translation symmetry") {
    const WireArrayGeometry g = dipole_array(2, f0, 0.125);
    const MoMSystem sys = assemble(g, w0);
    CHECK(symmetry_defect(sys.Z) < 1e-10);
    const RMatrix R = sys.R();
    CHECK(min_eigenvalue(R) >= -1e-8 * R.norm());

    const int n = 31;
    const CMatrix z11 = sys.Z.topLeftCorner(n, n);
    const CMatrix z22 = sys.Z.bottomRightCorner(n, n);
    const CMatrix z12 = sys.Z.topRightCorner(n, n);
    const CMatrix z21 = sys.Z.bottomLeftCorner(n, n);
    CHECK(relative_difference(z11, z22) < 1e-13);
    CHECK(relative_difference(z12, z21) < 1e-13);
}

TEST_CASE("mutual block does not depend on how the wires are listed") {
    WireArrayGeometry a = dipole_array(2, f0, 0.3);
    WireArrayGeometry b = a;
    std::swap(b.wires[0], b.wires[1]);
    const CMatrix za = assemble(a, w0).Z;
    const CMatrix zb = assemble(b, w0).Z;
    CHECK(relative_difference(za.topRightCorner(31, 31), zb.topRightCorner(31, 31)) < 1e-13);
}

TEST_CASE("segments coarser than lambda/10 are rejected") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0, 10);
    CHECK_NOTHROW(assemble(g, w0));
    try {
        (void)assemble(g, 2.0 * w0);
        FAIL("expected a geometry error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::geometry);
        CHECK(std::string(e.what()).find("segments") != std::string::npos);
    }
}

TEST_CASE("geometry validation") {
    Wire w;
    w.length = 0.15;
    w.radius = 1e-3;
    w.segments = 20;
    w.port_segment = 10;
    WireArrayGeometry g{{w}};
    CHECK_NOTHROW(g.validate());

    auto rejects = [](WireArrayGeometry bad) { CHECK_THROWS_AS(bad.validate(), Error); };
    WireArrayGeometry fat = g;
    fat.wires[0].radius = 0.15 / 40.0;
    rejects(fat);
    WireArrayGeometry odd = g;
    odd.wires[0].segments = 21;
    rejects(odd);
    WireArrayGeometry few = g;
    few.wires[0].segments = 8;
    few.wires[0].port_segment = 4;
    rejects(few);
    WireArrayGeometry skew = g;
    skew.wires.push_back(w);
    skew.wires[1].center = {0.1, 0.0, 0.0};
    skew.wires[1].axis = {0.0, 1.0, 1.0};
    rejects(skew);
    WireArrayGeometry close = g;
    close.wires.push_back(w);
    close.wires[1].center = {0.005, 0.0, 0.0};
    rejects(close);
    WireArrayGeometry noport = g;
    noport.wires[0].port_segment.reset();
    rejects(noport);
}

TEST_CASE("geometry JSON round trip") {
    WireArrayGeometry g = dipole_array(3, 1.3e9, 0.21);
    g.wires[1].port_segment.reset();
    const std::string text = g.to_json();
    const WireArrayGeometry back = WireArrayGeometry::from_json(text);
    CHECK(back.to_json() == text);
    CHECK(back.port_count() == 2);
    CHECK(back.wires[2].center.x() == g.wires[2].center.x());

    const WireArrayGeometry noaxis = WireArrayGeometry::from_json(
        R"({"wires":[{"length":0.15,"radius":0.0003,"center":[0,0,0],"segments":16,"port_segment":8}]})");
    CHECK(noaxis.wires[0].axis == Eigen::Vector3d::UnitZ());
    CHECK_THROWS_AS(WireArrayGeometry::from_json(R"({"wires":[{"length":0.15}]})"), Error);
    CHECK_THROWS_AS(WireArrayGeometry::from_json("not json"), Error);
}

TEST_CASE("impedance derivative: Richardson agrees with a single step, stored energy is positive") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0);
    const CMatrix rich = impedance_derivative(g, w0);
    const CMatrix single = impedance_central_difference(g, w0, 1e-5);
    CHECK(relative_difference(rich, single) < 1e-6);
    CHECK(symmetry_defect(rich) < 1e-12);

    const double w = 0.8 * w0;
    const MoMSystem sys = assemble(g, w);
    const CVector I = solve_current(sys, LossModel::none(), expand_voltage(PortReduction::of(sys), PortExcitation{1.0}));
    const CMatrix dZ = impedance_derivative(g, w);
    CHECK(I.dot(dZ.imag().cast<cplx>() * I).real() > 0.0);
}

TEST_CASE("port-level derivative scales as 1/c under frequency scaling") {
    const double c = 2.5;
    const WireArrayGeometry g = dipole_array(2, f0, 0.2);
    const WireArrayGeometry gc = dipole_array(2, c * f0, 0.2);
    auto dy = [](const WireArrayGeometry& geo, double w) {
        const MoMSystem sys = assemble(geo, w);
        return port_admittance_derivative(sys, impedance_derivative(geo, w), LossModel::none(),
                                          PortReduction::of(sys));
    };
    const CMatrix d1 = dy(g, w0);
    const CMatrix dc = dy(gc, c * w0);
    CHECK(relative_difference(dc, d1 / c) < 1e-3);
}

TEST_CASE("mesh convergence near resonance") {
    const cplx z32 = input_impedance(dipole_array(1, f0, 0.0, 32), w0);
    const cplx z64 = input_impedance(dipole_array(1, f0, 0.0, 64), w0);
    MESSAGE("Z32 = " << z32 << ", Z64 = " << z64);
    CHECK(std::abs(z64 - z32) / std::abs(z64) < 0.02);
}

TEST_CASE("solve_current") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0);
    const MoMSystem sys = assemble(g, w0);
    const PortReduction red = PortReduction::of(sys);
    CHECK(solve_current(sys, LossModel::none(), CVector::Zero(31)).norm() == 0.0);

    const CVector I = solve_current(sys, LossModel::none(), expand_voltage(red, PortExcitation{1.0}));
    const cplx port_current = red.d()[red.port_rows()[0]] * I[red.port_rows()[0]];
    const cplx zin = 1.0 / port_admittance(sys, LossModel::none(), red)(0, 0);
    CHECK(std::abs(port_current - 1.0 / zin) < 1e-12 * std::abs(port_current));

    const CVector V = CVector::Ones(31);
    const double alpha = 1e12;
    const CVector Ib = solve_current(sys, LossModel::uniform(31, alpha), V);
    CHECK(test::rel(Ib.norm(), V.norm() / alpha) < 1e-3);
    CHECK_THROWS_AS(solve_current(sys, LossModel::none(), CVector::Ones(5)), Error);
}

TEST_CASE("powers") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0);
    const MoMSystem sys = assemble(g, w0);
    const PortReduction red = PortReduction::of(sys);
    const Powers zero = powers(sys, LossModel::none(), CVector::Zero(31));
    CHECK(zero.radiated == 0.0);
    CHECK(zero.reactive == 0.0);

    const CVector I = solve_current(sys, LossModel::none(), expand_voltage(red, PortExcitation{1.0}));
    const Powers p = powers(sys, LossModel::none(), I);
    const Powers p3 = powers(sys, LossModel::none(), cplx(0.0, 3.0) * I);
    CHECK(p.radiated > 0.0);
    CHECK(test::rel(p3.radiated, 9.0 * p.radiated) < 1e-12);
    CHECK(test::rel(p3.reactive, 9.0 * p.reactive) < 1e-12);

    const LossModel loss = LossModel::wire_resistance(g, 2.0);
    CHECK_NOTHROW(loss.validate(31));
    CHECK(powers(sys, loss, I).loss > 0.0);
}

TEST_CASE("reactive power changes sign through resonance") {
    const WireArrayGeometry g = dipole_array(1, f0, 0.0);
    auto reactive = [&](double w) {
        const MoMSystem sys = assemble(g, w);
        const CVector I =
            solve_current(sys, LossModel::none(), expand_voltage(PortReduction::of(sys), PortExcitation{1.0}));
        return powers(sys, LossModel::none(), I).reactive;
    };
    CHECK(reactive(0.85 * w0) < 0.0);
    CHECK(reactive(1.0 * w0) > 0.0);
}

TEST_CASE("loss model validation") {
    LossModel bad;
    bad.resistance = RMatrix::Zero(2, 2);
    bad.resistance(0, 1) = 1.0;
    CHECK_THROWS_AS(bad.validate(2), Error);
    LossModel neg;
    neg.resistance = -RMatrix::Identity(2, 2);
    CHECK_THROWS_AS(neg.validate(2), Error);
    CHECK_THROWS_AS(LossModel::uniform(2, 1.0).validate(3), Error);
    CHECK_THROWS_AS(LossModel::wire_resistance(dipole_array(1, f0, 0.0), -1.0), Error);
}

} // TEST_SUITE
