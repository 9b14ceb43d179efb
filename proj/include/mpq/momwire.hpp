#pragma once

#include "mpq/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mpq {

/// One straight PEC wire. The delta gap, if any, sits at the lower boundary
/// node of segment `port_segment`, so the centred feed of an even segment
/// count is `segments / 2`.
struct Wire {
    double length = 0.0;                          // m
    double radius = 0.0;                          // m
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    int segments = 0;
    std::optional<int> port_segment;

    double segment_length() const { return length / segments; }
};

/// Parallel thin-wire array. Validation enforces the thin-wire kernel limits:
/// radius < length / 50, radius < (smallest inter-wire gap) / 4, even segment
/// counts of at least 10, identical axes.
struct WireArrayGeometry {
    std::vector<Wire> wires;

    void validate() const;
    int basis_count() const;
    int port_count() const;
    double max_segment_length() const;

    /// Canonical JSON text; its hash identifies the geometry in reports.
    std::string to_json() const;
    static WireArrayGeometry from_json(const std::string& text);
};

/// `count` identical centre-fed half-wave dipoles along x at spacing d,
/// sized for free-space wavelength c0 / f0. Radius defaults to lambda0 / 1000;
/// 32 segments give 31 basis functions per dipole.
WireArrayGeometry dipole_array(int count, double f0_hz, double d_over_lambda, int segments = 32,
                               double radius_over_lambda = 1e-3);

/// Triangle-basis bookkeeping: basis n lives on wire `wire[n]`, peaks at
/// node `node[n]` (1 .. segments-1), and is scaled to a peak value equal to
/// its segment length so that a delta gap contributes length x volts.
struct BasisLayout {
    std::vector<int> wire;
    std::vector<int> node;
    std::vector<double> segment_length;
    std::vector<int> port_rows;   // basis index of each port, wire order

    static BasisLayout of(const WireArrayGeometry& geometry);
    int size() const { return static_cast<int>(wire.size()); }
};

/// Galerkin impedance matrix at one angular frequency.
struct MoMSystem {
    WireArrayGeometry geometry;
    BasisLayout layout;
    double omega = 0.0;
    CMatrix Z;                    // complex symmetric, N x N

    int size() const { return static_cast<int>(Z.rows()); }
    RMatrix R() const { return Z.real(); }
    RMatrix X() const { return Z.imag(); }
};

/// Ohmic loss matrix R_L added to Z; empty means lossless.
struct LossModel {
    RMatrix resistance;

    static LossModel none() { return {}; }
    static LossModel uniform(int n, double ohms);
    /// Distributed series resistance (ohm per metre) along every wire:
    /// R_L = r * Gram matrix of the basis functions.
    static LossModel wire_resistance(const WireArrayGeometry& geometry, double ohm_per_metre);

    bool empty() const { return resistance.size() == 0; }
    void validate(int n) const;
};

MoMSystem assemble(const WireArrayGeometry& geometry, double omega);

/// Plain central difference [Z(w(1+h)) - Z(w(1-h))] / (2 w h).
CMatrix impedance_central_difference(const WireArrayGeometry& geometry, double omega, double h);

/// dZ/domega: central differences at relative steps h and h/2 combined by one
/// Richardson level. Symmetrised on return.
CMatrix impedance_derivative(const WireArrayGeometry& geometry, double omega, double h = 1e-5);

/// (Z + R_L)^{-1} V with a residual check at 1e-10.
CVector solve_current(const MoMSystem& system, const LossModel& loss, const CVector& V);

struct Powers {
    double radiated = 0.0;    // W, 1/2 I^H R I
    double reactive = 0.0;    // var, 1/2 I^H X I
    double loss = 0.0;        // W, 1/2 I^H R_L I
};

Powers powers(const MoMSystem& system, const LossModel& loss, const CVector& I);

/// Z + R_L as a complex matrix.
CMatrix loaded_impedance(const MoMSystem& system, const LossModel& loss);

} // namespace mpq
