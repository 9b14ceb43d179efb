#pragma once

#include "mpq/portreduce.hpp"

#include <vector>

namespace mpq {

enum class ElementKind { capacitor, inductor };

const char* to_string(ElementKind kind) noexcept;

/// Line resistances R0 and shunt tuning susceptances B_L, fixed at omega_ref.
/// Away from omega_ref R0 stays put and B_L follows its element: omega C for
/// a capacitor, -1/(omega L) for an inductor.
struct MatchingState {
    RVector R0;                         // ohm
    RVector B_L;                        // S at omega_ref
    std::vector<ElementKind> kind;
    double omega_ref = 0.0;

    int ports() const { return static_cast<int>(R0.size()); }
    void validate() const;

    /// Element value: farad for capacitors, henry for inductors. An exactly
    /// zero susceptance is a zero capacitor.
    double element_value(int port) const;

    RVector susceptance(double omega) const;
    RVector susceptance_derivative(double omega) const;
    RVector susceptance_second_derivative(double omega) const;

    /// Builds a state from R0 and element values (F or H).
    static MatchingState from_elements(RVector R0, const std::vector<ElementKind>& kind,
                                       const std::vector<double>& values, double omega_ref);
};

struct WavePair {
    CVector a;   // incident power waves, sqrt(W)
    CVector b;   // reflected power waves

    double incident_power() const { return 0.5 * a.squaredNorm(); }
    double reflected_power() const { return 0.5 * b.squaredNorm(); }
};

/// a = 1/2 (L^-1 + L (y0 + j B_L)) v, b = 1/2 (L^-1 - L (y0 + j B_L)) v, L = diag(sqrt R0).
WavePair waves(const CMatrix& y0, const MatchingState& match, double omega, const PortExcitation& v);

/// Shunt element plus line resistance per port making b = 0 at omega0 for v.
/// Needs v_p != 0 and Re(i_p / v_p) > 0 on every port.
MatchingState synthesize_match(const CMatrix& y0, const PortExcitation& v, double omega0);

/// Total efficiency 1 - |b|^2/|a|^2 - P_loss/P_in.
double total_efficiency(const WavePair& w, double p_loss = 0.0);

/// sqrt(1 - eta) clamped to [0, 1].
double tarc(const WavePair& w, double p_loss = 0.0);

} // namespace mpq
