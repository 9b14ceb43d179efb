#pragma once

#include "mpq/matching.hpp"
#include "mpq/momwire.hpp"

#include <optional>
#include <vector>

namespace mpq {

struct StoredEnergies {
    double W_m = 0.0;          // J
    double W_e = 0.0;          // J
    double P_rad = 0.0;        // W
    double P_react = 0.0;      // var
    bool indefinite = false;   // W_m + W_e < 0: stored-energy form not positive here
};

/// W_m = I^H (w W + X) I / (8 w), W_e = I^H (w W - X) I / (8 w), W = Im dZ/dw.
StoredEnergies stored_energies(const MoMSystem& system, const CMatrix& dZ, const CVector& I);

/// Radiation Q from MoM currents:
/// (w/2) I^H W I / I^H R I + 1/2 |I^H X I| / I^H R I.
double q_rad_mom(const MoMSystem& system, const CMatrix& dZ, const CVector& I);

/// The same Q on port level; `w` is the reduced stored-energy matrix
/// (PortResponse::w), g0 and b0 are the real and imaginary parts of y0.
double q_rad_port(const CMatrix& y0, const CMatrix& w, const CVector& v, double omega);

/// Same with the radiated-power form g and reactive form b given separately
/// (lossy antennas: g is the reduction of Re Z alone, not Re y0).
double q_rad_port(const CMatrix& g, const CMatrix& b, const CMatrix& w, const CVector& v, double omega);

/// Port-level radiation Q with Im(dy0/dw) standing in for the reduced
/// stored-energy matrix. Only for comparison with q_rad_port.
double q_rad_port_admittance_variant(const CMatrix& y0, const CMatrix& dy0, const CVector& v, double omega);

/// Second derivative of total efficiency at omega0 in the two-term form
/// -1/2 v^H Y'^H L^2 Y' v / |K_i v|^2 + 1/2 Re{v^H Y''^H L (L^-1 - L Y) v} / |K_i v|^2,
/// Y = y0 + j B_L. Exact at a matched efficiency maximum; the second term
/// vanishes there.
struct EtaCurvature {
    double first = 0.0;    // reflection curvature, <= 0
    double second = 0.0;   // vanishes when b = 0
    double total() const { return first + second; }
};

EtaCurvature eta_curvature(const CMatrix& y0, const CMatrix& dy0, const CMatrix& ddy0,
                           const MatchingState& match, const PortExcitation& v, double omega0);

double eta_second_derivative(const CMatrix& y0, const CMatrix& dy0, const CMatrix& ddy0,
                             const MatchingState& match, const PortExcitation& v, double omega0);

/// TARC Q-factor (w0/2) |L Y' v| / |K_i v|. Requires |b| <= 1e-8 |a| at omega0.
double q_tarc(const CMatrix& y0, const CMatrix& dy0, const MatchingState& match, const PortExcitation& v,
              double omega0);

/// Q from the curvature form sqrt(-w0^2 eta'' / 2); throws if eta'' > 0.
double q_from_curvature(double eta_dd, double omega0);

/// Prior-art multiport Q computed from port matrices and the feeding alone.
double q_zm(const CMatrix& y0, const CMatrix& dy0, const PortExcitation& v, double omega0);

/// Single-port impedance Q, w0 |Z'| / (2 R).
double q_z(cplx Z, cplx dZ, double omega0);

/// First-order TARC model sqrt(1 - eta_max + Q^2 (w - w0)^2 / w0^2), clamped
/// to [0, 1]. With eta_max = 1 this is Q |w - w0| / w0.
double tarc_approx(double Q, double omega0, double omega, double eta_max = 1.0);

/// F = 2 Gamma_max / Q.
double fbw_predict(double Q, double gamma_max);

/// Q recovered from a measured fractional bandwidth, 2 Gamma_max / F.
double q_from_bandwidth(double F, double gamma_max);

struct TarcCurve {
    std::vector<double> omega;
    std::vector<double> tarc;
};

struct BandEdges {
    double F = 0.0;
    double omega_minus = 0.0;
    double omega_plus = 0.0;
};

/// Contiguous band around omega0 where TARC < gamma_max; edges by bisection
/// on the interpolated curve to 1e-10 relative.
BandEdges fbw_sweep(const TarcCurve& curve, double omega0, double gamma_max);

/// Two closely spaced resonances: edges off-centre by more than 0.2 F
/// (|w+ + w- - 2 w0| / w0 > 0.2 F) or more than one local TARC minimum below
/// gamma_max inside the band.
bool double_resonance(const TarcCurve& curve, const BandEdges& band, double omega0, double gamma_max);

/// Everything computed for one (frequency, feeding, matching) triple.
/// Optional entries are absent when the input does not support them.
struct QReport {
    double omega0 = 0.0;
    std::optional<double> Q_rad;                    // MoM level
    std::optional<double> Q_rad_port;               // reduced stored-energy matrix
    std::optional<double> Q_rad_admittance_variant; // Im(dy0/dw) instead
    std::optional<double> Q_tarc;
    std::optional<double> Q_tarc_curvature;         // sqrt(-w0^2 eta'' / 2)
    std::optional<double> eta_dd;                   // s^2
    std::optional<double> Q_zm;
    std::optional<double> Q_z;                      // single port, tuned by the match
    double gamma_max = 0.2;
    std::optional<double> F_predicted;
    std::optional<double> F_swept;
    std::optional<double> omega_minus;
    std::optional<double> omega_plus;
    std::optional<double> Q_fbw;
    double eta_max = 1.0;
    bool double_resonance = false;
};

} // namespace mpq
