#pragma once

#include "mpq/netparam.hpp"
#include "mpq/qcore.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpq {

struct SweepOptions {
    double span = 0.1;   // fraction of omega0 on each side
    int points = 201;    // odd, so omega0 is a grid point

    void validate() const;
};

/// Equidistant centre-fed half-wave dipoles along x.
struct ArraySpec {
    int count = 2;
    double d_over_lambda = 0.125;
    int segments = 32;
    double radius_over_lambda = 1e-3;
};

enum class LossKind { none, wire_resistance, target_efficiency };

struct LossOptions {
    LossKind kind = LossKind::none;
    double value = 0.0;   // ohm/m for wire_resistance, eta_rad(omega0) for target_efficiency
};

enum class SourceKind { array, geometry, touchstone };

struct Scenario {
    std::string name = "scenario";
    SourceKind source = SourceKind::array;
    ArraySpec array;
    WireArrayGeometry geometry;       // SourceKind::geometry
    std::string touchstone_path;      // SourceKind::touchstone
    double f0_hz = 1e9;
    PortExcitation feeding;
    std::string feeding_label;
    double gamma_max = 0.2;
    SweepOptions sweep;
    std::optional<MatchingState> match;   // empty: synthesise at omega0
    LossOptions loss;

    void validate() const;
    double omega0() const;
};

/// Named feedings: "in-phase" / "out-of-phase" for two ports, "triangle",
/// "binomial", "chebyshev" for five. Throws for anything else.
PortExcitation named_feeding(const std::string& name, int ports);

Scenario dipoles2_scenario(double d_over_lambda, const std::string& feeding, double gamma_max = 0.2);
Scenario dipoles5_scenario(double d_over_lambda, const std::string& feeding, double gamma_max = 0.2);

/// Scenario from JSON; see docs/formats.md for the field list.
Scenario scenario_from_json(const std::string& text);

struct CurveRow {
    double omega = 0.0;
    double tarc = 0.0;
    double tarc_approx = 0.0;
    double eta = 0.0;
};

struct FbwRow {
    double gamma_max = 0.0;
    std::optional<double> F_predicted;
    std::optional<double> F_swept;
};

struct Provenance {
    std::string source;              // "wire-array" or "touchstone"
    std::string hash;                // FNV-1a 64 of the canonical geometry or the file bytes, hex
    std::string derivative_method;
};

struct RunResult {
    Scenario scenario;
    QReport q;
    std::optional<MatchingState> match;
    Provenance provenance;
    std::vector<CurveRow> curve;
    std::vector<FbwRow> fbw_table;
    std::optional<MultiportNetwork> admittance;   // y0 over the sweep grid
    std::vector<cplx> input_admittance;           // active y_in per port at omega0
    double eta_dd_second_term = 0.0;              // unmatched-branch contribution
    double reciprocity_defect = 0.0;
    bool stored_energy_indefinite = false;
    std::vector<std::string> warnings;
    std::vector<std::string> errors;
};

RunResult run(const Scenario& scenario);

struct SweepRow {
    double d_over_lambda = 0.0;
    QReport q;
    std::string error;
};

/// Runs `scenario` once per spacing in linspace(from, to, count); rows come
/// back in parameter order whatever the thread count.
std::vector<SweepRow> sweep_spacing(const Scenario& scenario, double from, double to, int count,
                                    unsigned threads = 0);

std::uint64_t fnv1a64(std::string_view bytes);

// Text outputs (report.cpp).
std::string report_json(const RunResult& result);
std::string curve_csv(const RunResult& result);
std::string fbw_csv(const RunResult& result);
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace mpq
