#include "mpq/scenario.hpp"

#include "mpq/error.hpp"
#include "mpq/matching.hpp"
#include "mpq/momwire.hpp"
#include "mpq/portreduce.hpp"
#include "mpq/touchstone.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace mpq {

namespace {

constexpr double ddy0_step = 1e-4;

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double real_form(const CVector& v, const CMatrix& m) {
    return v.dot(m * v).real();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void SweepOptions::validate() const {
    if (points < 21 || points % 2 == 0) {
        fail(ErrorCode::invalid_argument, "sweep needs an odd number of points >= 21 so omega0 is on the grid");
    }
    if (!(span > 0.0 && span <= 0.5)) {
        fail(ErrorCode::invalid_argument, "sweep span must lie in (0, 0.5]");
    }
}

double Scenario::omega0() const {
    return 2.0 * pi * f0_hz;
}

void Scenario::validate() const {
    sweep.validate();
    if (!(f0_hz > 0.0) || !std::isfinite(f0_hz)) {
        fail(ErrorCode::invalid_argument, "f0 must be a positive frequency in Hz");
    }
    if (!(gamma_max > 0.0 && gamma_max < 1.0)) {
        fail(ErrorCode::invalid_argument, "gamma_max must lie in (0, 1)");
    }
    if (source == SourceKind::array) {
        if (array.count < 1) {
            fail(ErrorCode::invalid_argument, "array needs at least one dipole");
        }
        const double lo = 0.05;
        const double hi = array.count == 5 ? 1.0 : 2.0;
        if (array.count > 1 && !(array.d_over_lambda >= lo && array.d_over_lambda <= hi)) {
            fail(ErrorCode::invalid_argument, "d/lambda0 = " + fmt("%g", array.d_over_lambda) + " outside [" +
                                                  fmt("%g", lo) + ", " + fmt("%g", hi) + "]");
        }
    }
    if (source == SourceKind::touchstone && touchstone_path.empty()) {
        fail(ErrorCode::invalid_argument, "touchstone scenario needs a file path");
    }
    if (loss.kind == LossKind::wire_resistance && !(loss.value >= 0.0)) {
        fail(ErrorCode::invalid_argument, "wire resistance must be >= 0 ohm/m");
    }
    if (loss.kind == LossKind::target_efficiency && !(loss.value > 0.0 && loss.value < 1.0)) {
        fail(ErrorCode::invalid_argument, "target radiation efficiency must lie in (0, 1)");
    }
    if (loss.kind != LossKind::none && source == SourceKind::touchstone) {
        fail(ErrorCode::invalid_argument, "loss models apply to wire scenarios only");
    }
    if (match) {
        match->validate();
    }
}

PortExcitation named_feeding(const std::string& name, int ports) {
    if (ports == 2) {
        if (name == "in-phase" || name == "I") {
            return PortExcitation{1.0, 1.0};
        }
        if (name == "out-of-phase" || name == "O") {
            return PortExcitation{1.0, -1.0};
        }
    }
    if (ports == 5) {
        if (name == "triangle") {
            return PortExcitation{1.0, 2.0, 3.0, 2.0, 1.0};
        }
        if (name == "binomial") {
            return PortExcitation{1.0, 4.0, 6.0, 4.0, 1.0};
        }
        if (name == "chebyshev") {
            return PortExcitation{1.0, 1.61, 1.94, 1.61, 1.0};
        }
    }
    if (ports == 1 && (name == "single" || name.empty())) {
        return PortExcitation{1.0};
    }
    fail(ErrorCode::invalid_argument, "unknown feeding '" + name + "' for " + std::to_string(ports) + " ports");
}

Scenario dipoles2_scenario(double d_over_lambda, const std::string& feeding, double gamma_max) {
    Scenario s;
    s.name = "dipoles2";
    s.array.count = 2;
    s.array.d_over_lambda = d_over_lambda;
    s.feeding = named_feeding(feeding, 2);
    s.feeding_label = feeding;
    s.gamma_max = gamma_max;
    return s;
}

Scenario dipoles5_scenario(double d_over_lambda, const std::string& feeding, double gamma_max) {
    Scenario s;
    s.name = "dipoles5";
    s.array.count = 5;
    s.array.d_over_lambda = d_over_lambda;
    s.feeding = named_feeding(feeding, 5);
    s.feeding_label = feeding;
    s.gamma_max = gamma_max;
    return s;
}

namespace {

using nlohmann::json;

PortExcitation feeding_from_json(const json& j) {
    std::vector<cplx> v;
    for (const json& e : j) {
        if (e.is_number()) {
            v.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2) {
            v.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            fail(ErrorCode::parse, "feeding entries are numbers or [re, im] pairs");
        }
    }
    CVector x(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        x[static_cast<Eigen::Index>(i)] = v[i];
    }
    return PortExcitation(std::move(x));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::io, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int port_count_of(const Scenario& s) {
    switch (s.source) {
    case SourceKind::array:
        return s.array.count;
    case SourceKind::geometry:
        return s.geometry.port_count();
    case SourceKind::touchstone:
        return ports_from_extension(s.touchstone_path);
    }
    return 0;
}

} // namespace

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, std::string("scenario JSON: ") + e.what());
    }
    if (!j.is_object()) {
        fail(ErrorCode::parse, "scenario JSON must be an object");
    }
    try {
        Scenario s;
        const std::string kind = j.value("kind", std::string("dipoles2"));
        s.name = j.value("name", kind);
        if (kind == "dipoles2" || kind == "dipoles5") {
            s.source = SourceKind::array;
            s.array.count = kind == "dipoles2" ? 2 : 5;
        } else if (kind == "array") {
            s.source = SourceKind::array;
            s.array.count = j.at("count").get<int>();
        } else if (kind == "geometry") {
            s.source = SourceKind::geometry;
            if (j.contains("geometry")) {
                s.geometry = WireArrayGeometry::from_json(j.at("geometry").dump());
            } else {
                s.geometry = WireArrayGeometry::from_json(read_file(j.at("geometry_file").get<std::string>()));
            }
        } else if (kind == "analyze") {
            s.source = SourceKind::touchstone;
            s.touchstone_path = j.at("touchstone").get<std::string>();
        } else {
            fail(ErrorCode::parse, "unknown scenario kind '" + kind + "'");
        }
        s.array.d_over_lambda = j.value("d_over_lambda", s.array.d_over_lambda);
        s.array.segments = j.value("segments", s.array.segments);
        s.array.radius_over_lambda = j.value("radius_over_lambda", s.array.radius_over_lambda);
        s.f0_hz = j.value("f0_hz", s.f0_hz);
        s.gamma_max = j.value("gamma_max", s.gamma_max);
        if (j.contains("sweep")) {
            const json& sw = j.at("sweep");
            s.sweep.span = sw.value("span", s.sweep.span);
            s.sweep.points = sw.value("points", s.sweep.points);
        }
        const int ports = port_count_of(s);
        if (j.contains("feeding")) {
            const json& f = j.at("feeding");
            if (f.is_string()) {
                s.feeding_label = f.get<std::string>();
                s.feeding = named_feeding(s.feeding_label, ports);
            } else {
                s.feeding = feeding_from_json(f);
                s.feeding_label = "custom";
            }
        } else {
            const char* def = ports == 2 ? "in-phase" : ports == 5 ? "triangle" : "single";
            if (ports == 1 || ports == 2 || ports == 5) {
                s.feeding_label = def;
                s.feeding = named_feeding(def, ports);
            } else {
                fail(ErrorCode::invalid_argument, "scenario needs an explicit feeding vector");
            }
        }
        if (j.contains("match") && !j.at("match").is_null()) {
            const json& m = j.at("match");
            RVector r0(static_cast<Eigen::Index>(m.at("R0").size()));
            for (std::size_t i = 0; i < m.at("R0").size(); ++i) {
                r0[static_cast<Eigen::Index>(i)] = m.at("R0")[i].get<double>();
            }
            std::vector<ElementKind> kinds;
            std::vector<double> values;
            for (const json& e : m.at("elements")) {
                const std::string k = e.at("kind").get<std::string>();
                if (k != "capacitor" && k != "inductor") {
                    fail(ErrorCode::parse, "element kind must be 'capacitor' or 'inductor'");
                }
                kinds.push_back(k == "capacitor" ? ElementKind::capacitor : ElementKind::inductor);
                values.push_back(e.at("value").get<double>());
            }
            s.match = MatchingState::from_elements(std::move(r0), kinds, values, s.omega0());
        }
        if (j.contains("loss") && !j.at("loss").is_null()) {
            const json& l = j.at("loss");
            if (l.contains("wire_resistance")) {
                s.loss = {LossKind::wire_resistance, l.at("wire_resistance").get<double>()};
            } else if (l.contains("target_efficiency")) {
                s.loss = {LossKind::target_efficiency, l.at("target_efficiency").get<double>()};
            } else {
                fail(ErrorCode::parse, "loss needs 'wire_resistance' or 'target_efficiency'");
            }
        }
        return s;
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, std::string("scenario JSON: ") + e.what());
    }
}

namespace {

WireArrayGeometry geometry_of(const Scenario& s) {
    if (s.source == SourceKind::geometry) {
        return s.geometry;
    }
    return dipole_array(s.array.count, s.f0_hz, s.array.d_over_lambda, s.array.segments,
                        s.array.radius_over_lambda);
}

// Radiation efficiency v^H g_rad v / v^H Re(y0) v at omega.
double radiation_efficiency(const MoMSystem& sys, const LossModel& loss, const PortReduction& red,
                            const CVector& v) {
    const PortResponse r = port_response(sys, CMatrix(), loss, red);
    return real_form(v, r.g_rad) / real_form(v, r.y0.real().cast<cplx>());
}

// Wire resistance (ohm/m) giving radiation efficiency `target` at omega0.
double resistance_for_efficiency(const MoMSystem& sys, const PortReduction& red, const CVector& v,
                                 double target) {
    auto eff = [&](double r) {
        return radiation_efficiency(sys, LossModel::wire_resistance(sys.geometry, r), red, v);
    };
    double lo = 0.0;
    double hi = 1e-3;
    while (eff(hi) > target) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e12) {
            fail(ErrorCode::range, "cannot reach the requested radiation efficiency");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eff(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct FrequencyPoint {
    CMatrix y0;
    double p_loss_form = 0.0;   // v^H (Re y0 - g_rad) v
};

void fill_bandwidth(RunResult& out, const FrequencyGrid& grid, const std::vector<double>& tarc_values) {
    QReport& q = out.q;
    const TarcCurve curve{grid.omega(), tarc_values};
    try {
        const BandEdges band = fbw_sweep(curve, q.omega0, q.gamma_max);
        q.F_swept = band.F;
        q.omega_minus = band.omega_minus;
        q.omega_plus = band.omega_plus;
        q.Q_fbw = q_from_bandwidth(band.F, q.gamma_max);
        q.double_resonance = double_resonance(curve, band, q.omega0, q.gamma_max);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("swept bandwidth: ") + e.what());
    }
    for (int i = 1; i <= 10; ++i) {
        FbwRow row;
        row.gamma_max = 0.05 * i;
        if (q.Q_tarc && *q.Q_tarc > 0.0) {
            row.F_predicted = fbw_predict(*q.Q_tarc, row.gamma_max);
        }
        try {
            row.F_swept = fbw_sweep(curve, q.omega0, row.gamma_max).F;
        } catch (const Error&) {
        }
        out.fbw_table.push_back(row);
    }
}

// Shared tail of both pipelines: Q_TARC, curvature, swept TARC and bandwidth.
// `points` holds y0 (and the loss form) on the sweep grid.
void matched_analysis(RunResult& out, const FrequencyGrid& grid, const std::vector<FrequencyPoint>& points,
                      const CMatrix& y0, const CMatrix& dy0, const CMatrix& ddy0, double p_loss_form0) {
    const Scenario& s = out.scenario;
    const double w0 = s.omega0();
    QReport& q = out.q;
    const PortExcitation& v = s.feeding;

    if (s.match) {
        out.match = s.match;
    } else {
        try {
            out.match = synthesize_match(y0, v, w0);
        } catch (const Error& e) {
            out.errors.push_back(std::string("match synthesis: ") + e.what());
            return;
        }
    }
    const MatchingState& m = *out.match;
    if (m.ports() != v.size()) {
        out.errors.push_back("matching state and feeding have different port counts");
        out.match.reset();
        return;
    }

    const WavePair w0waves = waves(y0, m, w0, v);
    q.eta_max = total_efficiency(w0waves, 0.5 * p_loss_form0);
    const double eta_rad = 1.0 - 0.5 * p_loss_form0 / (w0waves.incident_power() -
                                                       w0waves.reflected_power());

    const EtaCurvature c = eta_curvature(y0, dy0, ddy0, m, v, w0);
    out.eta_dd_second_term = c.second;
    // With the radiation efficiency held at its omega0 value the total
    // efficiency curvature is eta_rad times the reflection curvature.
    q.eta_dd = eta_rad * c.total();
    try {
        q.Q_tarc_curvature = q_from_curvature(*q.eta_dd, w0);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("curvature Q: ") + e.what());
    }
    try {
        q.Q_tarc = std::sqrt(eta_rad) * q_tarc(y0, dy0, m, v, w0);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("Q_TARC: ") + e.what());
    }
    if (q.Q_tarc && *q.Q_tarc > 0.0) {
        q.F_predicted = fbw_predict(*q.Q_tarc, q.gamma_max);
    }
    if (m.ports() == 1) {
        // Impedance Q of the tuned antenna: the matching susceptance is part of Z.
        const cplx yt = y0(0, 0) + j1 * m.susceptance(w0)[0];
        const cplx dyt = dy0(0, 0) + j1 * m.susceptance_derivative(w0)[0];
        try {
            q.Q_z = q_z(1.0 / yt, -dyt / (yt * yt), w0);
        } catch (const Error& e) {
            out.warnings.push_back(std::string("Q_Z: ") + e.what());
        }
    }

    std::vector<double> tarc_values;
    tarc_values.reserve(grid.size());
    out.curve.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        const WavePair wp = waves(points[i].y0, m, w, v);
        CurveRow row;
        row.omega = w;
        row.eta = total_efficiency(wp, 0.5 * points[i].p_loss_form);
        row.tarc = std::clamp(std::sqrt(std::max(0.0, 1.0 - row.eta)), 0.0, 1.0);
        row.tarc_approx = q.Q_tarc ? tarc_approx(*q.Q_tarc, w0, w, q.eta_max) : std::nan("");
        tarc_values.push_back(row.tarc);
        out.curve.push_back(row);
    }
    fill_bandwidth(out, grid, tarc_values);
}

void port_level_q(RunResult& out, const CMatrix& y0, const CMatrix& dy0) {
    const Scenario& s = out.scenario;
    const double w0 = s.omega0();
    const CVector& v = s.feeding.vector();
    const CVector i = y0 * v;
    out.input_admittance.clear();
    for (int p = 0; p < v.size(); ++p) {
        out.input_admittance.push_back(v[p] == cplx(0.0) ? cplx(std::nan(""), std::nan("")) : i[p] / v[p]);
    }
    try {
        out.q.Q_zm = q_zm(y0, dy0, s.feeding, w0);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("Q_ZM: ") + e.what());
    }
    try {
        out.q.Q_rad_admittance_variant = q_rad_port_admittance_variant(y0, dy0, v, w0);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("admittance-variant Q_rad: ") + e.what());
    }
}

RunResult run_wire(const Scenario& s) {
    RunResult out;
    out.scenario = s;
    const double w0 = s.omega0();
    out.q.omega0 = w0;
    out.q.gamma_max = s.gamma_max;

    const WireArrayGeometry geometry = geometry_of(s);
    geometry.validate();
    const PortReduction red = PortReduction::of(geometry);
    s.feeding.require_nonzero(red.port_count());
    const CVector& v = s.feeding.vector();

    out.provenance.source = "wire-array";
    out.provenance.hash = hex64(fnv1a64(geometry.to_json()));
    out.provenance.derivative_method =
        "analytic port-admittance derivative; dZ/domega by Richardson central differences (h = 1e-5)";

    const MoMSystem sys0 = assemble(geometry, w0);
    LossModel loss;
    switch (s.loss.kind) {
    case LossKind::none:
        break;
    case LossKind::wire_resistance:
        loss = LossModel::wire_resistance(geometry, s.loss.value);
        break;
    case LossKind::target_efficiency:
        loss = LossModel::wire_resistance(geometry, resistance_for_efficiency(sys0, red, v, s.loss.value));
        break;
    }

    const CMatrix dZ0 = impedance_derivative(geometry, w0);
    const PortResponse r0 = port_response(sys0, dZ0, loss, red);
    out.reciprocity_defect = symmetry_defect(r0.y0);

    // Radiation Q on both levels.
    const CVector I = solve_current(sys0, loss, expand_voltage(red, s.feeding));
    try {
        out.stored_energy_indefinite = stored_energies(sys0, dZ0, I).indefinite;
        out.q.Q_rad = q_rad_mom(sys0, dZ0, I);
        out.q.Q_rad_port = q_rad_port(r0.g_rad, r0.y0.imag().cast<cplx>(), r0.w, v, w0);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("Q_rad: ") + e.what());
    }
    port_level_q(out, r0.y0, r0.dy0);

    // ddy0 from central differences of the analytic first derivative.
    CMatrix ddy0;
    {
        const double h = ddy0_step;
        const MoMSystem sp = assemble(geometry, w0 * (1.0 + h));
        const MoMSystem sm = assemble(geometry, w0 * (1.0 - h));
        const CMatrix dp = port_admittance_derivative(sp, impedance_derivative(geometry, sp.omega), loss, red);
        const CMatrix dm = port_admittance_derivative(sm, impedance_derivative(geometry, sm.omega), loss, red);
        ddy0 = (dp - dm) / (2.0 * h * w0);
    }

    const FrequencyGrid grid = FrequencyGrid::around(w0, s.sweep.span, s.sweep.points);
    std::vector<FrequencyPoint> points(grid.size());
    std::vector<CMatrix> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const PortResponse r = port_response(assemble(geometry, grid[i]), CMatrix(), loss, red);
        points[i].y0 = r.y0;
        points[i].p_loss_form = loss.empty() ? 0.0 : real_form(v, r.y0.real().cast<cplx>()) - real_form(v, r.g_rad);
        samples[i] = r.y0;
    }
    out.admittance = MultiportNetwork(grid, NetworkKind::admittance, std::move(samples), 50.0);

    const double p_loss0 =
        loss.empty() ? 0.0 : real_form(v, r0.y0.real().cast<cplx>()) - real_form(v, r0.g_rad);
    matched_analysis(out, grid, points, r0.y0, r0.dy0, ddy0, p_loss0);
    return out;
}

RunResult run_sampled(const Scenario& s) {
    RunResult out;
    out.scenario = s;
    const double w0 = s.omega0();
    out.q.omega0 = w0;
    out.q.gamma_max = s.gamma_max;

    const std::string bytes = read_file(s.touchstone_path);
    const int ports = ports_from_extension(s.touchstone_path);
    if (ports == 0) {
        fail(ErrorCode::parse, "cannot infer the port count from '" + s.touchstone_path + "'");
    }
    const MultiportNetwork y = to_admittance(parse_touchstone(bytes, ports));
    s.feeding.require_nonzero(y.ports());
    out.provenance.source = "touchstone";
    out.provenance.hash = hex64(fnv1a64(bytes));
    out.provenance.derivative_method = "sampled-data finite difference";
    out.reciprocity_defect = y.reciprocity_defect();
    if (out.reciprocity_defect > 1e-9) {
        out.warnings.push_back("admittance data is not reciprocal (relative defect " +
                               fmt("%.3g", out.reciprocity_defect) + ")");
    }

    const auto& omega = y.grid().omega();
    if (!(w0 > omega.front() && w0 < omega.back())) {
        fail(ErrorCode::range, "f0 = " + fmt("%.17g", s.f0_hz) +
                                   " Hz must lie strictly inside the data grid; the derivative needs an interior point");
    }
    // Step equal to the local grid spacing, as in sampled_derivative.
    std::size_t k = 1;
    while (k + 1 < omega.size() && omega[k] < w0) {
        ++k;
    }
    const double h = omega[k] - omega[k - 1];
    if (!(w0 - h >= omega.front() && w0 + h <= omega.back())) {
        fail(ErrorCode::range, "f0 is too close to the data grid edge for a centred difference");
    }
    const CMatrix y0 = sample_at(y, w0);
    const CMatrix dy0 = sampled_derivative(y, w0);
    const CMatrix ddy0 = (sample_at(y, w0 + h) - 2.0 * y0 + sample_at(y, w0 - h)) / (h * h);
    port_level_q(out, y0, dy0);

    // The swept curve lives on the file's own grid, restricted to the span.
    std::vector<double> w;
    std::vector<FrequencyPoint> points;
    std::vector<CMatrix> samples;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (std::abs(omega[i] - w0) <= s.sweep.span * w0) {
            w.push_back(omega[i]);
            points.push_back({y.sample(i), 0.0});
            samples.push_back(y.sample(i));
        }
    }
    if (w.size() < 3) {
        out.warnings.push_back("fewer than three data points inside the sweep span");
        matched_analysis(out, FrequencyGrid(std::vector<double>{w0}), {FrequencyPoint{y0, 0.0}}, y0, dy0, ddy0, 0.0);
        out.curve.clear();
        out.fbw_table.clear();
        return out;
    }
    const FrequencyGrid grid(w, y.grid().unit());
    out.admittance = MultiportNetwork(grid, NetworkKind::admittance, std::move(samples), y.reference());
    matched_analysis(out, grid, points, y0, dy0, ddy0, 0.0);
    return out;
}

} // namespace

RunResult run(const Scenario& scenario) {
    scenario.validate();
    if (scenario.source == SourceKind::touchstone) {
        return run_sampled(scenario);
    }
    return run_wire(scenario);
}

std::vector<SweepRow> sweep_spacing(const Scenario& scenario, double from, double to, int count,
                                    unsigned threads) {
    if (count < 0) {
        fail(ErrorCode::invalid_argument, "sweep count must be >= 0");
    }
    if (scenario.source != SourceKind::array) {
        fail(ErrorCode::invalid_argument, "spacing sweeps need a generated dipole array");
    }
    std::vector<SweepRow> rows(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        rows[static_cast<std::size_t>(i)].d_over_lambda =
            count == 1 ? from : from + (to - from) * static_cast<double>(i) / (count - 1);
    }
    auto work = [&](std::size_t i) {
        Scenario s = scenario;
        s.array.d_over_lambda = rows[i].d_over_lambda;
        try {
            RunResult r = run(s);
            rows[i].q = r.q;
            if (!r.errors.empty()) {
                rows[i].error = r.errors.front();
            }
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            work(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    return rows;
}

} // namespace mpq
