#include "mpq/scenario.hpp"

#include "mpq/touchstone.hpp"

#include <json.hpp>

#include <sstream>

namespace mpq {

namespace {

using nlohmann::ordered_json;

ordered_json opt(const std::optional<double>& x) {
    return x ? ordered_json(*x) : ordered_json(nullptr);
}

ordered_json frequency(double omega) {
    return {{"hz", omega / (2.0 * pi)}, {"rad_s", omega}};
}

ordered_json opt_frequency(const std::optional<double>& omega) {
    return omega ? frequency(*omega) : ordered_json(nullptr);
}

ordered_json complex_list(const CVector& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({v[i].real(), v[i].imag()});
    }
    return out;
}

std::string cell(double x) {
    return std::isfinite(x) ? format_double(x) : std::string();
}

std::string cell(const std::optional<double>& x) {
    return x ? cell(*x) : std::string();
}

const char* source_name(SourceKind k) {
    switch (k) {
    case SourceKind::array:
        return "array";
    case SourceKind::geometry:
        return "geometry";
    case SourceKind::touchstone:
        return "touchstone";
    }
    return "";
}

} // namespace

std::string report_json(const RunResult& r) {
    const Scenario& s = r.scenario;
    const QReport& q = r.q;
    ordered_json j;
    ordered_json sc;
    sc["name"] = s.name;
    sc["source"] = source_name(s.source);
    if (s.source == SourceKind::array) {
        sc["dipoles"] = s.array.count;
        sc["d_over_lambda"] = s.array.d_over_lambda;
        sc["segments"] = s.array.segments;
        sc["radius_over_lambda"] = s.array.radius_over_lambda;
    }
    if (s.source == SourceKind::touchstone) {
        sc["touchstone"] = s.touchstone_path;
    }
    sc["feeding_label"] = s.feeding_label;
    sc["feeding"] = complex_list(s.feeding.vector());
    sc["gamma_max"] = s.gamma_max;
    sc["sweep"] = {{"span", s.sweep.span}, {"points", s.sweep.points}};
    j["scenario"] = sc;

    ordered_json qr;
    qr["omega0"] = frequency(q.omega0);
    qr["Q_rad"] = opt(q.Q_rad);
    qr["Q_rad_port"] = opt(q.Q_rad_port);
    qr["Q_rad_admittance_variant"] = opt(q.Q_rad_admittance_variant);
    qr["Q_tarc"] = opt(q.Q_tarc);
    qr["Q_tarc_curvature"] = opt(q.Q_tarc_curvature);
    qr["eta_dd"] = opt(q.eta_dd);
    qr["Q_zm"] = opt(q.Q_zm);
    qr["Q_z"] = opt(q.Q_z);
    qr["gamma_max"] = q.gamma_max;
    qr["F_predicted"] = opt(q.F_predicted);
    qr["F_swept"] = opt(q.F_swept);
    qr["omega_minus"] = opt_frequency(q.omega_minus);
    qr["omega_plus"] = opt_frequency(q.omega_plus);
    qr["Q_fbw"] = opt(q.Q_fbw);
    qr["eta_max"] = q.eta_max;
    qr["double_resonance"] = q.double_resonance;
    j["q"] = qr;

    if (r.match) {
        const MatchingState& m = *r.match;
        ordered_json ports = ordered_json::array();
        for (int p = 0; p < m.ports(); ++p) {
            const bool cap = m.kind[static_cast<std::size_t>(p)] == ElementKind::capacitor;
            ports.push_back({{"port", p + 1},
                             {"R0_ohm", m.R0[p]},
                             {"B_L_S", m.B_L[p]},
                             {"element", to_string(m.kind[static_cast<std::size_t>(p)])},
                             {"value", m.element_value(p)},
                             {"unit", cap ? "F" : "H"}});
        }
        j["match"] = {{"omega_ref", frequency(m.omega_ref)}, {"ports", ports}};
    } else {
        j["match"] = nullptr;
    }

    j["provenance"] = {{"source", r.provenance.source},
                       {"hash_fnv1a64", r.provenance.hash},
                       {"derivative_method", r.provenance.derivative_method}};

    ordered_json yin = ordered_json::array();
    for (const cplx& y : r.input_admittance) {
        yin.push_back({y.real(), y.imag()});
    }
    j["diagnostics"] = {{"input_admittance_S", yin},
                        {"eta_dd_second_term", r.eta_dd_second_term},
                        {"reciprocity_defect", r.reciprocity_defect},
                        {"stored_energy_indefinite", r.stored_energy_indefinite},
                        {"warnings", r.warnings},
                        {"errors", r.errors}};
    return j.dump(2) + "\n";
}

std::string curve_csv(const RunResult& r) {
    std::ostringstream os;
    os << "omega,f_hz,delta,tarc,tarc_approx,eta\n";
    const double w0 = r.q.omega0;
    for (const CurveRow& row : r.curve) {
        os << cell(row.omega) << ',' << cell(row.omega / (2.0 * pi)) << ',' << cell((row.omega - w0) / w0) << ','
           << cell(row.tarc) << ',' << cell(row.tarc_approx) << ',' << cell(row.eta) << '\n';
    }
    return os.str();
}

std::string fbw_csv(const RunResult& r) {
    std::ostringstream os;
    os << "gamma_max,F_predicted,F_swept,relative_error\n";
    for (const FbwRow& row : r.fbw_table) {
        std::optional<double> err;
        if (row.F_predicted && row.F_swept) {
            err = (*row.F_predicted - *row.F_swept) / *row.F_swept;
        }
        os << cell(row.gamma_max) << ',' << cell(row.F_predicted) << ',' << cell(row.F_swept) << ',' << cell(err)
           << '\n';
    }
    return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "d_over_lambda,Q_rad,Q_rad_port,Q_tarc,Q_zm,Q_z,F_predicted,F_swept,Q_fbw,double_resonance,error\n";
    for (const SweepRow& row : rows) {
        const QReport& q = row.q;
        std::string err = row.error;
        for (char& c : err) {
            if (c == ',' || c == '\n' || c == '"') {
                c = ';';
            }
        }
        os << cell(row.d_over_lambda) << ',' << cell(q.Q_rad) << ',' << cell(q.Q_rad_port) << ','
           << cell(q.Q_tarc) << ',' << cell(q.Q_zm) << ',' << cell(q.Q_z) << ',' << cell(q.F_predicted) << ','
           << cell(q.F_swept) << ',' << cell(q.Q_fbw) << ',' << (q.double_resonance ? 1 : 0) << ',' << err
           << '\n';
    }
    return os.str();
}

} // namespace mpq
