#include "mpq/mpq.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

struct CString {
    char* p = nullptr;
    ~CString() { mpq_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

struct Result {
    mpq_result* r = nullptr;
    ~Result() { mpq_result_free(r); }
};

[[noreturn]] void die(mpq_status st, const std::string& context) {
    json err = {{"status", mpq_status_name(st)}, {"message", mpq_last_error()}, {"context", context}};
    std::cerr << json{{"errors", json::array({err})}}.dump() << '\n';
    std::exit(2);
}

void check(mpq_status st, const std::string& context) {
    if (st != MPQ_OK) {
        die(st, context);
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open '" << path << "'\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "cannot write '" << path << "'\n";
        std::exit(2);
    }
}

// "in-phase", "triangle", ... or a comma separated list of reals.
json feeding_json(const std::string& text) {
    if (text.empty() || std::isalpha(static_cast<unsigned char>(text.front())) != 0) {
        return text;
    }
    json v = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            std::cerr << "bad feeding entry '" << item << "'\n";
            std::exit(2);
        }
    }
    return v;
}

struct Common {
    std::string config;
    double f0 = 1e9;
    double gamma_max = 0.2;
    double span = 0.1;
    int points = 201;
    std::string feeding;
    std::string out;
    std::string report;
    std::string fbw_table;
    std::string export_touchstone;
    CLI::Option* f0_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* span_opt = nullptr;
    CLI::Option* points_opt = nullptr;
    CLI::Option* feeding_opt = nullptr;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "scenario JSON; flags override its values");
    c.f0_opt = app->add_option("--f0", c.f0, "design frequency in Hz");
    c.gamma_opt = app->add_option("--gamma-max", c.gamma_max, "TARC ceiling for bandwidth")->capture_default_str();
    c.span_opt = app->add_option("--span", c.span, "sweep half-width as a fraction of f0")->capture_default_str();
    c.points_opt = app->add_option("--points", c.points, "odd sweep point count")->capture_default_str();
    c.feeding_opt = app->add_option("--feeding", c.feeding, "named feeding or comma-separated voltages");
    app->add_option("--out", c.out, "TARC curve CSV path ('-' for stdout)");
    app->add_option("--report", c.report, "QReport JSON path ('-' for stdout)");
    app->add_option("--fbw-table", c.fbw_table, "bandwidth prediction table CSV path");
    app->add_option("--export-touchstone", c.export_touchstone, "write the swept port admittance as Touchstone");
}

json base_config(const Common& c) {
    json j = json::object();
    if (!c.config.empty()) {
        try {
            j = json::parse(slurp(c.config));
        } catch (const json::exception& e) {
            std::cerr << "config: " << e.what() << '\n';
            std::exit(2);
        }
    }
    return j;
}

void apply_common(json& j, const Common& c) {
    if (*c.f0_opt || !j.contains("f0_hz")) {
        j["f0_hz"] = c.f0;
    }
    if (*c.gamma_opt || !j.contains("gamma_max")) {
        j["gamma_max"] = c.gamma_max;
    }
    if (!j.contains("sweep")) {
        j["sweep"] = json::object();
    }
    if (*c.span_opt || !j["sweep"].contains("span")) {
        j["sweep"]["span"] = c.span;
    }
    if (*c.points_opt || !j["sweep"].contains("points")) {
        j["sweep"]["points"] = c.points;
    }
    if (*c.feeding_opt) {
        j["feeding"] = feeding_json(c.feeding);
    }
}

std::string fmt(double x) {
    if (std::isnan(x)) {
        return "n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

int run_scenario(const json& scenario, const Common& c) {
    Result res;
    check(mpq_run(scenario.dump().c_str(), &res.r), "run");
    mpq_q_values q{};
    check(mpq_result_q(res.r, &q), "result");

    if (!c.report.empty()) {
        CString s;
        check(mpq_result_report_json(res.r, &s.p), "report");
        spit(c.report, s.str());
    }
    if (!c.out.empty()) {
        CString s;
        check(mpq_result_curve_csv(res.r, &s.p), "curve");
        spit(c.out, s.str());
    }
    if (!c.fbw_table.empty()) {
        CString s;
        check(mpq_result_fbw_csv(res.r, &s.p), "fbw table");
        spit(c.fbw_table, s.str());
    }
    if (!c.export_touchstone.empty()) {
        CString s;
        check(mpq_result_admittance_touchstone(res.r, &s.p), "touchstone export");
        spit(c.export_touchstone, s.str());
    }
    if (c.report != "-" && c.out != "-") {
        std::cout << "Q_rad=" << fmt(q.Q_rad) << " Q_tarc=" << fmt(q.Q_tarc) << " Q_zm=" << fmt(q.Q_zm)
                  << " Q_z=" << fmt(q.Q_z) << " F_pred=" << fmt(q.F_predicted) << " F_swept=" << fmt(q.F_swept)
                  << " Q_fbw=" << fmt(q.Q_fbw) << " double_resonance=" << q.double_resonance << '\n';
    }
    const std::size_t n = mpq_result_error_count(res.r);
    if (n == 0) {
        return 0;
    }
    json errs = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        errs.push_back({{"message", mpq_result_error(res.r, i)}});
    }
    std::cerr << json{{"errors", errs}}.dump() << '\n';
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Antenna Q and bandwidth estimates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mpq_version()));

    Common d2c;
    double d2 = 0.125;
    CLI::Option* d2_opt = nullptr;
    auto* dip2 = app.add_subcommand("dipoles2", "two parallel half-wave dipoles");
    add_common(dip2, d2c);
    d2_opt = dip2->add_option("--d-over-lambda", d2, "spacing in wavelengths, [0.05, 2]")->capture_default_str();

    Common d5c;
    double d5 = 1.0 / 6.0;
    CLI::Option* d5_opt = nullptr;
    auto* dip5 = app.add_subcommand("dipoles5", "five parallel half-wave dipoles");
    add_common(dip5, d5c);
    d5_opt = dip5->add_option("--d-over-lambda", d5, "spacing in wavelengths, [0.05, 1]")->capture_default_str();

    Common ac;
    std::string touchstone;
    std::string geometry;
    auto* analyze = app.add_subcommand("analyze", "Touchstone data or a wire geometry file");
    add_common(analyze, ac);
    analyze->add_option("--touchstone", touchstone, "Touchstone v1 file (.sNp)");
    analyze->add_option("--geometry", geometry, "wire geometry JSON");

    Common sc;
    std::string kind = "dipoles2";
    double from = 0.05;
    double to = 2.0;
    int count = 40;
    unsigned threads = 0;
    auto* sweep = app.add_subcommand("sweep", "Q versus dipole spacing");
    add_common(sweep, sc);
    sweep->add_option("--scenario", kind, "dipoles2 or dipoles5")
        ->check(CLI::IsMember({"dipoles2", "dipoles5"}))
        ->capture_default_str();
    sweep->add_option("--from", from, "first d/lambda0")->capture_default_str();
    sweep->add_option("--to", to, "last d/lambda0")->capture_default_str();
    sweep->add_option("--count", count, "number of spacings")->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (dip2->parsed()) {
        json j = base_config(d2c);
        j["kind"] = "dipoles2";
        if (*d2_opt || !j.contains("d_over_lambda")) {
            j["d_over_lambda"] = d2;
        }
        apply_common(j, d2c);
        return run_scenario(j, d2c);
    }
    if (dip5->parsed()) {
        json j = base_config(d5c);
        j["kind"] = "dipoles5";
        if (*d5_opt || !j.contains("d_over_lambda")) {
            j["d_over_lambda"] = d5;
        }
        apply_common(j, d5c);
        return run_scenario(j, d5c);
    }
    if (analyze->parsed()) {
        json j = base_config(ac);
        if (!touchstone.empty() && !geometry.empty()) {
            std::cerr << "give either --touchstone or --geometry\n";
            return 2;
        }
        if (!touchstone.empty()) {
            j["kind"] = "analyze";
            j["touchstone"] = touchstone;
        } else if (!geometry.empty()) {
            j["kind"] = "geometry";
            j["geometry_file"] = geometry;
        } else if (!j.contains("kind")) {
            std::cerr << "analyze needs --touchstone or --geometry\n";
            return 2;
        }
        apply_common(j, ac);
        return run_scenario(j, ac);
    }
    if (sweep->parsed()) {
        json j = base_config(sc);
        j["kind"] = kind;
        apply_common(j, sc);
        CString csv;
        std::size_t failed = 0;
        check(mpq_sweep_spacing(j.dump().c_str(), from, to, count, threads, &csv.p, &failed), "sweep");
        spit(sc.out.empty() ? "-" : sc.out, csv.str());
        if (failed > 0) {
            std::cerr << json{{"errors", {{{"failed_rows", failed}}}}}.dump() << '\n';
            return 1;
        }
        return 0;
    }
    return 2;
}
