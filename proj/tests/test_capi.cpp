#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpq/mpq.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    mpq_string_free(s);
    return out;
}

const char* s1p = "# MHz Z RI R 50\n"
                  "900 0.1 -0.5\n"
                  "1000 0.1 0.0\n"
                  "1100 0.1 0.5\n";

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(mpq_version()).size() > 0);
    CHECK(std::string(mpq_status_name(MPQ_OK)) == "ok");
    CHECK(std::string(mpq_status_name(MPQ_ERR_SYNTHESIS)) == "match synthesis error");
    CHECK(std::string(mpq_status_name(static_cast<mpq_status>(1234))) == "unknown");
}

TEST_CASE("network parse, sample, convert and write") {
    mpq_network* net = nullptr;
    REQUIRE(mpq_network_parse_touchstone(s1p, 1, &net) == MPQ_OK);
    CHECK(mpq_network_ports(net) == 1);
    CHECK(mpq_network_size(net) == 3);
    CHECK(mpq_network_kind(net) == MPQ_KIND_Z);
    double w = 0.0;
    REQUIRE(mpq_network_omega(net, 1, &w) == MPQ_OK);
    CHECK(w == doctest::Approx(2.0 * M_PI * 1e9));
    CHECK(mpq_network_omega(net, 7, &w) == MPQ_ERR_RANGE);

    double z[2];
    REQUIRE(mpq_network_sample(net, 2.0 * M_PI * 1e9, z) == MPQ_OK);
    CHECK(z[0] == doctest::Approx(5.0));
    CHECK(std::abs(z[1]) < 1e-12);
    CHECK(mpq_network_sample(net, 1.0, z) == MPQ_ERR_RANGE);
    CHECK(std::string(mpq_last_error()).size() > 0);

    mpq_network* y = nullptr;
    REQUIRE(mpq_network_convert(net, MPQ_KIND_Y, &y) == MPQ_OK);
    REQUIRE(mpq_network_sample(y, 2.0 * M_PI * 1e9, z) == MPQ_OK);
    CHECK(z[0] == doctest::Approx(0.2));

    char* text = nullptr;
    REQUIRE(mpq_network_write_touchstone(net, MPQ_FORMAT_RI, &text) == MPQ_OK);
    const std::string ts = take(text);
    mpq_network* back = nullptr;
    REQUIRE(mpq_network_parse_touchstone(ts.c_str(), 1, &back) == MPQ_OK);
    double zb[2];
    REQUIRE(mpq_network_sample(back, 2.0 * M_PI * 1.1e9, zb) == MPQ_OK);
    CHECK(zb[1] == doctest::Approx(25.0));
    REQUIRE(mpq_network_write_csv(net, &text) == MPQ_OK);
    CHECK(take(text).rfind("omega,", 0) == 0);

    mpq_network_free(back);
    mpq_network_free(y);
    mpq_network_free(net);
    mpq_network_free(nullptr);
}

TEST_CASE("network errors") {
    mpq_network* net = nullptr;
    CHECK(mpq_network_parse_touchstone("# GHz S RI R 50\n1 0.1\n", 1, &net) == MPQ_ERR_PARSE);
    CHECK(net == nullptr);
    CHECK(std::string(mpq_last_error()).size() > 0);
    CHECK(mpq_network_read_touchstone("/nonexistent/file.s2p", &net) == MPQ_ERR_IO);
    CHECK(mpq_network_parse_touchstone(nullptr, 1, &net) == MPQ_ERR_INVALID_ARGUMENT);
}

TEST_CASE("geometry and port admittance") {
    mpq_geometry* g = nullptr;
    REQUIRE(mpq_geometry_dipole_array(2, 1e9, 0.125, &g) == MPQ_OK);
    CHECK(mpq_geometry_port_count(g) == 2);
    std::vector<double> y(8);
    REQUIRE(mpq_port_admittance(g, 2.0 * M_PI * 1e9, y.data()) == MPQ_OK);
    CHECK(y[0] > 0.0);
    CHECK(y[2] == doctest::Approx(y[4]));
    CHECK(y[3] == doctest::Approx(y[5]));

    char* json = nullptr;
    REQUIRE(mpq_geometry_to_json(g, &json) == MPQ_OK);
    const std::string text = take(json);
    mpq_geometry* g2 = nullptr;
    REQUIRE(mpq_geometry_from_json(text.c_str(), &g2) == MPQ_OK);
    CHECK(mpq_geometry_port_count(g2) == 2);
    CHECK(mpq_port_admittance(g2, 2.0 * M_PI * 12e9, y.data()) == MPQ_ERR_GEOMETRY);

    mpq_geometry* bad = nullptr;
    CHECK(mpq_geometry_from_json("{\"wires\": []}", &bad) != MPQ_OK);
    CHECK(mpq_geometry_dipole_array(0, 1e9, 0.1, &bad) == MPQ_ERR_INVALID_ARGUMENT);
    mpq_geometry_free(g2);
    mpq_geometry_free(g);
}

TEST_CASE("scenario run") {
    mpq_result* r = nullptr;
    REQUIRE(mpq_run(R"({"kind": "dipoles2", "d_over_lambda": 0.125, "feeding": "in-phase",
                        "sweep": {"points": 41}})",
                    &r) == MPQ_OK);
    mpq_q_values q;
    REQUIRE(mpq_result_q(r, &q) == MPQ_OK);
    CHECK(q.Q_tarc > 0.0);
    CHECK(std::isnan(q.Q_z));
    CHECK(std::abs(q.Q_rad - q.Q_rad_port) < 1e-9 * q.Q_rad);
    CHECK(q.eta_max == doctest::Approx(1.0));
    CHECK(mpq_result_error_count(r) == 0);
    CHECK(mpq_result_error(r, 0) == nullptr);

    char* s = nullptr;
    REQUIRE(mpq_result_report_json(r, &s) == MPQ_OK);
    CHECK(take(s).find("\"Q_tarc\"") != std::string::npos);
    REQUIRE(mpq_result_curve_csv(r, &s) == MPQ_OK);
    CHECK(take(s).rfind("omega,f_hz", 0) == 0);
    REQUIRE(mpq_result_fbw_csv(r, &s) == MPQ_OK);
    CHECK(take(s).rfind("gamma_max", 0) == 0);
    REQUIRE(mpq_result_admittance_touchstone(r, &s) == MPQ_OK);
    CHECK(take(s).find("# Hz Y RI R 50") != std::string::npos);
    mpq_result_free(r);
}

TEST_CASE("run errors and row errors") {
    mpq_result* r = nullptr;
    CHECK(mpq_run("{\"kind\": \"dipoles2\", \"d_over_lambda\": 9}", &r) == MPQ_ERR_INVALID_ARGUMENT);
    CHECK(std::string(mpq_last_error()).find("d/lambda0") != std::string::npos);
    CHECK(mpq_run("not json", &r) == MPQ_ERR_PARSE);

    REQUIRE(mpq_run(R"({"kind": "dipoles2", "d_over_lambda": 0.05, "feeding": [1, -0.05],
                        "sweep": {"points": 41}})",
                    &r) == MPQ_OK);
    CHECK(mpq_result_error_count(r) == 1);
    CHECK(std::string(mpq_result_error(r, 0)).find("port 2") != std::string::npos);
    mpq_q_values q;
    REQUIRE(mpq_result_q(r, &q) == MPQ_OK);
    CHECK(std::isnan(q.Q_tarc));
    CHECK(q.Q_rad > 0.0);
    mpq_result_free(r);
}

TEST_CASE("spacing sweep") {
    char* csv = nullptr;
    size_t failed = 99;
    REQUIRE(mpq_sweep_spacing(R"({"kind": "dipoles2", "sweep": {"points": 41}})", 0.1, 0.3, 3, 2, &csv, &failed) ==
            MPQ_OK);
    const std::string text = take(csv);
    CHECK(failed == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    REQUIRE(mpq_sweep_spacing(R"({"kind": "dipoles2"})", 0.1, 0.3, 0, 1, &csv, &failed) == MPQ_OK);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(take(csv).find('\n') != std::string::npos);
    CHECK(failed == 0);
    CHECK(mpq_sweep_spacing(R"({"kind": "dipoles2"})", 0.1, 0.3, -2, 1, &csv, &failed) ==
          MPQ_ERR_INVALID_ARGUMENT);
}
