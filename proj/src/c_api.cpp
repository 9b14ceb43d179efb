#include "mpq/mpq.h"

#include "mpq/error.hpp"
#include "mpq/momwire.hpp"
#include "mpq/portreduce.hpp"
#include "mpq/scenario.hpp"
#include "mpq/touchstone.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

struct mpq_network {
    mpq::MultiportNetwork net;
};

struct mpq_geometry {
    mpq::WireArrayGeometry geometry;
};

struct mpq_result {
    mpq::RunResult result;
};

namespace {

thread_local std::string last_error;

mpq_status status_of(mpq::ErrorCode c) {
    return static_cast<mpq_status>(static_cast<int>(c));
}

template <class F>
mpq_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return MPQ_OK;
    } catch (const mpq::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return MPQ_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MPQ_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) {
        mpq::fail(mpq::ErrorCode::invalid_argument, what);
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void copy_matrix(const mpq::CMatrix& m, double* re_im) {
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re_im[k++] = m(r, c).real();
            re_im[k++] = m(r, c).imag();
        }
    }
}

double nan_if_absent(const std::optional<double>& x) {
    return x ? *x : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

extern "C" {

const char* mpq_version(void) {
    return "0.1.0";
}

const char* mpq_last_error(void) {
    return last_error.c_str();
}

const char* mpq_status_name(mpq_status status) {
    if (status == MPQ_OK) {
        return "ok";
    }
    if (status == MPQ_ERR_INTERNAL) {
        return "internal";
    }
    if (status >= MPQ_ERR_INVALID_ARGUMENT && status <= MPQ_ERR_IO) {
        return mpq::to_string(static_cast<mpq::ErrorCode>(status));
    }
    return "unknown";
}

void mpq_string_free(char* s) {
    std::free(s);
}

mpq_status mpq_network_parse_touchstone(const char* text, int ports, mpq_network** out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, "null argument");
        *out = new mpq_network{mpq::parse_touchstone(text, ports)};
    });
}

mpq_status mpq_network_read_touchstone(const char* path, mpq_network** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new mpq_network{mpq::read_touchstone(path)};
    });
}

void mpq_network_free(mpq_network* net) {
    delete net;
}

int mpq_network_ports(const mpq_network* net) {
    return net ? net->net.ports() : 0;
}

size_t mpq_network_size(const mpq_network* net) {
    return net ? net->net.grid().size() : 0;
}

mpq_kind mpq_network_kind(const mpq_network* net) {
    switch (net->net.kind()) {
    case mpq::NetworkKind::scattering:
        return MPQ_KIND_S;
    case mpq::NetworkKind::impedance:
        return MPQ_KIND_Z;
    case mpq::NetworkKind::admittance:
        return MPQ_KIND_Y;
    }
    return MPQ_KIND_S;
}

mpq_status mpq_network_omega(const mpq_network* net, size_t index, double* omega) {
    return guarded([&] {
        require(net != nullptr && omega != nullptr, "null argument");
        if (index >= net->net.grid().size()) {
            mpq::fail(mpq::ErrorCode::range, "frequency index out of range");
        }
        *omega = net->net.grid()[index];
    });
}

mpq_status mpq_network_convert(const mpq_network* net, mpq_kind kind, mpq_network** out) {
    return guarded([&] {
        require(net != nullptr && out != nullptr, "null argument");
        switch (kind) {
        case MPQ_KIND_S:
            *out = new mpq_network{mpq::to_scattering(net->net)};
            return;
        case MPQ_KIND_Z:
            *out = new mpq_network{mpq::to_impedance(net->net)};
            return;
        case MPQ_KIND_Y:
            *out = new mpq_network{mpq::to_admittance(net->net)};
            return;
        }
        mpq::fail(mpq::ErrorCode::invalid_argument, "unknown network kind");
    });
}

mpq_status mpq_network_sample(const mpq_network* net, double omega, double* re_im) {
    return guarded([&] {
        require(net != nullptr && re_im != nullptr, "null argument");
        copy_matrix(mpq::sample_at(net->net, omega), re_im);
    });
}

mpq_status mpq_network_write_touchstone(const mpq_network* net, mpq_format format, char** out) {
    return guarded([&] {
        require(net != nullptr && out != nullptr, "null argument");
        const mpq::DataFormat f = format == MPQ_FORMAT_MA   ? mpq::DataFormat::ma
                                  : format == MPQ_FORMAT_DB ? mpq::DataFormat::db
                                                            : mpq::DataFormat::ri;
        *out = dup(mpq::write_touchstone(net->net, f));
    });
}

mpq_status mpq_network_write_csv(const mpq_network* net, char** out) {
    return guarded([&] {
        require(net != nullptr && out != nullptr, "null argument");
        *out = dup(mpq::write_csv(net->net));
    });
}

mpq_status mpq_geometry_from_json(const char* json, mpq_geometry** out) {
    return guarded([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = new mpq_geometry{mpq::WireArrayGeometry::from_json(json)};
    });
}

mpq_status mpq_geometry_dipole_array(int count, double f0_hz, double d_over_lambda, mpq_geometry** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new mpq_geometry{mpq::dipole_array(count, f0_hz, d_over_lambda)};
    });
}

void mpq_geometry_free(mpq_geometry* g) {
    delete g;
}

int mpq_geometry_port_count(const mpq_geometry* g) {
    return g ? g->geometry.port_count() : 0;
}

mpq_status mpq_geometry_to_json(const mpq_geometry* g, char** out) {
    return guarded([&] {
        require(g != nullptr && out != nullptr, "null argument");
        *out = dup(g->geometry.to_json());
    });
}

mpq_status mpq_port_admittance(const mpq_geometry* g, double omega, double* re_im) {
    return guarded([&] {
        require(g != nullptr && re_im != nullptr, "null argument");
        const mpq::MoMSystem sys = mpq::assemble(g->geometry, omega);
        copy_matrix(mpq::port_admittance(sys, mpq::LossModel::none(), mpq::PortReduction::of(sys)), re_im);
    });
}

mpq_status mpq_run(const char* scenario_json, mpq_result** out) {
    return guarded([&] {
        require(scenario_json != nullptr && out != nullptr, "null argument");
        *out = new mpq_result{mpq::run(mpq::scenario_from_json(scenario_json))};
    });
}

void mpq_result_free(mpq_result* r) {
    delete r;
}

mpq_status mpq_result_q(const mpq_result* r, mpq_q_values* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        const mpq::QReport& q = r->result.q;
        out->omega0 = q.omega0;
        out->Q_rad = nan_if_absent(q.Q_rad);
        out->Q_rad_port = nan_if_absent(q.Q_rad_port);
        out->Q_rad_admittance_variant = nan_if_absent(q.Q_rad_admittance_variant);
        out->Q_tarc = nan_if_absent(q.Q_tarc);
        out->Q_tarc_curvature = nan_if_absent(q.Q_tarc_curvature);
        out->eta_dd = nan_if_absent(q.eta_dd);
        out->Q_zm = nan_if_absent(q.Q_zm);
        out->Q_z = nan_if_absent(q.Q_z);
        out->gamma_max = q.gamma_max;
        out->F_predicted = nan_if_absent(q.F_predicted);
        out->F_swept = nan_if_absent(q.F_swept);
        out->omega_minus = nan_if_absent(q.omega_minus);
        out->omega_plus = nan_if_absent(q.omega_plus);
        out->Q_fbw = nan_if_absent(q.Q_fbw);
        out->eta_max = q.eta_max;
        out->double_resonance = q.double_resonance ? 1 : 0;
    });
}

size_t mpq_result_error_count(const mpq_result* r) {
    return r ? r->result.errors.size() : 0;
}

const char* mpq_result_error(const mpq_result* r, size_t index) {
    if (r == nullptr || index >= r->result.errors.size()) {
        return nullptr;
    }
    return r->result.errors[index].c_str();
}

mpq_status mpq_result_report_json(const mpq_result* r, char** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        *out = dup(mpq::report_json(r->result));
    });
}

mpq_status mpq_result_curve_csv(const mpq_result* r, char** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        *out = dup(mpq::curve_csv(r->result));
    });
}

mpq_status mpq_result_fbw_csv(const mpq_result* r, char** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        *out = dup(mpq::fbw_csv(r->result));
    });
}

mpq_status mpq_result_admittance_touchstone(const mpq_result* r, char** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        if (!r->result.admittance) {
            mpq::fail(mpq::ErrorCode::invalid_argument, "this run produced no admittance data");
        }
        *out = dup(mpq::write_touchstone(*r->result.admittance));
    });
}

mpq_status mpq_sweep_spacing(const char* scenario_json, double from, double to, int count, unsigned threads,
                             char** csv, size_t* failed_rows) {
    return guarded([&] {
        require(scenario_json != nullptr && csv != nullptr, "null argument");
        const auto rows = mpq::sweep_spacing(mpq::scenario_from_json(scenario_json), from, to, count, threads);
        std::size_t failed = 0;
        for (const auto& row : rows) {
            failed += row.error.empty() ? 0 : 1;
        }
        *csv = dup(mpq::sweep_csv(rows));
        if (failed_rows != nullptr) {
            *failed_rows = failed;
        }
    });
}

} // extern "C"
