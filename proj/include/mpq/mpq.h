/* C interface to the mpq library. All handles are opaque; every call that can
 * fail returns an mpq_status and leaves a message for mpq_last_error() on the
 * calling thread. Strings handed out through char** are owned by the caller
 * and released with mpq_string_free. */
#ifndef MPQ_MPQ_H
#define MPQ_MPQ_H

#include <stddef.h>

#if defined(MPQ_BUILDING_LIBRARY)
#define MPQ_API __attribute__((visibility("default")))
#else
#define MPQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpq_status {
    MPQ_OK = 0,
    MPQ_ERR_INVALID_ARGUMENT = 1,
    MPQ_ERR_PARSE = 2,
    MPQ_ERR_RANGE = 3,
    MPQ_ERR_SINGULAR = 4,
    MPQ_ERR_GEOMETRY = 5,
    MPQ_ERR_SYNTHESIS = 6,
    MPQ_ERR_UNBOUNDED_BANDWIDTH = 7,
    MPQ_ERR_EMPTY_BAND = 8,
    MPQ_ERR_IO = 9,
    MPQ_ERR_INTERNAL = 99
} mpq_status;

typedef enum mpq_kind { MPQ_KIND_S = 0, MPQ_KIND_Z = 1, MPQ_KIND_Y = 2 } mpq_kind;
typedef enum mpq_format { MPQ_FORMAT_RI = 0, MPQ_FORMAT_MA = 1, MPQ_FORMAT_DB = 2 } mpq_format;

typedef struct mpq_network mpq_network;
typedef struct mpq_geometry mpq_geometry;
typedef struct mpq_result mpq_result;

/* Absent values are NaN. Frequencies in rad/s. */
typedef struct mpq_q_values {
    double omega0;
    double Q_rad;
    double Q_rad_port;
    double Q_rad_admittance_variant;
    double Q_tarc;
    double Q_tarc_curvature;
    double eta_dd;
    double Q_zm;
    double Q_z;
    double gamma_max;
    double F_predicted;
    double F_swept;
    double omega_minus;
    double omega_plus;
    double Q_fbw;
    double eta_max;
    int double_resonance;
} mpq_q_values;

MPQ_API const char* mpq_version(void);
MPQ_API const char* mpq_last_error(void);
MPQ_API const char* mpq_status_name(mpq_status status);
MPQ_API void mpq_string_free(char* s);

/* Network data. Matrices are passed as 2*P*P doubles, row-major (re, im). */
MPQ_API mpq_status mpq_network_parse_touchstone(const char* text, int ports, mpq_network** out);
MPQ_API mpq_status mpq_network_read_touchstone(const char* path, mpq_network** out);
MPQ_API void mpq_network_free(mpq_network* net);
MPQ_API int mpq_network_ports(const mpq_network* net);
MPQ_API size_t mpq_network_size(const mpq_network* net);
MPQ_API mpq_kind mpq_network_kind(const mpq_network* net);
MPQ_API mpq_status mpq_network_omega(const mpq_network* net, size_t index, double* omega);
MPQ_API mpq_status mpq_network_convert(const mpq_network* net, mpq_kind kind, mpq_network** out);
MPQ_API mpq_status mpq_network_sample(const mpq_network* net, double omega, double* re_im);
MPQ_API mpq_status mpq_network_write_touchstone(const mpq_network* net, mpq_format format, char** out);
MPQ_API mpq_status mpq_network_write_csv(const mpq_network* net, char** out);

/* Wire geometry and the MoM port admittance at one frequency. */
MPQ_API mpq_status mpq_geometry_from_json(const char* json, mpq_geometry** out);
MPQ_API mpq_status mpq_geometry_dipole_array(int count, double f0_hz, double d_over_lambda, mpq_geometry** out);
MPQ_API void mpq_geometry_free(mpq_geometry* g);
MPQ_API int mpq_geometry_port_count(const mpq_geometry* g);
MPQ_API mpq_status mpq_geometry_to_json(const mpq_geometry* g, char** out);
MPQ_API mpq_status mpq_port_admittance(const mpq_geometry* g, double omega, double* re_im);

/* Scenario runs. The scenario is JSON (see docs/formats.md). A run that fails
 * outright returns an error status; row-level problems (an unmatched port,
 * say) are kept in the result and counted by mpq_result_error_count. */
MPQ_API mpq_status mpq_run(const char* scenario_json, mpq_result** out);
MPQ_API void mpq_result_free(mpq_result* r);
MPQ_API mpq_status mpq_result_q(const mpq_result* r, mpq_q_values* out);
MPQ_API size_t mpq_result_error_count(const mpq_result* r);
MPQ_API const char* mpq_result_error(const mpq_result* r, size_t index);
MPQ_API mpq_status mpq_result_report_json(const mpq_result* r, char** out);
MPQ_API mpq_status mpq_result_curve_csv(const mpq_result* r, char** out);
MPQ_API mpq_status mpq_result_fbw_csv(const mpq_result* r, char** out);
MPQ_API mpq_status mpq_result_admittance_touchstone(const mpq_result* r, char** out);

/* Spacing sweep: one CSV row per d/lambda0 in linspace(from, to, count).
 * threads = 0 picks the hardware concurrency. */
MPQ_API mpq_status mpq_sweep_spacing(const char* scenario_json, double from, double to, int count,
                                     unsigned threads, char** csv, size_t* failed_rows);

#ifdef __cplusplus
}
#endif

#endif
