/*
 * arcmem C API.
 *
 * Opaque handles own their data; every *_free function accepts NULL.
 * Functions return ARCMEM_OK or an error status; the message of the most
 * recent failure on the calling thread is available from arcmem_last_error().
 */
#ifndef ARCMEM_H
#define ARCMEM_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ARCMEM_BUILDING_LIBRARY)
#    define ARCMEM_API __declspec(dllexport)
#  else
#    define ARCMEM_API __declspec(dllimport)
#  endif
#else
#  define ARCMEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum arcmem_status {
    ARCMEM_OK = 0,
    ARCMEM_ERR_INVALID_ARGUMENT = 1,
    ARCMEM_ERR_PARSE = 2,
    ARCMEM_ERR_VALIDATION = 3,
    ARCMEM_ERR_NON_POSITIVE_CONDUCTANCE = 4,
    ARCMEM_ERR_STEP_UNDERFLOW = 5,
    ARCMEM_ERR_MAX_STEPS = 6,
    ARCMEM_ERR_NOT_CONVERGED = 7,
    ARCMEM_ERR_NO_CROSSINGS = 8,
    ARCMEM_ERR_DEGENERATE_RANGE = 9,
    ARCMEM_ERR_UNSUPPORTED_THETA_LAW = 10,
    ARCMEM_ERR_IO = 11,
    ARCMEM_ERR_BUFFER_TOO_SMALL = 12,
    ARCMEM_ERR_INTERNAL = 99
} arcmem_status;

typedef struct arcmem_scenario arcmem_scenario;
typedef struct arcmem_period arcmem_period;

ARCMEM_API const char* arcmem_version(void);
ARCMEM_API const char* arcmem_status_name(arcmem_status status);
ARCMEM_API const char* arcmem_last_error(void);

/* Number of built-in presets and the name of preset `index`. */
ARCMEM_API size_t arcmem_preset_count(void);
ARCMEM_API const char* arcmem_preset_name(size_t index);

/* ---- scenarios --------------------------------------------------------- */

ARCMEM_API arcmem_status arcmem_scenario_preset(const char* name, arcmem_scenario** out);
ARCMEM_API arcmem_status arcmem_scenario_load(const char* path, arcmem_scenario** out);
ARCMEM_API arcmem_status arcmem_scenario_parse(const char* text, arcmem_scenario** out);
ARCMEM_API void arcmem_scenario_free(arcmem_scenario* scenario);

/* Sets one `section.key` to `value`; the scenario is revalidated and left
 * unchanged on failure. */
ARCMEM_API arcmem_status arcmem_scenario_set(arcmem_scenario* scenario, const char* key,
                                             const char* value);

/* Reads a numeric key (e.g. "circuit.f", "arc.theta"). */
ARCMEM_API arcmem_status arcmem_scenario_get(const arcmem_scenario* scenario, const char* key,
                                             double* value);

/* Canonical text form. Writes at most `capacity` bytes including the
 * terminator and stores the required size (including terminator) in *needed. */
ARCMEM_API arcmem_status arcmem_scenario_format(const arcmem_scenario* scenario, char* buffer,
                                                size_t capacity, size_t* needed);

/* ---- command runner ---------------------------------------------------- */

typedef struct arcmem_run_options {
    const char* out_dir;     /* NULL: scenario output.directory */
    int assert_fingerprints; /* non-zero: fingerprint failure yields exit code 3 */
    unsigned jobs;           /* 0: one worker per hardware thread */
    int raw_steps;           /* non-zero: also write accepted-step samples */
} arcmem_run_options;

/* Runs "simulate", "fingerprints", "sweep" or "table1". *exit_code receives
 * 0 (success), 1 (validation), 2 (numeric failure) or 3 (fingerprint check
 * failed with assert_fingerprints). Diagnostics go to stderr unless `quiet`. */
ARCMEM_API arcmem_status arcmem_run(const arcmem_scenario* scenario, const char* command,
                                    const arcmem_run_options* options, int quiet,
                                    int* exit_code);

/* ---- settled periods ---------------------------------------------------- */

typedef struct arcmem_settle_info {
    size_t periods_integrated;
    int converged;
    double period_map_residual;
    double period;          /* s */
    size_t accepted_steps;
} arcmem_settle_info;

/* Integrates the scenario's operating point to its periodic steady state.
 * On ARCMEM_ERR_NOT_CONVERGED a handle is still returned in *out. */
ARCMEM_API arcmem_status arcmem_settle(const arcmem_scenario* scenario, arcmem_period** out);
ARCMEM_API void arcmem_period_free(arcmem_period* period);

ARCMEM_API arcmem_status arcmem_period_info(const arcmem_period* period, arcmem_settle_info* info);

/* Interpolated state at time t in [0, period]. */
ARCMEM_API arcmem_status arcmem_period_state(const arcmem_period* period, double t, double* i,
                                             double* g);

typedef struct arcmem_pinch_point {
    double t_star;
    double g_at;
    double slope;
    int concavity_sign;
    double di_dt_at;
    double dg_dt_at;
} arcmem_pinch_point;

/* Copies up to `capacity` pinch points; *count receives the total.
 * Returns ARCMEM_ERR_BUFFER_TOO_SMALL if capacity < total. */
ARCMEM_API arcmem_status arcmem_period_pinch_points(const arcmem_period* period,
                                                    arcmem_pinch_point* buffer, size_t capacity,
                                                    size_t* count);

typedef struct arcmem_loop_metrics {
    double lobe_area;
    double loop_width_metric;
    double i_peak;
    double g_mean;
    double g_min_observed;
    double g_max_observed;
} arcmem_loop_metrics;

ARCMEM_API arcmem_status arcmem_period_loop_metrics(const arcmem_period* period,
                                                    arcmem_loop_metrics* metrics);

/* Half-period lobe area from the first k_max harmonics of u and i. */
ARCMEM_API arcmem_status arcmem_period_fourier_area(const arcmem_period* period, size_t k_max,
                                                    double* area);

/* ---- Table 1 ------------------------------------------------------------ */

typedef struct arcmem_table1_row {
    double f;
    int ok;
    double i_m;
    double g_mean;
    double hf_estimate;
    double rel_error;
} arcmem_table1_row;

/* Runs the high-frequency conductance comparison at the scenario's frequency
 * sweep (or 3, 5, 7, 9, 11 kHz when the scenario has none). */
ARCMEM_API arcmem_status arcmem_table1(const arcmem_scenario* scenario, unsigned jobs,
                                       arcmem_table1_row* rows, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* ARCMEM_H */
