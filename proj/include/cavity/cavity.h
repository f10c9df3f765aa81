/* C interface to the cavity billiard engine.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a cb_status; on
 * failure cb_last_error() describes the cause (thread-local, valid until the
 * next failing call on the same thread).
 */
#ifndef CAVITY_BILLIARD_H
#define CAVITY_BILLIARD_H

#include <stddef.h>

#if defined(_WIN32)
#  define CB_API __declspec(dllexport)
#else
#  define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
    CB_OK = 0,
    CB_ERR_INVALID_ARGUMENT = 1,
    CB_ERR_DOMAIN = 2,
    CB_ERR_BRACKET = 3,
    CB_ERR_QUADRATURE = 4,
    CB_ERR_CONFIG = 5,
    CB_ERR_IO = 6,
    CB_ERR_VERIFY = 7,
    CB_ERR_NULL_HANDLE = 8,
    CB_ERR_INTERNAL = 9
} cb_status;

CB_API const char* cb_last_error(void);
CB_API const char* cb_status_string(cb_status status);
CB_API const char* cb_version(void);
CB_API void cb_string_free(char* s);

/* ---- mirror trajectories ------------------------------------------------ */

typedef struct cb_trajectory cb_trajectory;

typedef struct cb_mirror_jet {
    double position, velocity, acceleration, jerk;
} cb_mirror_jet;

CB_API cb_status cb_trajectory_static(double length, cb_trajectory** out);
CB_API cb_status cb_trajectory_sinusoidal(double length, double amplitude, double omega,
                                          cb_trajectory** out);
CB_API cb_status cb_trajectory_law_wu(double length, double amplitude, int order,
                                      cb_trajectory** out);
CB_API cb_status cb_trajectory_tabulated(const double* t, const double* length, size_t count,
                                         cb_trajectory** out);
CB_API cb_status cb_trajectory_from_file(const char* path, cb_trajectory** out);
CB_API cb_status cb_trajectory_eval(const cb_trajectory* traj, double t, cb_mirror_jet* out);
CB_API void cb_trajectory_free(cb_trajectory* traj);

/* ---- billiard map --------------------------------------------------------- */

typedef struct cb_billiard cb_billiard;

typedef struct cb_bounce {
    double time;        /* T_k */
    double retarded;    /* T*_k (unused at k = 0) */
    double doppler;     /* D_k */
    double log_doppler; /* log D_k */
    double anomaly;     /* A_k */
} cb_bounce;

/* root_tolerance <= 0 selects the default 1e-12 * max(1, L0). */
CB_API cb_status cb_billiard_new(const cb_trajectory* traj, double root_tolerance,
                                 cb_billiard** out);
CB_API void cb_billiard_free(cb_billiard* map);
CB_API cb_status cb_billiard_retarded_time(const cb_billiard* map, double tau, double* out);
CB_API cb_status cb_billiard_f(const cb_billiard* map, double tau, double* out);
CB_API cb_status cb_billiard_f_inverse(const cb_billiard* map, double tau, double* out);
/* out[0..2] = f', f'', f''' */
CB_API cb_status cb_billiard_f_derivatives(const cb_billiard* map, double tau, double* out);
CB_API cb_status cb_billiard_schwarzian(const cb_billiard* map, double tau, double* out);
/* rows must hold n + 1 entries; row 0 is the starting point. */
CB_API cb_status cb_billiard_iterate(const cb_billiard* map, double tau0, size_t n,
                                     cb_bounce* rows);

/* ---- resonance ------------------------------------------------------------ */

typedef enum cb_stability { CB_POSITIVE = 0, CB_NEGATIVE = 1, CB_MARGINAL = 2 } cb_stability;

typedef struct cb_periodic_path {
    double tau0;
    double period;
    double per_period_doppler;
    cb_stability sign;
} cb_periodic_path;

typedef struct cb_band_sample {
    double omega;
    double detuning_ratio;
    int order;
    int has_return_points;
    double growth_exponent;
} cb_band_sample;

/* Writes up to `capacity` paths; *count receives the total found. */
CB_API cb_status cb_find_periodic(const cb_billiard* map, cb_periodic_path* out, size_t capacity,
                                  size_t* count);
/* out must hold `samples` entries. */
CB_API cb_status cb_scan_band(double length, double amplitude, double omega_lo, double omega_hi,
                              size_t samples, cb_band_sample* out);

/* ---- fields --------------------------------------------------------------- */

typedef struct cb_field cb_field;

typedef struct cb_peak {
    double position, height, width;
} cb_peak;

typedef double (*cb_profile_fn)(double tau, void* user);

CB_API cb_status cb_field_classical_uniform(const cb_billiard* map, double rho0, cb_field** out);
/* fn must stay callable for the lifetime of the field. */
CB_API cb_status cb_field_classical_callback(const cb_billiard* map, cb_profile_fn fn, void* user,
                                             cb_field** out);
CB_API cb_status cb_field_quantum_vacuum(const cb_billiard* map, cb_field** out);
CB_API void cb_field_free(cb_field* field);
CB_API int cb_field_is_quantum(const cb_field* field);

/* Positive periodic starting points used as density peak hints. */
CB_API cb_status cb_field_set_peak_seeds(cb_field* field, const double* seeds, size_t count);
CB_API cb_status cb_field_rho(const cb_field* field, double tau, double* out);
CB_API cb_status cb_field_energy_density(const cb_field* field, double t, double x, double* out);
/* Direct quadrature of rho over [t - L(t), t + L(t)]. */
CB_API cb_status cb_field_total_energy(const cb_field* field, double t, double* out);
/* Seed-interval route for E(T*_n(tau0)). */
CB_API cb_status cb_field_total_energy_recursive(const cb_field* field, double tau0, size_t n,
                                                 double* out);
CB_API cb_status cb_field_peaks(const cb_field* field, double t, cb_peak* out, size_t capacity,
                                size_t* count);
/* Quantum fields only. */
CB_API cb_status cb_field_moore_phase(const cb_field* field, double tau, double* out);
CB_API cb_status cb_field_anomaly(const cb_field* field, double tau, size_t n, double* out);
CB_API cb_status cb_field_growth_coefficient(const cb_field* field, double tau_plus, size_t n_max,
                                             double* out);

/* ---- runs ----------------------------------------------------------------- */

typedef struct cb_config cb_config;
typedef void (*cb_line_sink)(const char* line, void* user);

CB_API cb_status cb_config_new(cb_config** out);
CB_API void cb_config_free(cb_config* cfg);
/* key in "section.key" form, e.g. "trajectory.kind". */
CB_API cb_status cb_config_set(cb_config* cfg, const char* key, const char* value);
CB_API cb_status cb_config_load(cb_config* cfg, const char* path);

/* On success *manifest_json receives the manifest (release with cb_string_free). */
CB_API cb_status cb_run_simulate(const cb_config* cfg, char** manifest_json);
CB_API cb_status cb_run_scan_band(const cb_config* cfg, char** manifest_json);
CB_API cb_status cb_run_trajectory(const cb_config* cfg, char** manifest_json);
/* Returns CB_ERR_VERIFY when any check breaches its tolerance. */
CB_API cb_status cb_run_verify(double inject_relative_error, cb_line_sink sink, void* user,
                               int* failures);

#ifdef __cplusplus
}
#endif

#endif /* CAVITY_BILLIARD_H */
