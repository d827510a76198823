/* C interface to the radial wave library. Every call returns a status code;
 * on failure rnlw_last_error() holds a message for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * rnlw_string_free. */
#ifndef RNLW_H
#define RNLW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RNLW_API __declspec(dllexport)
#else
#define RNLW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  RNLW_OK = 0,
  RNLW_ERR_INVALID_ARGUMENT = 1,
  RNLW_ERR_OUT_OF_DOMAIN = 2,
  RNLW_ERR_TRUNCATION = 3,
  RNLW_ERR_DIVERGENCE = 4,
  RNLW_ERR_NUMERICAL = 5,
  RNLW_ERR_IO = 6,
  RNLW_ERR_INTERNAL = 99
} rnlw_status;

typedef struct rnlw_grid rnlw_grid;
typedef struct rnlw_field rnlw_field;
typedef struct rnlw_trajectory rnlw_trajectory;
typedef struct rnlw_profile rnlw_profile;

RNLW_API const char* rnlw_version(void);
RNLW_API const char* rnlw_last_error(void);
RNLW_API void rnlw_string_free(char* s);

/* grids: geometric != 0 asks for a geometric lattice (r_min > 0) */
RNLW_API rnlw_status rnlw_grid_create(double r_min, double r_max, size_t n, int geometric,
                                      rnlw_grid** out);
RNLW_API void rnlw_grid_free(rnlw_grid* g);
RNLW_API size_t rnlw_grid_size(const rnlw_grid* g);
RNLW_API double rnlw_grid_node(const rnlw_grid* g, size_t i);

/* fields (u, u_t) on a grid; ut may be NULL for zero velocity */
RNLW_API rnlw_status rnlw_field_create(const rnlw_grid* g, const double* u, const double* ut,
                                       rnlw_field** out);
/* u = amp exp(-r^2/width^2), u_t = vel_amp exp(-r^2/width^2) */
RNLW_API rnlw_status rnlw_field_gaussian(const rnlw_grid* g, double amp, double width,
                                         double vel_amp, rnlw_field** out);
RNLW_API rnlw_status rnlw_field_read_csv(const char* path, rnlw_field** out);
RNLW_API rnlw_status rnlw_field_write_csv(const rnlw_field* f, const char* path);
RNLW_API size_t rnlw_field_size(const rnlw_field* f);
/* copies radii, u and u_t into caller arrays of rnlw_field_size entries; any may be NULL */
RNLW_API rnlw_status rnlw_field_samples(const rnlw_field* f, double* r, double* u, double* ut);
RNLW_API void rnlw_field_free(rnlw_field* f);

/* ||u||_{Hdot^s}, or with pair != 0 the Hdot^s x Hdot^{s-1} norm of (u, u_t) */
RNLW_API rnlw_status rnlw_sobolev_norm(const rnlw_field* f, double s, int pair, double* value,
                                       double* est_error);
RNLW_API rnlw_status rnlw_energy(const rnlw_field* f, double p, int focusing, double* out);
RNLW_API rnlw_status rnlw_reduction_residual(const rnlw_field* f, double a, double b,
                                             double* out);

RNLW_API rnlw_status rnlw_free_propagate(const rnlw_field* f, double t, rnlw_field** out);
RNLW_API rnlw_status rnlw_channel_check(const rnlw_field* f, double R, const double* times,
                                        size_t n_times, double tol, char** json);
RNLW_API rnlw_status rnlw_channel_suite(size_t n, uint64_t seed, double tol, int* all_passed,
                                        char** json);

typedef struct {
  double p;
  int focusing;
  double cfl;
  int scheme; /* 0 leapfrog in u, 1 characteristics in w = r u */
  double blowup_threshold;
  double t_final;
  double snapshot_every;
} rnlw_evolve_config;

RNLW_API void rnlw_evolve_config_default(rnlw_evolve_config* cfg);
RNLW_API rnlw_status rnlw_evolve_config_json(const rnlw_evolve_config* cfg, char** json);
RNLW_API rnlw_status rnlw_evolve(const rnlw_field* f, const rnlw_evolve_config* cfg,
                                 rnlw_trajectory** out);
RNLW_API void rnlw_trajectory_free(rnlw_trajectory* t);
/* 0 completed, 1 blow-up, 2 truncated */
RNLW_API int rnlw_trajectory_status(const rnlw_trajectory* t);
RNLW_API size_t rnlw_trajectory_snapshot_count(const rnlw_trajectory* t);
RNLW_API rnlw_status rnlw_trajectory_snapshot(const rnlw_trajectory* t, size_t i, double* time,
                                              rnlw_field** out);
RNLW_API rnlw_status rnlw_trajectory_save(const rnlw_trajectory* t, const char* dir);
RNLW_API rnlw_status rnlw_classify(const rnlw_trajectory* t, double norm_cap, char** json);
RNLW_API rnlw_status rnlw_morawetz(const rnlw_trajectory* t, double R, char** json);
/* kind: 0 S, 1 W, 2 Z_s, 3 Y_s, 4 L^q L^r */
RNLW_API rnlw_status rnlw_spacetime_norm(const rnlw_trajectory* t, int kind, double s, double q,
                                         double r, double t0, double t1, double* value,
                                         double* time_error);

/* tail fixed point at R (R <= 0 picks a default) extended inward to r_min
 * (r_min <= 0 means 1e-4 R); tail_json may be NULL */
RNLW_API rnlw_status rnlw_soliton_construct(double p, double R, double r_min, rnlw_profile** out,
                                            char** tail_json);
/* p = 5: the ground state family member lambda; 3 < p < 5: C r^{-2/(p-1)} */
RNLW_API rnlw_status rnlw_soliton_explicit(double p, double lambda, rnlw_profile** out);
RNLW_API void rnlw_profile_free(rnlw_profile* s);
RNLW_API rnlw_status rnlw_profile_write_csv(const rnlw_profile* s, const char* path);
RNLW_API rnlw_status rnlw_profile_value(const rnlw_profile* s, double r, double* out);
RNLW_API rnlw_status rnlw_profile_residual(const rnlw_profile* s, double* out);
RNLW_API rnlw_status rnlw_profile_diagnostics(const rnlw_profile* s, char** json);
/* norms of V_R over the whole time line; companion = L^{2p/(p-3)} L^{2p} */
RNLW_API rnlw_status rnlw_truncated_soliton_norms(const rnlw_profile* s, double R, double* y_norm,
                                                  double* companion_norm);
RNLW_API rnlw_status rnlw_truncated_soliton_scaling(const rnlw_profile* s, const double* radii,
                                                    size_t n, char** json);

/* p is read as an exact rational (3.5 -> 7/2) */
RNLW_API rnlw_status rnlw_exponent_report(double p, char** json);
/* csv_path may be NULL */
RNLW_API rnlw_status rnlw_ladder(double p, double beta0, const char* csv_path, char** json);
/* log S at log2 A = log2_a0 + k/4, k = 0..n-1 */
RNLW_API rnlw_status rnlw_recurrence_check(double log2_a0, const double* log_s, size_t n,
                                           double alpha, double beta, double l, double omega,
                                           double c, char** json);

#ifdef __cplusplus
}
#endif

#endif
