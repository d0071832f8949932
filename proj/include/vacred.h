/*
 * vacred -- characteristic localization scales from decaying cosmological
 * vacuum energy, plus a Monte Carlo verifier for the stochastic
 * energy-gain law.
 *
 * C interface to the shared library. All functions return a vacred_status;
 * results come back through out-parameters or opaque handles. On any
 * non-OK status, vacred_last_error() / vacred_last_error_name() describe
 * the failure for the calling thread.
 *
 * Units: physics values cross this boundary as doubles in natural units
 * (GeV powers, hbar = c = 1) with the unit spelled in the field name;
 * conversion helpers to CGS are provided.
 */
#ifndef VACRED_H
#define VACRED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VACRED_API __declspec(dllexport)
#else
#define VACRED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as process exit codes in the bundled CLI. */
typedef enum vacred_status {
  VACRED_OK = 0,
  VACRED_FAIL = 1,             /* verification / consistency check failed */
  VACRED_ERR_CONFIG = 2,       /* malformed configuration or arguments */
  VACRED_ERR_DOMAIN = 3,       /* out-of-domain value, dimension error, no decay */
  VACRED_ERR_INTEGRATION = 4,  /* integrator could not meet tolerance */
  VACRED_ERR_LIMIT = 5,        /* resource cap exceeded */
  VACRED_ERR_INTERNAL = 6      /* broken internal consistency */
} vacred_status;

VACRED_API const char* vacred_version(void);
/* Identifier of the random stream derivation, serialized into outputs. */
VACRED_API const char* vacred_rng_id(void);
/* Message / stable short name for this thread's last failing call. */
VACRED_API const char* vacred_last_error(void);
VACRED_API const char* vacred_last_error_name(void);

/* ---- unit conversions ------------------------------------------------ */

VACRED_API double vacred_gev_inv_to_cm(double length_gev_inv);
VACRED_API double vacred_cm_to_gev_inv(double length_cm);
VACRED_API double vacred_gev_inv_to_s(double time_gev_inv);

/* ---- cosmological parameters ---------------------------------------- */

typedef struct vacred_params {
  double h0_gev;      /* Hubble rate today, GeV */
  double omega_d0;    /* dark-matter fraction */
  double omega_b0;    /* ordinary-matter fraction */
  double omega_vac0;  /* vacuum fraction */
  double delta;       /* dark-matter dilution deviation exponent */
  double a0;          /* present scale factor */
} vacred_params;

VACRED_API void vacred_params_defaults(vacred_params* p);
VACRED_API vacred_status vacred_params_validate(const vacred_params* p);

/* ---- present-epoch localization scales ------------------------------- */

typedef struct vacred_rc_result {
  double mass_gev;
  double eps_d0_gev4;           /* dark-matter density at the evaluation epoch */
  double vac_rate_gev5;         /* d(eps_vac)/dt, negative for a decaying vacuum */
  double vc_gev3;               /* characteristic volume, GeV^-3 */
  double rc_gev;                /* characteristic length, GeV^-1 */
  double rc_cm;
  double de_dt_gev2;            /* particle energy-gain rate */
  double t_dec_gev;             /* decoherence timescale, GeV^-1 */
  double t_dec_s;
  double rc_closed_form_gev;    /* one-line closed form; NaN off the anchor epoch */
  double cross_check_rel;       /* |closed form - pipeline| / pipeline; NaN likewise */
  int order_of_magnitude;       /* always 1: order-one coefficients taken as 1 */
} vacred_rc_result;

VACRED_API vacred_status vacred_rc_now(const vacred_params* p, double mass_gev,
                                       vacred_rc_result* out);

/* Fraction of space covered by characteristic volumes of all dark and
 * ordinary particles; << 1 means the energy budget is consistent. */
VACRED_API vacred_status vacred_budget_check(const vacred_params* p,
                                             double m_ordinary_gev,
                                             double m_dark_gev, double* fraction);

/* ---- background evolution (opaque handle) ---------------------------- */

typedef struct vacred_background vacred_background;

VACRED_API vacred_status vacred_evolve(const vacred_params* p, double a_start,
                                       double a_end, long n_samples,
                                       vacred_background** out);
VACRED_API void vacred_background_free(vacred_background* bg);
VACRED_API size_t vacred_background_size(const vacred_background* bg);

typedef struct vacred_background_row {
  double t_gev;              /* cosmic time, 0 at a = a0 */
  double a;
  double h_gev;
  double eps_d_gev4;
  double eps_vac_gev4;
  double eps_vac_rate_gev5;
} vacred_background_row;

VACRED_API vacred_status vacred_background_get(const vacred_background* bg, size_t i,
                                               vacred_background_row* out);
/* Max continuity residual over all sampled states. */
VACRED_API vacred_status vacred_background_max_residual(const vacred_background* bg,
                                                        double* out);
/* Localization scales at sample i for the given mass. */
VACRED_API vacred_status vacred_background_reduction(const vacred_background* bg,
                                                     double mass_gev, size_t i,
                                                     vacred_rc_result* out);
/* Scaled noise profile over the trajectory: n_steps+1 edges (unit initial
 * value), with the physical scale factors reported separately. */
VACRED_API vacred_status vacred_background_vc_profile(const vacred_background* bg,
                                                      double mass_gev, long n_steps,
                                                      double dt, double* edges_out,
                                                      double* v_ref_gev3_out,
                                                      double* t_ref_gev_out);

/* ---- Monte Carlo ensemble (opaque handle) ----------------------------- */

typedef struct vacred_ensemble vacred_ensemble;

typedef struct vacred_mc_config {
  long n_traj;
  long n_steps;
  double dt;        /* scaled time units */
  uint64_t seed;
  int threads;      /* 0 = hardware concurrency; can never change results */
} vacred_mc_config;

VACRED_API void vacred_mc_config_defaults(vacred_mc_config* cfg);

/* vc_edges: either NULL (constant profile vc_const) or n_steps+1 samples of
 * the scaled characteristic volume at step edges. */
VACRED_API vacred_status vacred_simulate(const vacred_mc_config* cfg,
                                         const double* vc_edges, size_t n_edges,
                                         double vc_const, vacred_ensemble** out);
VACRED_API void vacred_ensemble_free(vacred_ensemble* e);
VACRED_API size_t vacred_ensemble_size(const vacred_ensemble* e);

typedef struct vacred_ensemble_row {
  double t;
  double msv;        /* ensemble mean of |v|^2 */
  double msv_stderr;
  double msv_x, msv_y, msv_z;
  double inc_mean, inc_stderr;  /* per-step increment statistics */
} vacred_ensemble_row;

VACRED_API vacred_status vacred_ensemble_get(const vacred_ensemble* e, size_t i,
                                             vacred_ensemble_row* out);

/* Integral of dt'/Vc from 0 to t (G = 1); trapezoidal on sampled profiles. */
VACRED_API vacred_status vacred_analytic_msv(const double* vc_edges, size_t n_edges,
                                             double vc_const, long n_steps, double dt,
                                             double t, double* out);
/* All edge values t_k = k*dt at once (out must hold n_steps+1 doubles). */
VACRED_API vacred_status vacred_analytic_msv_edges(const double* vc_edges,
                                                   size_t n_edges, double vc_const,
                                                   long n_steps, double dt,
                                                   double* out);

typedef struct vacred_verify_report {
  double slope;             /* fitted msv-vs-analytic slope, 1 when the law holds */
  double slope_stderr;
  double z_fail_fraction;   /* fraction of steps with |z| > threshold */
  long n_checked;
  long n_z_fail;
  int insufficient_stats;   /* set when n_traj < 2; no verdict then */
  int passed;
} vacred_verify_report;

/* Returns VACRED_OK with out->passed reflecting the verdict; statuses other
 * than OK indicate the comparison itself could not be formed. */
VACRED_API vacred_status vacred_verify(const vacred_ensemble* e, const double* vc_edges,
                                       size_t n_edges, double vc_const,
                                       double z_threshold, vacred_verify_report* out);

#ifdef __cplusplus
}
#endif

#endif /* VACRED_H */
