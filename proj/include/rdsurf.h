#ifndef RDSURF_H
#define RDSURF_H

/* C interface to the reaction-diffusion invariant-measure library.
 *
 * All functions return a status code; results are delivered through output
 * parameters or files on disk. Handles are opaque and must be released with
 * the matching *_free call. On error, rd_last_error() returns a static
 * thread-local message describing the failure.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum rd_status {
  RD_OK = 0,
  RD_ERR_INTERNAL = 1,     /* unexpected failure, see rd_last_error() */
  RD_ERR_CONFIG = 2,       /* invalid parameter or malformed input file */
  RD_ERR_BLOWUP = 3,       /* trajectory exceeded the blow-up cap */
  RD_ERR_CONDITIONING = 4, /* least-squares system numerically singular */
  RD_ERR_EMPTY_SHELL = 5   /* no samples in any requested level shell */
};

typedef struct rd_config rd_config;
typedef struct rd_ensemble rd_ensemble;

/* Last error message for the calling thread ("" when the last call succeeded). */
const char* rd_last_error(void);

/* --- configuration ------------------------------------------------------ */

/* Default model configuration (gamma=0.5, delta=0.25, n_modes=32, dt=1e-3,
 * epsilon=1e-3, p(r)=-r^3, seed=1). Never fails; free with rd_config_free. */
rd_config* rd_config_create(void);

/* Parse a flat key=value config file into a fresh handle. */
int rd_config_load(const char* path, rd_config** out);

/* Apply one "key=value" assignment (same grammar as the config file). */
int rd_config_set(rd_config* cfg, const char* assignment);

void rd_config_free(rd_config* cfg);

/* --- sampling and ensembles ---------------------------------------------- */

/* Run `chains` MCMC chains for `steps` steps each (steps<=0: default length)
 * and write the ensemble plus <out>.manifest.json. burn_in<0 / thinning<=0
 * select the dt- and gamma-derived defaults. */
int rd_sample(const rd_config* cfg, int chains, long steps, long burn_in, long thinning,
              const char* out_path);

int rd_ensemble_load(const char* path, rd_ensemble** out);
void rd_ensemble_free(rd_ensemble* ens);

/* Number of stored samples / retained modes. */
size_t rd_ensemble_size(const rd_ensemble* ens);
size_t rd_ensemble_modes(const rd_ensemble* ens);

/* --- campaigns ------------------------------------------------------------ */

/* Integration-by-parts certification over directions e_k, k_min..k_max,
 * with a trig dictionary spanning modes 1..dict_modes (0: default of 3).
 * Writes the per-pair CSV table and a JSON summary; *sup_ratio (optional)
 * receives the supremum of |lhs| / (|phi|_Lp * alpha_k^beta). */
int rd_certify_ibp(const rd_ensemble* ens, double p_exponent, size_t k_min, size_t k_max,
                   size_t dict_modes, const char* out_csv, const char* out_json,
                   double* sup_ratio);

/* Surface-measure report for g(x) = |(-A)^{-beta} x|^2 ("ball") or
 * g(x) = <x, e_mode> ("halfspace") at level r (NaN: median level).
 * epsilons (may be NULL with n_eps = 0 for the default schedule) are the
 * strictly decreasing shell half-widths. */
int rd_surface(const rd_ensemble* ens, const char* g_kind, size_t halfspace_mode, double r,
               const double* epsilons, size_t n_eps, const char* out_json);

/* Compare the ensemble against closed-form oracles. Suites: "gaussian",
 * "one-mode". *all_pass (optional) receives 1 when every check passes. */
int rd_oracle_compare(const rd_ensemble* ens, const char* suite, const char* out_json,
                      int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* RDSURF_H */
