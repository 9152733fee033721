#include "rdsurf.h"

#include <exception>
#include <string>

#include "rd/campaign.hpp"
#include "rd/config.hpp"
#include "rd/ensemble.hpp"
#include "rd/errors.hpp"

struct rd_config {
  rd::ModelConfig cfg;
};

struct rd_ensemble {
  rd::SampleEnsemble ens;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RD_OK;
  } catch (const rd::ConfigError& e) {
    g_last_error = e.what();
    return RD_ERR_CONFIG;
  } catch (const rd::BlowUpError& e) {
    g_last_error = e.what();
    return RD_ERR_BLOWUP;
  } catch (const rd::ConditioningError& e) {
    g_last_error = e.what();
    return RD_ERR_CONDITIONING;
  } catch (const rd::EmptyShellError& e) {
    g_last_error = e.what();
    return RD_ERR_EMPTY_SHELL;
  } catch (const rd::IntegrityError& e) {
    g_last_error = e.what();
    return RD_ERR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RD_ERR_INTERNAL;
  }
}

int require(bool ok, const char* message) {
  if (ok) return RD_OK;
  g_last_error = message;
  return RD_ERR_CONFIG;
}

}  // namespace

extern "C" {

const char* rd_last_error(void) { return g_last_error.c_str(); }

rd_config* rd_config_create(void) { return new rd_config{rd::ModelConfig{}}; }

int rd_config_load(const char* path, rd_config** out) {
  if (int rc = require(path && out, "rd_config_load: null argument")) return rc;
  *out = nullptr;
  return guarded([&] { *out = new rd_config{rd::load_config(path)}; });
}

int rd_config_set(rd_config* cfg, const char* assignment) {
  if (int rc = require(cfg && assignment, "rd_config_set: null argument")) return rc;
  return guarded([&] {
    const std::string line(assignment);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw rd::ConfigError("expected key=value: " + line);
    rd::apply_config_key(cfg->cfg, line.substr(0, eq), line.substr(eq + 1));
    cfg->cfg.validate();
  });
}

void rd_config_free(rd_config* cfg) { delete cfg; }

int rd_sample(const rd_config* cfg, int chains, long steps, long burn_in, long thinning,
              const char* out_path) {
  if (int rc = require(cfg && out_path, "rd_sample: null argument")) return rc;
  return guarded([&] {
    rd::SampleOptions opt;
    opt.chains = chains;
    opt.steps = steps;
    opt.burn_in = burn_in;
    opt.thinning = thinning;
    rd::run_sample(cfg->cfg, opt, out_path);
  });
}

int rd_ensemble_load(const char* path, rd_ensemble** out) {
  if (int rc = require(path && out, "rd_ensemble_load: null argument")) return rc;
  *out = nullptr;
  return guarded([&] { *out = new rd_ensemble{rd::load_ensemble(path)}; });
}

void rd_ensemble_free(rd_ensemble* ens) { delete ens; }

size_t rd_ensemble_size(const rd_ensemble* ens) { return ens ? ens->ens.samples.size() : 0; }

size_t rd_ensemble_modes(const rd_ensemble* ens) {
  return ens ? ens->ens.meta.cfg.n_modes : 0;
}

int rd_certify_ibp(const rd_ensemble* ens, double p_exponent, size_t k_min, size_t k_max,
                   size_t dict_modes, const char* out_csv, const char* out_json,
                   double* sup_ratio) {
  if (int rc = require(ens && out_csv && out_json, "rd_certify_ibp: null argument")) return rc;
  return guarded([&] {
    rd::CertifyOptions opt;
    opt.p_exponent = p_exponent;
    opt.k_min = k_min;
    opt.k_max = k_max;
    if (dict_modes > 0) opt.dict_modes = dict_modes;
    const double sup = rd::run_certify(ens->ens, opt, out_csv, out_json);
    if (sup_ratio) *sup_ratio = sup;
  });
}

int rd_surface(const rd_ensemble* ens, const char* g_kind, size_t halfspace_mode, double r,
               const double* epsilons, size_t n_eps, const char* out_json) {
  if (int rc = require(ens && g_kind && out_json, "rd_surface: null argument")) return rc;
  if (int rc = require(n_eps == 0 || epsilons, "rd_surface: null epsilon array")) return rc;
  return guarded([&] {
    rd::SurfaceOptions opt;
    opt.g_kind = g_kind;
    opt.halfspace_mode = halfspace_mode;
    opt.r = r;
    opt.epsilons.assign(epsilons, epsilons + n_eps);
    rd::run_surface(ens->ens, opt, out_json);
  });
}

int rd_oracle_compare(const rd_ensemble* ens, const char* suite, const char* out_json,
                      int* all_pass) {
  if (int rc = require(ens && suite && out_json, "rd_oracle_compare: null argument")) return rc;
  return guarded([&] {
    const bool ok = rd::run_oracle_compare(ens->ens, suite, out_json);
    if (all_pass) *all_pass = ok ? 1 : 0;
  });
}

}  // extern "C"
