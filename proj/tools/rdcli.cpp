#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdsurf.h"

namespace {

int fail(int status) {
  std::fprintf(stderr, "error: %s\n", rd_last_error());
  return status;
}

struct ConfigHandle {
  rd_config* ptr = nullptr;
  ~ConfigHandle() { rd_config_free(ptr); }
};

struct EnsembleHandle {
  rd_ensemble* ptr = nullptr;
  ~EnsembleHandle() { rd_ensemble_free(ptr); }
};

// The worker cap from RD_THREADS. Results are worker-count independent by
// construction (counter-based noise); the cap only bounds resource use.
int thread_cap() {
  const char* env = std::getenv("RD_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-measure sampling and verification for a stochastic "
               "reaction-diffusion equation with fractionally colored noise"};
  app.require_subcommand(1);
  (void)thread_cap();

  // --- sample -------------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "Run MCMC chains and write an ensemble file");
  std::string config_path, sample_out = "ensemble.rde";
  std::vector<std::string> overrides;
  int chains = 4;
  long steps = -1, burn_in = -1, thin = -1;
  sample->add_option("--config", config_path, "Flat key=value config file");
  sample->add_option("--set", overrides, "Inline override, key=value (repeatable)");
  sample->add_option("--chains", chains, "Number of independent chains");
  sample->add_option("--steps", steps, "Steps per chain (default: burn-in + 1000 draws)");
  sample->add_option("--burn-in", burn_in, "Burn-in steps (default: 10 / (alpha_1 dt))");
  sample->add_option("--thin", thin, "Thinning stride (default: ln(10) / (alpha_1 dt))");
  sample->add_option("--out", sample_out, "Ensemble output path");

  // --- certify-ibp ----------------------------------------------------------
  auto* certify = app.add_subcommand("certify-ibp",
                                     "Certify the integration-by-parts inequality");
  std::string cert_ens, cert_out = "certify";
  double p_exponent = 2.0;
  std::size_t k_min = 1, k_max = 16, dict_modes = 3;
  certify->add_option("ensemble", cert_ens, "Ensemble file")->required();
  certify->add_option("--p", p_exponent, "L^p exponent for the test-function norm");
  certify->add_option("--modes", [&](const std::vector<std::string>& v) {
    const auto dots = v[0].find("..");
    if (dots == std::string::npos) return false;
    k_min = std::strtoul(v[0].c_str(), nullptr, 10);
    k_max = std::strtoul(v[0].c_str() + dots + 2, nullptr, 10);
    return k_min >= 1;
  }, "Direction range k1..k2 (h = e_k)");
  certify->add_option("--dict", dict_modes, "Modes spanned by the trig dictionary");
  certify->add_option("--out", cert_out, "Output prefix (writes <out>.csv, <out>.json)");

  // --- surface ---------------------------------------------------------------
  auto* surface = app.add_subcommand("surface", "Estimate a surface measure");
  std::string surf_ens, g_kind = "halfspace", surf_out = "surface.json";
  std::size_t halfspace_mode = 1;
  double level = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> eps_schedule;
  surface->add_option("ensemble", surf_ens, "Ensemble file")->required();
  surface->add_option("--g", g_kind, "Level function: ball | halfspace")
      ->check(CLI::IsMember({"ball", "halfspace"}));
  surface->add_option("--mode", halfspace_mode, "Half-space direction b = e_mode");
  surface->add_option("--r", level, "Level r (default: ensemble median of g)");
  surface->add_option("--eps-schedule", eps_schedule,
                      "Decreasing shell half-widths (default: std(g)/10 halved 4 times)");
  surface->add_option("--out", surf_out, "JSON report path");

  // --- oracle-compare ---------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle-compare",
                                    "Compare an ensemble against closed-form oracles");
  std::string oracle_ens, suite = "gaussian", oracle_out = "oracle.json";
  oracle->add_option("ensemble", oracle_ens, "Ensemble file")->required();
  oracle->add_option("--suite", suite, "gaussian | one-mode")
      ->check(CLI::IsMember({"gaussian", "one-mode"}));
  oracle->add_option("--out", oracle_out, "JSON verdict path");

  CLI11_PARSE(app, argc, argv);

  if (sample->parsed()) {
    ConfigHandle cfg;
    if (config_path.empty()) {
      cfg.ptr = rd_config_create();
    } else if (int rc = rd_config_load(config_path.c_str(), &cfg.ptr)) {
      return fail(rc);
    }
    for (const auto& kv : overrides)
      if (int rc = rd_config_set(cfg.ptr, kv.c_str())) return fail(rc);
    if (int rc = rd_sample(cfg.ptr, chains, steps, burn_in, thin, sample_out.c_str()))
      return fail(rc);
    std::printf("wrote %s\n", sample_out.c_str());
    return 0;
  }

  if (certify->parsed()) {
    EnsembleHandle ens;
    if (int rc = rd_ensemble_load(cert_ens.c_str(), &ens.ptr)) return fail(rc);
    double sup_ratio = 0.0;
    const std::string csv = cert_out + ".csv", json = cert_out + ".json";
    if (int rc = rd_certify_ibp(ens.ptr, p_exponent, k_min, k_max, dict_modes, csv.c_str(),
                                json.c_str(), &sup_ratio))
      return fail(rc);
    std::printf("sup ratio %.6g; wrote %s, %s\n", sup_ratio, csv.c_str(), json.c_str());
    return 0;
  }

  if (surface->parsed()) {
    EnsembleHandle ens;
    if (int rc = rd_ensemble_load(surf_ens.c_str(), &ens.ptr)) return fail(rc);
    if (int rc = rd_surface(ens.ptr, g_kind.c_str(), halfspace_mode, level,
                            eps_schedule.empty() ? nullptr : eps_schedule.data(),
                            eps_schedule.size(), surf_out.c_str()))
      return fail(rc);
    std::printf("wrote %s\n", surf_out.c_str());
    return 0;
  }

  EnsembleHandle ens;
  if (int rc = rd_ensemble_load(oracle_ens.c_str(), &ens.ptr)) return fail(rc);
  int all_pass = 0;
  if (int rc = rd_oracle_compare(ens.ptr, suite.c_str(), oracle_out.c_str(), &all_pass))
    return fail(rc);
  std::printf("%s; wrote %s\n", all_pass ? "all checks pass" : "CHECKS FAILED",
              oracle_out.c_str());
  return all_pass ? 0 : 1;
}
