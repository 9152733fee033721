#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rd/ensemble.hpp"
#include "rd/malliavin.hpp"

namespace rd {

inline constexpr const char* kCodeVersion = "rdsurf 1.0.0";

struct SampleOptions {
  int chains = 4;
  long steps = -1;     // -1: burn_in + 1000 thinned draws per chain
  long burn_in = -1;   // -1: default_burn_in(cfg)
  long thinning = -1;  // -1: default_thinning(cfg)
};

struct CertifyOptions {
  double p_exponent = 2.0;
  std::size_t k_min = 1;
  std::size_t k_max = 16;
  std::size_t dict_modes = 3;  // modes entering the trig dictionary
};

struct SurfaceOptions {
  std::string g_kind = "halfspace";  // "ball" or "halfspace"
  std::size_t halfspace_mode = 1;    // b = e_mode
  double r = std::numeric_limits<double>::quiet_NaN();  // NaN: default per kind
  std::vector<double> epsilons;                         // empty: default schedule
};

// The 12-function trig dictionary used for certification: sin/cos pairs in
// single modes and two-mode combinations, arguments scaled to O(1).
std::vector<CylinderFunction> default_certify_dictionary(const SampleEnsemble& ens,
                                                         std::size_t dict_modes);

// Writes the ensemble file plus a <out>.manifest.json run manifest.
void run_sample(const ModelConfig& cfg, const SampleOptions& opt, const std::string& out_path);

// Certification table as CSV plus a JSON summary; returns the sup ratio.
double run_certify(const SampleEnsemble& ens, const CertifyOptions& opt,
                   const std::string& out_csv, const std::string& out_json);

// Surface report JSON per the geometry module.
void run_surface(const SampleEnsemble& ens, const SurfaceOptions& opt,
                 const std::string& out_json);

// Machine-readable pass/fail table; returns true when every check passes.
// Suites: "gaussian" (p == 0 stationary law) and "one-mode" (quadrature law).
bool run_oracle_compare(const SampleEnsemble& ens, const std::string& suite,
                        const std::string& out_json);

}  // namespace rd
