#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rd/config.hpp"
#include "rd/spectral.hpp"

namespace rd {

struct EnsembleMeta {
  ModelConfig cfg;
  int chains = 1;
  long total_steps = 0;
  long burn_in = 0;
  long thinning = 1;
  int format_version = 1;
};

// Approximate draws from the invariant measure nu.
struct SampleEnsemble {
  std::vector<SpectralVector> samples;
  EnsembleMeta meta;

  std::size_t size() const { return samples.size(); }
  std::size_t n_modes() const { return samples.empty() ? 0 : samples[0].n_modes(); }
};

struct FunctionalEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double n_eff = 0.0;
};

// Defaults reported in meta: burn_in = ten linear relaxation times of mode 1,
// thinning such that the mode-1 lag autocorrelation is below 0.1.
long default_burn_in(const ModelConfig& cfg);
long default_thinning(const ModelConfig& cfg);

// Runs `chains` independent chains (chain_id = cfg.chain_id + c) from x0 = 0,
// collecting post-burn-in states every `thinning` steps. The merge is keyed
// by (chain_id, index), so any execution order yields the same ensemble.
SampleEnsemble sample_invariant(const ModelConfig& cfg, int chains, long steps,
                                long burn_in, long thinning);

// Batch-means estimate (sqrt(N) batches) of a scalar functional over the
// ensemble; n_eff from the integrated autocorrelation time.
FunctionalEstimate estimate_functional(const SampleEnsemble& ens,
                                       const std::function<double(const SpectralVector&)>& phi);
FunctionalEstimate estimate_scalar_series(const std::vector<double>& values);

// Batch-means estimate of int |x|^m dnu.
FunctionalEstimate estimate_moment(const SampleEnsemble& ens, int m);

// Ensemble file: one JSON header line (version, meta, checksum algorithm,
// row count) followed by one CSV row of coefficients per sample (17
// significant digits) and a trailing checksum line. Loads verify version,
// shape, finiteness and checksum.
void save_ensemble(const SampleEnsemble& ens, const std::string& path);
SampleEnsemble load_ensemble(const std::string& path);

uint64_t fnv1a64(const std::string& bytes);

}  // namespace rd
