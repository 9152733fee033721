#pragma once

#include <cstdint>
#include <string>

#include "rd/reaction.hpp"

namespace rd {

// Model parameters for the n = 1 regime. alpha and beta are derived:
// alpha = 1 - gamma - delta, beta = (1 + gamma + delta)/2.
struct ModelConfig {
  double gamma = 0.5;
  double delta = 0.25;
  int n_modes = 32;
  double dt = 1e-3;
  double epsilon = 1e-3;  // Yosida parameter
  OddPolynomial drift = OddPolynomial::default_cubic();
  uint64_t seed = 1;
  int chain_id = 0;
  double blowup_cap = 1e6;  // sup-norm abort threshold

  double alpha() const { return 1.0 - gamma - delta; }
  double beta() const { return 0.5 * (1.0 + gamma + delta); }
  int grid_M() const { return 2 * n_modes; }

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// Flat "key = value" config file with typed parsing; unknown keys are
// rejected. Recognized keys: gamma, delta, n_modes, dt, epsilon, seed,
// p_coeffs (list, c_0..c_N order), blowup_cap. '#' starts a comment.
ModelConfig load_config(const std::string& path);
ModelConfig parse_config(const std::string& text);

// Applies a single key=value assignment (used for CLI overrides).
void apply_config_key(ModelConfig& cfg, const std::string& key, const std::string& value);

}  // namespace rd
