#pragma once

#include <functional>
#include <optional>

#include "rd/config.hpp"
#include "rd/spectral.hpp"

namespace rd {

// Per-mode Brownian increments, N(0, dt) each.
struct NoiseIncrement {
  std::vector<double> dbeta;
};

struct PathState {
  SpectralVector x;
  SpectralVector eta;
  double bel_integral = 0.0;
  double t = 0.0;
};

struct PathDiagnostics {
  // Delta_{T,eps}(X) = sup_{t<=T} |p_eps'(X(t,.))|_inf^2 + 1, grid sup.
  double delta_T = 1.0;
};

// Exponential-Euler integrator for the spectral Galerkin truncation of
//   dX = (AX + p_eps(X)) dt + (-A)^{-gamma/2} dW
// and its tangent equation. The linear part is propagated exactly per mode
// with stationary-consistent noise variance, so the p == 0 case reproduces
// the OU transition law exactly. Noise is counter-based: mode h of step k
// is a pure function of (seed, chain_id, k, h).
class Integrator {
 public:
  explicit Integrator(const ModelConfig& cfg);

  const ModelConfig& cfg() const { return cfg_; }

  NoiseIncrement draw_noise(long step) const;
  // Same increments for an explicit chain id (path-parallel estimators).
  NoiseIncrement draw_noise(long step, int chain_id) const;

  // One step of X in place. Returns sup_j |p_eps'(X(t_k, xi_j))| evaluated
  // at the pre-step state (0 when p == 0).
  double step_spde(SpectralVector& x, const NoiseIncrement& dW) const;

  // One step of eta, with p_eps'(X) frozen at the pre-step state x. Linear
  // in eta.
  void step_tangent(const SpectralVector& x, SpectralVector& eta) const;

  // acc + sum_h alpha_h^{gamma/2} eta_h dbeta_h (Ito, left endpoint).
  double accumulate_bel(const SpectralVector& eta, const NoiseIncrement& dW,
                        double acc) const;

 private:
  void nonlinear_grids(const SpectralVector& x, std::vector<double>& pgrid,
                       std::vector<double>& pdgrid, double& supd) const;
  void check_state(const SpectralVector& x, long step) const;

  ModelConfig cfg_;
  SineTransform tr_;
  std::vector<double> decay_;       // e^{-alpha_h dt}
  std::vector<double> phi1dt_;      // (1 - e^{-alpha_h dt}) / alpha_h
  std::vector<double> noise_coef_;  // alpha_h^{-gamma/2} sqrt((1-e^{-2 a dt})/(2 a dt))
  std::vector<double> bel_coef_;    // alpha_h^{gamma/2}

  friend struct PathRunner;
};

struct SimulateOptions {
  // Tangent direction h; when absent eta stays 0 and no BEL weight accrues.
  std::optional<SpectralVector> direction;
  // Called after every step with (step index, state, sup |p_eps'| at the
  // pre-step state).
  std::function<void(long, const PathState&, double)> observer;
};

struct PathResult {
  PathState state;
  PathDiagnostics diag;
};

// Runs the coupled X / eta / BEL recursion over T (a multiple of dt).
// Throws BlowUpError with the step index if |x| exceeds the configured cap.
PathResult simulate_path(const ModelConfig& cfg, const SpectralVector& x0, double T,
                         const SimulateOptions& opts = {});

}  // namespace rd
