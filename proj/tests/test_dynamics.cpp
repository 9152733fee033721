#include <doctest.h>

#include <cmath>

#include "rd/dynamics.hpp"
#include "rd/ensemble.hpp"
#include "rd/errors.hpp"
#include "rd/oracles.hpp"

using namespace rd;

namespace {
ModelConfig small_config(bool nonlinear) {
  ModelConfig cfg;
  cfg.n_modes = 4;
  if (!nonlinear) cfg.drift = OddPolynomial::zero();
  return cfg;
}
}  // namespace

TEST_CASE("zero-drift step matches the exact OU update per mode") {
  const ModelConfig cfg = small_config(false);
  Integrator integ(cfg);
  SpectralVector x(4);
  x.c = {0.3, -0.1, 0.05, 0.2};
  const SpectralVector x0 = x;
  const NoiseIncrement dW = integ.draw_noise(17);
  const double supd = integ.step_spde(x, dW);
  CHECK(supd == 0.0);
  for (std::size_t h = 1; h <= 4; ++h) {
    const double a = eigenvalue(h);
    const double mean = std::exp(-a * cfg.dt) * x0[h - 1];
    const double coef = std::pow(a, -cfg.gamma / 2.0) *
                        std::sqrt((1.0 - std::exp(-2.0 * a * cfg.dt)) / (2.0 * a * cfg.dt));
    CHECK(x[h - 1] == doctest::Approx(mean + coef * dW.dbeta[h - 1]).epsilon(1e-12));
  }
}

TEST_CASE("one-step noise variance is stationary-consistent") {
  // The scheme's per-step noise variance equals the exact OU increment
  // variance, so iterating from the stationary variance stays there for any dt.
  const ModelConfig cfg = small_config(false);
  for (std::size_t h = 1; h <= 4; ++h) {
    const double a = eigenvalue(h);
    const double decay2 = std::exp(-2.0 * a * cfg.dt);
    const double noise_var = std::pow(a, -cfg.gamma) * (1.0 - decay2) / (2.0 * a);
    const double stat = oracles::ou_variance(h, cfg.gamma);
    CHECK(decay2 * stat + noise_var == doctest::Approx(stat).epsilon(1e-13));
  }
}

TEST_CASE("tangent step is linear in eta to machine precision") {
  const ModelConfig cfg = small_config(true);
  Integrator integ(cfg);
  SpectralVector x(4);
  x.c = {0.4, -0.3, 0.2, 0.1};
  SpectralVector u(4), v(4);
  u.c = {1.0, 0.5, -0.2, 0.0};
  v.c = {0.0, -1.0, 0.3, 2.0};
  SpectralVector combo = 2.0 * u + (-3.0) * v;
  integ.step_tangent(x, u);
  integ.step_tangent(x, v);
  integ.step_tangent(x, combo);
  const SpectralVector expect = 2.0 * u + (-3.0) * v;
  for (std::size_t h = 0; h < 4; ++h)
    CHECK(combo[h] == doctest::Approx(expect[h]).epsilon(1e-12));
}

TEST_CASE("tangent flow matches common-random-number finite differences") {
  const ModelConfig cfg = small_config(true);
  SpectralVector x0(4);
  x0.c = {0.5, -0.2, 0.1, 0.0};
  const SpectralVector h = SpectralVector::basis(1, 4);
  const double kappa = 1e-5, T = 0.05;

  SimulateOptions with_dir;
  with_dir.direction = h;
  const PathResult center = simulate_path(cfg, x0, T, with_dir);
  const PathResult plus = simulate_path(cfg, x0 + kappa * h, T);
  const PathResult minus = simulate_path(cfg, x0 + (-kappa) * h, T);
  for (std::size_t j = 0; j < 4; ++j) {
    const double fd = (plus.state.x[j] - minus.state.x[j]) / (2.0 * kappa);
    CHECK(center.state.eta[j] == doctest::Approx(fd).epsilon(5e-4));
  }
  CHECK(center.diag.delta_T >= 1.0);
}

TEST_CASE("trajectories are bit-identical across reruns") {
  const ModelConfig cfg = small_config(true);
  SpectralVector x0(4);
  x0.c = {0.1, 0.1, 0.1, 0.1};
  SimulateOptions opts;
  opts.direction = SpectralVector::basis(2, 4);
  const PathResult a = simulate_path(cfg, x0, 0.05, opts);
  const PathResult b = simulate_path(cfg, x0, 0.05, opts);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(a.state.x[j] == b.state.x[j]);
    CHECK(a.state.eta[j] == b.state.eta[j]);
  }
  CHECK(a.state.bel_integral == b.state.bel_integral);
}

TEST_CASE("bel weight has mean zero over paths for p == 0") {
  ModelConfig cfg = small_config(false);
  SpectralVector x0(4);
  x0.c = {0.2, 0.0, -0.1, 0.0};
  SimulateOptions opts;
  opts.direction = SpectralVector::basis(1, 4);
  std::vector<double> weights;
  for (int i = 0; i < 400; ++i) {
    cfg.chain_id = i;
    weights.push_back(simulate_path(cfg, x0, 0.05, opts).state.bel_integral);
  }
  const FunctionalEstimate est = estimate_scalar_series(weights);
  CHECK(std::fabs(est.mean) <= 3.5 * est.stderr_);
}

TEST_CASE("blow-up cap aborts with the step index") {
  ModelConfig cfg = small_config(true);
  cfg.blowup_cap = 1e-4;  // guaranteed to trip on the first noise kick
  SpectralVector x0(4);
  try {
    simulate_path(cfg, x0, 0.05);
    CHECK(false);
  } catch (const BlowUpError& e) {
    CHECK(e.step >= 0);
  }
}

TEST_CASE("T must be a positive multiple of dt") {
  const ModelConfig cfg = small_config(false);
  SpectralVector x0(4);
  CHECK_THROWS(simulate_path(cfg, x0, cfg.dt * 0.37));
}
