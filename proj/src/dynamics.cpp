#include "rd/dynamics.hpp"

#include <cmath>
#include <string>

#include "rd/rng.hpp"

namespace rd {

Integrator::Integrator(const ModelConfig& cfg)
    : cfg_(cfg), tr_(static_cast<std::size_t>(cfg.n_modes), static_cast<std::size_t>(cfg.grid_M())) {
  cfg_.validate();
  const int n = cfg_.n_modes;
  decay_.resize(n);
  phi1dt_.resize(n);
  noise_coef_.resize(n);
  bel_coef_.resize(n);
  for (int h = 1; h <= n; ++h) {
    const double a = eigenvalue(static_cast<std::size_t>(h));
    decay_[h - 1] = std::exp(-a * cfg_.dt);
    phi1dt_[h - 1] = (1.0 - decay_[h - 1]) / a;
    noise_coef_[h - 1] =
        std::pow(a, -0.5 * cfg_.gamma) *
        std::sqrt((1.0 - std::exp(-2.0 * a * cfg_.dt)) / (2.0 * a * cfg_.dt));
    bel_coef_[h - 1] = std::pow(a, 0.5 * cfg_.gamma);
  }
}

NoiseIncrement Integrator::draw_noise(long step) const {
  return draw_noise(step, cfg_.chain_id);
}

NoiseIncrement Integrator::draw_noise(long step, int chain_id) const {
  NoiseIncrement dW;
  dW.dbeta.resize(cfg_.n_modes);
  const double sdt = std::sqrt(cfg_.dt);
  for (int h = 0; h < cfg_.n_modes; ++h)
    dW.dbeta[h] = sdt * philox::normal(cfg_.seed, static_cast<uint32_t>(chain_id),
                                       static_cast<uint64_t>(step), static_cast<uint32_t>(h));
  return dW;
}

void Integrator::nonlinear_grids(const SpectralVector& x, std::vector<double>& pgrid,
                                 std::vector<double>& pdgrid, double& supd) const {
  std::vector<double> xgrid;
  tr_.to_physical(x, xgrid);
  const auto& p = cfg_.drift;
  const double eps = cfg_.epsilon;
  pgrid.resize(xgrid.size());
  pdgrid.resize(xgrid.size());
  supd = 0.0;
  for (std::size_t j = 0; j < xgrid.size(); ++j) {
    const double J = p.resolvent(eps, xgrid[j]);
    pgrid[j] = p.eval(J);
    const double dpJ = p.deriv(J);
    pdgrid[j] = dpJ / (1.0 - eps * dpJ);
    supd = std::max(supd, std::fabs(pdgrid[j]));
  }
}

void Integrator::check_state(const SpectralVector& x, long step) const {
  const double cap = cfg_.blowup_cap / std::sqrt(2.0);
  for (double v : x.c)
    if (!std::isfinite(v) || std::fabs(v) > cap)
      throw BlowUpError("solution blow-up at step " + std::to_string(step) +
                            " (|x| exceeds cap; dt too large?)",
                        step, cfg_.chain_id);
}

double Integrator::step_spde(SpectralVector& x, const NoiseIncrement& dW) const {
  double supd = 0.0;
  SpectralVector dcoef;
  if (!cfg_.drift.is_zero()) {
    std::vector<double> pgrid, pdgrid;
    nonlinear_grids(x, pgrid, pdgrid, supd);
    tr_.to_spectral(pgrid, dcoef);
  }
  for (int h = 0; h < cfg_.n_modes; ++h) {
    double v = decay_[h] * x.c[h] + noise_coef_[h] * dW.dbeta[h];
    if (!dcoef.c.empty()) v += phi1dt_[h] * dcoef.c[h];
    x.c[h] = v;
  }
  return supd;
}

void Integrator::step_tangent(const SpectralVector& x, SpectralVector& eta) const {
  SpectralVector prod;
  if (!cfg_.drift.is_zero()) {
    std::vector<double> pgrid, pdgrid, etagrid;
    double supd;
    nonlinear_grids(x, pgrid, pdgrid, supd);
    tr_.to_physical(eta, etagrid);
    for (std::size_t j = 0; j < etagrid.size(); ++j) etagrid[j] *= pdgrid[j];
    tr_.to_spectral(etagrid, prod);
  }
  for (int h = 0; h < cfg_.n_modes; ++h) {
    double v = decay_[h] * eta.c[h];
    if (!prod.c.empty()) v += phi1dt_[h] * prod.c[h];
    eta.c[h] = v;
  }
}

double Integrator::accumulate_bel(const SpectralVector& eta, const NoiseIncrement& dW,
                                  double acc) const {
  for (int h = 0; h < cfg_.n_modes; ++h) acc += bel_coef_[h] * eta.c[h] * dW.dbeta[h];
  return acc;
}

// Shares the nonlinear grid work between the X and eta updates of one step.
struct PathRunner {
  const Integrator& integ;

  double coupled_step(SpectralVector& x, SpectralVector* eta, double* bel,
                      const NoiseIncrement& dW) const {
    const ModelConfig& cfg = integ.cfg_;
    double supd = 0.0;
    SpectralVector dcoef, prod;
    if (!cfg.drift.is_zero()) {
      std::vector<double> pgrid, pdgrid;
      integ.nonlinear_grids(x, pgrid, pdgrid, supd);
      integ.tr_.to_spectral(pgrid, dcoef);
      if (eta) {
        std::vector<double> etagrid;
        integ.tr_.to_physical(*eta, etagrid);
        for (std::size_t j = 0; j < etagrid.size(); ++j) etagrid[j] *= pdgrid[j];
        integ.tr_.to_spectral(etagrid, prod);
      }
    }
    if (eta && bel) *bel = integ.accumulate_bel(*eta, dW, *bel);
    for (int h = 0; h < cfg.n_modes; ++h) {
      double v = integ.decay_[h] * x.c[h] + integ.noise_coef_[h] * dW.dbeta[h];
      if (!dcoef.c.empty()) v += integ.phi1dt_[h] * dcoef.c[h];
      x.c[h] = v;
      if (eta) {
        double e = integ.decay_[h] * eta->c[h];
        if (!prod.c.empty()) e += integ.phi1dt_[h] * prod.c[h];
        eta->c[h] = e;
      }
    }
    return supd;
  }

  void check(const SpectralVector& x, long step) const { integ.check_state(x, step); }
};

PathResult simulate_path(const ModelConfig& cfg, const SpectralVector& x0, double T,
                         const SimulateOptions& opts) {
  if (x0.n_modes() != static_cast<std::size_t>(cfg.n_modes))
    throw std::invalid_argument("simulate_path: x0 width mismatch");
  const long nsteps = std::lround(T / cfg.dt);
  if (nsteps < 1 || std::fabs(static_cast<double>(nsteps) * cfg.dt - T) > 1e-9 * T)
    throw std::invalid_argument("simulate_path: T must be a positive multiple of dt");

  Integrator integ(cfg);
  PathRunner runner{integ};
  PathResult res;
  res.state.x = x0;
  res.state.eta = opts.direction ? *opts.direction
                                 : SpectralVector(static_cast<std::size_t>(cfg.n_modes));
  const bool with_tangent = opts.direction.has_value();

  for (long k = 0; k < nsteps; ++k) {
    const NoiseIncrement dW = integ.draw_noise(k);
    const double supd =
        runner.coupled_step(res.state.x, with_tangent ? &res.state.eta : nullptr,
                            with_tangent ? &res.state.bel_integral : nullptr, dW);
    res.diag.delta_T = std::max(res.diag.delta_T, supd * supd + 1.0);
    res.state.t = static_cast<double>(k + 1) * cfg.dt;
    runner.check(res.state.x, k);
    if (opts.observer) opts.observer(k, res.state, supd);
  }
  return res;
}

}  // namespace rd
