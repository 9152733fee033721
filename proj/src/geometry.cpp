#include "rd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rd/errors.hpp"
#include "rd/oracles.hpp"

namespace rd {

double LevelFunction::operator()(const SpectralVector& x) const {
  if (kind == Kind::Ball) return dot(x, x);
  return dot(x, b);
}

LevelFunction LevelFunction::ball() { return LevelFunction{Kind::Ball, {}}; }

LevelFunction LevelFunction::halfspace(SpectralVector b) {
  bool nonzero = false;
  for (double v : b.c) nonzero |= (v != 0.0);
  if (!nonzero) throw ConfigError("halfspace: b must be nonzero");
  return LevelFunction{Kind::HalfSpace, std::move(b)};
}

ShellConfig default_shell_config(const SampleEnsemble& ens, const LevelFunction& g) {
  double m = 0.0, m2 = 0.0;
  for (const auto& x : ens.samples) {
    const double v = g(x);
    m += v;
    m2 += v * v;
  }
  const double n = static_cast<double>(ens.size());
  m /= n;
  const double sd = std::sqrt(std::max(0.0, m2 / n - m * m));
  ShellConfig cfg;
  for (int k = 0; k <= 4; ++k) cfg.epsilons.push_back(sd / 10.0 / std::pow(2.0, k));
  return cfg;
}

FunctionalEstimate occupation_cdf(const SampleEnsemble& ens, const LevelFunction& g,
                                  const CylinderFunction& phi, double r) {
  return estimate_functional(
      ens, [&](const SpectralVector& x) { return g(x) <= r ? phi(x) : 0.0; });
}

ShellEstimate shell_estimate(const SampleEnsemble& ens, const LevelFunction& g,
                             const CylinderFunction& phi, double r, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("shell_estimate: eps must be positive");
  std::size_t hits = 0;
  for (const auto& x : ens.samples) {
    const double v = g(x);
    if (v >= r - eps && v <= r + eps) ++hits;
  }
  ShellEstimate out;
  out.hits = hits;
  if (hits == 0) {
    out.stderr_ = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto est = estimate_functional(ens, [&](const SpectralVector& x) {
    const double v = g(x);
    return (v >= r - eps && v <= r + eps) ? phi(x) / (2.0 * eps) : 0.0;
  });
  out.value = est.mean;
  // batch-means stderr; floor at the binomial count term so a few-hit shell
  // cannot report a spuriously tight interval
  const double n = static_cast<double>(ens.size());
  const double pf = static_cast<double>(hits) / n;
  const double binom = std::fabs(est.mean) *
                       std::sqrt(std::max(0.0, (1.0 - pf) / std::max(1.0, static_cast<double>(hits))));
  out.stderr_ = std::max(est.stderr_, binom);
  return out;
}

SurfaceReport surface_integral(const SampleEnsemble& ens, const LevelFunction& g,
                               const CylinderFunction& phi, double r,
                               const ShellConfig& cfg) {
  if (cfg.epsilons.size() < 3)
    throw ConfigError("surface_integral: need at least 3 shell widths");
  for (std::size_t i = 1; i < cfg.epsilons.size(); ++i)
    if (!(cfg.epsilons[i] < cfg.epsilons[i - 1]) || !(cfg.epsilons[i] > 0.0))
      throw ConfigError("surface_integral: epsilons must be positive and strictly decreasing");

  SurfaceReport rep;
  rep.g_kind = g.kind == LevelFunction::Kind::Ball ? "ball" : "halfspace";
  rep.r = r;

  std::size_t total_hits = 0;
  for (double eps : cfg.epsilons) {
    const ShellEstimate se = shell_estimate(ens, g, phi, r, eps);
    rep.epsilons.push_back(eps);
    rep.shell_values.push_back(se.value);
    rep.shell_stderr.push_back(se.stderr_);
    rep.shell_hits.push_back(se.hits);
    total_hits += se.hits;
  }
  if (total_hits == 0)
    throw EmptyShellError("surface_integral: every shell around r is empty");

  // weighted least squares of S(eps) = a + b eps^order over nonzero shells
  double s_w = 0, s_wu = 0, s_wuu = 0, s_wy = 0, s_wuy = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
    if (rep.shell_hits[i] == 0) continue;
    const double u = std::pow(rep.epsilons[i], cfg.extrapolation_order);
    const double w = 1.0 / (rep.shell_stderr[i] * rep.shell_stderr[i] + 1e-300);
    s_w += w;
    s_wu += w * u;
    s_wuu += w * u * u;
    s_wy += w * rep.shell_values[i];
    s_wuy += w * u * rep.shell_values[i];
    ++used;
  }
  if (used < 3) throw EmptyShellError("surface_integral: fewer than 3 nonempty shells");
  const double det = s_w * s_wuu - s_wu * s_wu;
  const double a = (s_wuu * s_wy - s_wu * s_wuy) / det;
  const double b = (s_w * s_wuy - s_wu * s_wy) / det;
  rep.extrapolated = a;
  rep.stat_stderr = std::sqrt(s_wuu / det);

  double max_resid = 0.0;
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
    if (rep.shell_hits[i] == 0) continue;
    const double fit = a + b * std::pow(rep.epsilons[i], cfg.extrapolation_order);
    const double resid = std::fabs(rep.shell_values[i] - fit);
    max_resid = std::max(max_resid, resid);
    if (resid > 4.0 * rep.shell_stderr[i]) rep.degraded = true;
  }
  rep.extrap_residual = max_resid;

  // cross-check: kernel-smoothed derivative of G_phi at r. For phi == 1 this
  // is the plain KDE of g; a general phi weights the kernel.
  {
    std::vector<double> gv(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) gv[i] = g(ens.samples[i]);
    double m = 0, m2 = 0;
    for (double v : gv) {
      m += v;
      m2 += v * v;
    }
    const double n = static_cast<double>(gv.size());
    m /= n;
    const double sd = std::sqrt(std::max(0.0, m2 / n - m * m));
    const double bw = 1.06 * sd * std::pow(n, -0.2);
    const double inv = 1.0 / (bw * std::sqrt(2.0 * 3.14159265358979323846));
    std::vector<double> kv(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const double u = (rep.r - gv[i]) / bw;
      kv[i] = phi(ens.samples[i]) * inv * std::exp(-0.5 * u * u);
    }
    const auto est = estimate_scalar_series(kv);
    rep.cdf_diff_value = est.mean;
    rep.cdf_diff_stderr = est.stderr_;
  }

  const double tol = 3.0 * std::sqrt(rep.stat_stderr * rep.stat_stderr +
                                     rep.cdf_diff_stderr * rep.cdf_diff_stderr) +
                     rep.extrap_residual + 0.05 * std::fabs(rep.extrapolated);
  rep.agreement = std::fabs(rep.extrapolated - rep.cdf_diff_value) <= tol;
  return rep;
}

SpectralVector ball_field(const SpectralVector& x, int n, double beta) {
  if (n < 1 || static_cast<std::size_t>(n) > x.n_modes())
    throw std::invalid_argument("ball_field: n out of range");
  double denom = 1.0 / static_cast<double>(n);
  for (std::size_t h = 1; h <= x.n_modes(); ++h) {
    const double ab = std::pow(eigenvalue(h), -beta) * x.c[h - 1];
    denom += 2.0 * ab * ab;
  }
  SpectralVector F(x.n_modes());
  for (std::size_t h = 1; h <= static_cast<std::size_t>(n); ++h)
    F.c[h - 1] = std::pow(eigenvalue(h), -beta) * x.c[h - 1] / denom;
  return F;
}

double mstar_ball(const SpectralVector& x, int n, double beta,
                  const std::map<std::size_t, std::function<double(const SpectralVector&)>>&
                      v_estimates) {
  if (n < 1 || static_cast<std::size_t>(n) > x.n_modes())
    throw std::invalid_argument("mstar_ball: n out of range");
  for (std::size_t h = 1; h <= static_cast<std::size_t>(n); ++h)
    if (!v_estimates.count(h))
      throw std::invalid_argument("mstar_ball: missing v_h for mode " + std::to_string(h));

  double denom = 1.0 / static_cast<double>(n);
  for (std::size_t h = 1; h <= x.n_modes(); ++h) {
    const double ab = std::pow(eigenvalue(h), -beta) * x.c[h - 1];
    denom += 2.0 * ab * ab;
  }
  double trace = 0.0, num2 = 0.0, vsum = 0.0;
  for (std::size_t h = 1; h <= static_cast<std::size_t>(n); ++h) {
    const double a2b = std::pow(eigenvalue(h), -2.0 * beta);
    trace += a2b;
    num2 += a2b * a2b * x.c[h - 1] * x.c[h - 1];
    vsum += std::pow(eigenvalue(h), -beta) * x.c[h - 1] * v_estimates.at(h)(x);
  }
  return -trace / denom + 4.0 * num2 / (denom * denom) + vsum / denom;
}

double mstar_halfspace(const SpectralVector& x, const SpectralVector& b, double beta,
                       const std::map<std::size_t,
                                      std::function<double(const SpectralVector&)>>& v_estimates) {
  double norm2 = 0.0;
  for (std::size_t j = 1; j <= b.n_modes(); ++j) {
    const double ab = std::pow(eigenvalue(j), -beta) * b.c[j - 1];
    norm2 += ab * ab;
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("mstar_halfspace: b must be nonzero");
  double acc = 0.0;
  for (std::size_t j = 1; j <= b.n_modes(); ++j) {
    if (b.c[j - 1] == 0.0) continue;
    if (!v_estimates.count(j))
      throw std::invalid_argument("mstar_halfspace: missing v_j for mode " + std::to_string(j));
    acc += std::pow(eigenvalue(j), -beta) * v_estimates.at(j)(x) * b.c[j - 1];
  }
  return acc / norm2;
}

}  // namespace rd
