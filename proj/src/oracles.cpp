#include "rd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rd/errors.hpp"

namespace rd {
namespace oracles {

double ou_variance(std::size_t h, double gamma) {
  return 0.5 * std::pow(eigenvalue(h), -1.0 - gamma);
}

double gaussian_vz(const SpectralVector& z, const SpectralVector& x, double gamma,
                   double delta) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.n_modes(); ++i)
    s += std::pow(eigenvalue(i + 1), 0.5 * (1.0 + gamma - delta)) * z.c[i] * x.c[i];
  return 2.0 * s;
}

double gaussian_vz_coeff(std::size_t h, double gamma, double delta) {
  return 2.0 * std::pow(eigenvalue(h), 0.5 * (1.0 + gamma - delta));
}

double gaussian_vh_l2(std::size_t h, double gamma, double delta) {
  return std::sqrt(2.0) * std::pow(eigenvalue(h), -0.5 * delta);
}

double gaussian_quadratic_form(const SpectralVector& lambda, double gamma) {
  double s2 = 0.0;
  for (std::size_t i = 0; i < lambda.n_modes(); ++i)
    s2 += lambda.c[i] * lambda.c[i] * ou_variance(i + 1, gamma);
  return s2;
}

double gaussian_trig_mean(const SpectralVector& lambda, double theta, double gamma) {
  return std::cos(theta) * std::exp(-0.5 * gaussian_quadratic_form(lambda, gamma));
}

double gaussian_trig_second_moment(const SpectralVector& lambda, double theta,
                                   double gamma) {
  const double s2 = gaussian_quadratic_form(lambda, gamma);
  return 0.5 * (1.0 + std::cos(2.0 * theta) * std::exp(-2.0 * s2));
}

double gaussian_trig_ibp_lhs(const SpectralVector& lambda, double theta, std::size_t k,
                             double gamma) {
  // E[-sin(<x,lambda>+theta)] lambda_k
  const double s2 = gaussian_quadratic_form(lambda, gamma);
  return -std::sin(theta) * std::exp(-0.5 * s2) * lambda.c[k - 1];
}

double OneModeDensity::pdf_at(double r) const {
  if (r <= grid.front() || r >= grid.back()) return 0.0;
  const double dx = grid[1] - grid[0];
  const std::size_t i = static_cast<std::size_t>((r - grid.front()) / dx);
  const double w = (r - grid[i]) / dx;
  return (1.0 - w) * pdf[i] + w * pdf[i + 1];
}

double OneModeDensity::cdf_at(double r) const {
  if (r <= grid.front()) return 0.0;
  if (r >= grid.back()) return 1.0;
  const double dx = grid[1] - grid[0];
  const std::size_t i = static_cast<std::size_t>((r - grid.front()) / dx);
  const double w = (r - grid[i]) / dx;
  return (1.0 - w) * cdf[i] + w * cdf[i + 1];
}

OneModeDensity one_mode_invariant_density(const OddPolynomial& p, double gamma,
                                          std::size_t grid_points) {
  const double a1 = eigenvalue(1);
  const double sigma2 = std::pow(a1, -gamma);

  // Antiderivative of the full drift b(r) = -a1 r + p(r), zero at 0.
  auto potential = [&](double r) {
    double P = 0.0;
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k)
      P += c[k] * std::pow(r, static_cast<double>(k + 1)) / static_cast<double>(k + 1);
    return -0.5 * a1 * r * r + P;
  };
  auto log_density = [&](double r) { return 2.0 * potential(r) / sigma2; };

  double R = 1.0;
  while (log_density(R) > -130.0 && R < 1e6) R *= 1.5;

  if (grid_points % 2 == 0) ++grid_points;  // Simpson needs an odd count
  OneModeDensity d;
  d.grid.resize(grid_points);
  d.pdf.resize(grid_points);
  d.cdf.resize(grid_points);
  const double dx = 2.0 * R / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    d.grid[i] = -R + dx * static_cast<double>(i);
    d.pdf[i] = std::exp(log_density(d.grid[i]));
  }
  // composite Simpson mass
  double mass = d.pdf.front() + d.pdf.back();
  for (std::size_t i = 1; i + 1 < grid_points; ++i) mass += (i % 2 ? 4.0 : 2.0) * d.pdf[i];
  mass *= dx / 3.0;
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw NumericalError("one_mode_invariant_density: normalization failed");
  for (auto& v : d.pdf) v /= mass;

  d.cdf[0] = 0.0;
  for (std::size_t i = 1; i < grid_points; ++i)
    d.cdf[i] = d.cdf[i - 1] + 0.5 * dx * (d.pdf[i - 1] + d.pdf[i]);
  const double total = d.cdf.back();
  for (auto& v : d.cdf) v /= total;
  return d;
}

double halfspace_density(const SpectralVector& b, double r, double gamma) {
  const double s2 = gaussian_quadratic_form(b, gamma);
  return std::exp(-0.5 * r * r / s2) / std::sqrt(2.0 * std::numbers::pi * s2);
}

std::vector<double> ball_radial_samples(double gamma, int n_modes, std::size_t draws,
                                        uint64_t seed) {
  std::vector<double> var(static_cast<std::size_t>(n_modes));
  for (int h = 1; h <= n_modes; ++h)
    var[static_cast<std::size_t>(h - 1)] = ou_variance(static_cast<std::size_t>(h), gamma);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> out(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    double s = 0.0;
    for (double v : var) {
      const double z = nd(gen);
      s += v * z * z;
    }
    out[i] = s;
  }
  return out;
}

DensityEstimate kde_at(const std::vector<double>& samples, double r) {
  const std::size_t n = samples.size();
  double m = 0.0, m2 = 0.0;
  for (double s : samples) {
    m += s;
    m2 += s * s;
  }
  m /= static_cast<double>(n);
  const double sd = std::sqrt(std::max(0.0, m2 / static_cast<double>(n) - m * m));
  const double bw = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);

  const std::size_t nb = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(n)));
  const std::size_t bs = n / nb;
  const double inv = 1.0 / (bw * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> bmeans(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    double acc = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) {
      const double u = (r - samples[i]) / bw;
      acc += inv * std::exp(-0.5 * u * u);
    }
    bmeans[b] = acc / static_cast<double>(bs);
  }
  double mean = 0.0;
  for (double v : bmeans) mean += v;
  mean /= static_cast<double>(nb);
  double var = 0.0;
  for (double v : bmeans) var += (v - mean) * (v - mean);
  var /= static_cast<double>(nb - 1) * static_cast<double>(nb);
  return {mean, std::sqrt(var)};
}

DensityEstimate ball_radial_density(double r, double gamma, int n_modes, std::size_t draws,
                                    uint64_t seed) {
  return kde_at(ball_radial_samples(gamma, n_modes, draws, seed), r);
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    ks = std::max(ks, std::fabs(F - static_cast<double>(i) / n));
    ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / n - F));
  }
  return ks;
}

}  // namespace oracles
}  // namespace rd
