#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rd/reaction.hpp"
#include "rd/spectral.hpp"

namespace rd {

// Closed-form and brute-force references for the p == 0 (Gaussian) stationary
// theory and scalar laws. Deliberately independent of the dynamics module:
// everything here is scalar arithmetic, quadrature or std::mt19937 sampling.
namespace oracles {

// Stationary variance of mode h: noise alpha_h^{-gamma}, drift -alpha_h,
// so sigma_h^2 = alpha_h^{-1-gamma}/2.
double ou_variance(std::size_t h, double gamma);

// Exact Fomin density for nu = N(0, Q), Q = (-A)^{-1-gamma}/2:
// v_z(x) = 2 <(-A)^{(1+gamma-delta)/2} z, x>.
double gaussian_vz(const SpectralVector& z, const SpectralVector& x, double gamma,
                   double delta);
// Coefficient of x_h in v_{e_h}: 2 alpha_h^{(1+gamma-delta)/2}.
double gaussian_vz_coeff(std::size_t h, double gamma, double delta);
// ||v_{e_h}||_{L^2(nu)} = sqrt(2) alpha_h^{-delta/2}.
double gaussian_vh_l2(std::size_t h, double gamma, double delta);

// Var(<x,lambda>) under the Gaussian reference.
double gaussian_quadratic_form(const SpectralVector& lambda, double gamma);

// For phi(x) = cos(<x,lambda> + theta) under the Gaussian reference:
// E[phi], E[phi^2] and the Theorem-t2 left side E[<D phi, e_k>].
double gaussian_trig_mean(const SpectralVector& lambda, double theta, double gamma);
double gaussian_trig_second_moment(const SpectralVector& lambda, double theta,
                                   double gamma);
double gaussian_trig_ibp_lhs(const SpectralVector& lambda, double theta, std::size_t k,
                             double gamma);

// Stationary density of the scalar SDE dx = (-alpha_1 x + p(x)) dt
// + alpha_1^{-gamma/2} dbeta, normalized on a symmetric grid:
// density proportional to exp(2 * Potential / sigma^2).
struct OneModeDensity {
  std::vector<double> grid;  // uniform on [-R, R]
  std::vector<double> pdf;
  std::vector<double> cdf;
  double pdf_at(double r) const;
  double cdf_at(double r) const;
};
OneModeDensity one_mode_invariant_density(const OddPolynomial& p, double gamma,
                                          std::size_t grid_points = 40001);

// Density at r of <x,b> under the Gaussian reference: N(0, sum b_h^2 s_h^2).
double halfspace_density(const SpectralVector& b, double r, double gamma);

// Density at r of |x|^2 = sum_h s_h^2 Z_h^2 by scalar Monte Carlo plus a
// Gaussian kernel estimate (Silverman bandwidth). Returns value and its
// batch-means stderr.
struct DensityEstimate {
  double value;
  double stderr_;
};
DensityEstimate ball_radial_density(double r, double gamma, int n_modes,
                                    std::size_t draws = 10'000'000, uint64_t seed = 42);

// Draws of sum_h s_h^2 Z_h^2 (shared by ball_radial_density and tests).
std::vector<double> ball_radial_samples(double gamma, int n_modes, std::size_t draws,
                                        uint64_t seed);
DensityEstimate kde_at(const std::vector<double>& samples, double r);

// Kolmogorov-Smirnov distance between samples and a reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace oracles
}  // namespace rd
