#pragma once

#include <map>

#include "rd/cylinder.hpp"
#include "rd/ensemble.hpp"

namespace rd {

// Level function for the surface {g = r}: ball g(x) = |x|^2 or half-space
// g(x) = <x, b>.
struct LevelFunction {
  enum class Kind { Ball, HalfSpace };
  Kind kind = Kind::Ball;
  SpectralVector b;  // half-space direction, ignored for balls

  double operator()(const SpectralVector& x) const;
  static LevelFunction ball();
  static LevelFunction halfspace(SpectralVector b);
};

struct ShellConfig {
  std::vector<double> epsilons;  // strictly decreasing half-widths
  int extrapolation_order = 2;   // leading even-order bias fitted out
};

// Default schedule: eps_k = eps0 / 2^k, k = 0..4, eps0 = std(g)/10 under ens.
ShellConfig default_shell_config(const SampleEnsemble& ens, const LevelFunction& g);

// G_phi(r) = int_{g<=r} phi dnu.
FunctionalEstimate occupation_cdf(const SampleEnsemble& ens, const LevelFunction& g,
                                  const CylinderFunction& phi, double r);

// (1/2eps) int_{r-eps<=g<=r+eps} phi dnu. A shell with no hits comes back
// flagged (infinite stderr), never as a silent zero.
struct ShellEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t hits = 0;
  bool empty() const { return hits == 0; }
};
ShellEstimate shell_estimate(const SampleEnsemble& ens, const LevelFunction& g,
                             const CylinderFunction& phi, double r, double eps);

struct SurfaceReport {
  std::string g_kind;
  double r = 0.0;
  std::vector<double> epsilons;
  std::vector<double> shell_values;
  std::vector<double> shell_stderr;
  std::vector<std::size_t> shell_hits;
  double extrapolated = 0.0;
  double stat_stderr = 0.0;      // statistical part of the error budget
  double extrap_residual = 0.0;  // extrapolation part
  double cdf_diff_value = 0.0;   // kernel-smoothed occupation derivative
  double cdf_diff_stderr = 0.0;
  bool agreement = false;
  bool degraded = false;  // shell sequence noisier than the fit tolerates
};

// Richardson extrapolation of the shell estimator to eps = 0, cross-checked
// against a Gaussian-kernel derivative of the occupation function.
// Throws EmptyShellError when every shell is empty.
SurfaceReport surface_integral(const SampleEnsemble& ens, const LevelFunction& g,
                               const CylinderFunction& phi, double r,
                               const ShellConfig& cfg);

// Regularized ball field F_g^n(x) = (-A)^{-beta} P_n x / (1/n + 2|(-A)^{-beta} x|^2).
SpectralVector ball_field(const SpectralVector& x, int n, double beta);

// Pointwise M*(F_g^n)(x) from the three-term expansion; v_h evaluators for
// h <= n are required.
double mstar_ball(const SpectralVector& x, int n, double beta,
                  const std::map<std::size_t, std::function<double(const SpectralVector&)>>&
                      v_estimates);

// Pointwise M*(F_g)(x) for the half-space field F_g = (-A)^{-beta} b / |...|^2:
// sum_j alpha_j^{-beta} v_j(x) b_j / |(-A)^{-beta} b|^2 over the support of b.
double mstar_halfspace(const SpectralVector& x, const SpectralVector& b, double beta,
                       const std::map<std::size_t,
                                      std::function<double(const SpectralVector&)>>& v_estimates);

}  // namespace rd
