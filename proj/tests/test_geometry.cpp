#include <doctest.h>

#include <cmath>

#include "rd/geometry.hpp"
#include "rd/oracles.hpp"

using namespace rd;
namespace orc = rd::oracles;

namespace {

ModelConfig gauss_config() {
  ModelConfig cfg;
  cfg.n_modes = 4;
  cfg.drift = OddPolynomial::zero();
  return cfg;
}

const SampleEnsemble& gauss_ensemble() {
  static const SampleEnsemble ens = sample_invariant(gauss_config(), 4, 41000, 1000, 10);
  return ens;
}

}  // namespace

TEST_CASE("level functions") {
  SpectralVector x(3);
  x.c = {1.0, 2.0, -2.0};
  CHECK(LevelFunction::ball()(x) == doctest::Approx(9.0));
  SpectralVector b(3);
  b.c = {0.0, 1.0, 0.0};
  CHECK(LevelFunction::halfspace(b)(x) == doctest::Approx(2.0));
  SpectralVector zero(3);
  CHECK_THROWS_AS(LevelFunction::halfspace(zero), ConfigError);
}

TEST_CASE("occupation cdf of a half-space is the gaussian cdf") {
  const SampleEnsemble& ens = gauss_ensemble();
  const LevelFunction g = LevelFunction::halfspace(SpectralVector::basis(1, 4));
  const auto one = CylinderFunction::constant(1.0, 4);
  const FunctionalEstimate at0 = occupation_cdf(ens, g, one, 0.0);
  CHECK(std::fabs(at0.mean - 0.5) <= 4.0 * at0.stderr_);
  const double sigma = std::sqrt(orc::ou_variance(1, 0.5));
  const FunctionalEstimate at1 = occupation_cdf(ens, g, one, sigma);
  CHECK(std::fabs(at1.mean - 0.8413447) <= 4.0 * at1.stderr_ + 0.01);
  CHECK(at1.mean >= at0.mean);
}

TEST_CASE("empty shells are flagged, never silent zeros") {
  const SampleEnsemble& ens = gauss_ensemble();
  const LevelFunction g = LevelFunction::ball();
  const auto one = CylinderFunction::constant(1.0, 4);
  const ShellEstimate far = shell_estimate(ens, g, one, 1e9, 1e-3);
  CHECK(far.empty());
  CHECK(far.hits == 0);
  ShellConfig cfg;
  cfg.epsilons = {1e-3, 5e-4, 2.5e-4};
  CHECK_THROWS_AS(surface_integral(ens, g, one, 1e9, cfg), EmptyShellError);
}

TEST_CASE("halfspace surface measure matches the scalar gaussian density") {
  const SampleEnsemble& ens = gauss_ensemble();
  const SpectralVector b = SpectralVector::basis(1, 4);
  const LevelFunction g = LevelFunction::halfspace(b);
  const auto one = CylinderFunction::constant(1.0, 4);
  const double r = 0.05;
  const SurfaceReport rep = surface_integral(ens, g, one, r, default_shell_config(ens, g));
  const double exact = orc::halfspace_density(b, r, 0.5);
  CHECK(std::fabs(rep.extrapolated - exact) <=
        4.0 * (rep.stat_stderr + rep.extrap_residual) + 0.05 * exact);
  CHECK(rep.agreement);
  CHECK(rep.g_kind == "halfspace");
}

TEST_CASE("ball field closed form at a basis vector") {
  const double beta = 0.875;
  SpectralVector x(3);
  x.c = {1.0, 0.0, 0.0};
  const SpectralVector F = ball_field(x, 2, beta);
  const double a1 = std::pow(eigenvalue(1), -beta);
  const double denom = 0.5 + 2.0 * a1 * a1;
  CHECK(F[0] == doctest::Approx(a1 / denom).epsilon(1e-12));
  CHECK(F[1] == doctest::Approx(0.0));
  CHECK(F[2] == doctest::Approx(0.0));  // P_n truncates above n
}

TEST_CASE("mstar for the ball field matches the three-term formula") {
  const double beta = 0.875;
  const int n = 3;
  SpectralVector x(4);
  x.c = {0.4, -0.3, 0.2, 0.6};
  std::map<std::size_t, std::function<double(const SpectralVector&)>> v;
  for (std::size_t h = 1; h <= 3; ++h)
    v[h] = [h](const SpectralVector& y) { return 0.7 * y[h - 1]; };

  // Independent evaluation of
  //   -sum_h d/dx_h F_h + sum_h F_h v_h,  F_h = a_h x_h / D,
  //   a_h = alpha_h^{-beta}, D = 1/n + 2 sum_h a_h^2 x_h^2 (truncated at n).
  // D carries the full (untruncated) |(-A)^{-beta} x|^2.
  double D = 1.0 / n, trace = 0.0, grad2 = 0.0, vterm = 0.0;
  for (std::size_t h = 1; h <= x.n_modes(); ++h) {
    const double a = std::pow(eigenvalue(h), -beta);
    D += 2.0 * a * a * x[h - 1] * x[h - 1];
    if (h <= static_cast<std::size_t>(n)) trace += a * a;
  }
  for (std::size_t h = 1; h <= static_cast<std::size_t>(n); ++h) {
    const double a = std::pow(eigenvalue(h), -beta);
    grad2 += 4.0 * a * a * a * a * x[h - 1] * x[h - 1];
    vterm += a * x[h - 1] * 0.7 * x[h - 1];
  }
  const double expect = -trace / D + grad2 / (D * D) + vterm / D;
  CHECK(mstar_ball(x, n, beta, v) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mstar for the half-space field") {
  const double beta = 0.875;
  SpectralVector b(3);
  b.c = {2.0, 0.0, 1.0};
  SpectralVector x(3);
  x.c = {0.1, 0.2, 0.3};
  std::map<std::size_t, std::function<double(const SpectralVector&)>> v;
  v[1] = [](const SpectralVector& y) { return y[0]; };
  v[3] = [](const SpectralVector& y) { return 2.0 * y[2]; };
  const double a1 = std::pow(eigenvalue(1), -beta), a3 = std::pow(eigenvalue(3), -beta);
  const double n2 = a1 * a1 * 4.0 + a3 * a3;
  const double expect = (a1 * x[0] * 2.0 + a3 * 2.0 * x[2] * 1.0) / n2;
  CHECK(mstar_halfspace(x, b, beta, v) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("occupation cdf is monotone in r") {
  const SampleEnsemble& ens = gauss_ensemble();
  const LevelFunction g = LevelFunction::ball();
  const auto one = CylinderFunction::constant(1.0, 4);
  double prev = -1.0;
  for (double r : {0.0, 0.01, 0.05, 0.1, 1.0}) {
    const double v = occupation_cdf(ens, g, one, r).mean;
    CHECK(v >= prev);
    prev = v;
  }
}
