#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rd/spectral.hpp"

using namespace rd;

namespace {
constexpr double kPi = std::numbers::pi;

SpectralVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss;
  SpectralVector v(n);
  for (auto& x : v.c) x = gauss(rng);
  return v;
}
}  // namespace

TEST_CASE("eigenvalues are pi^2 h^2") {
  CHECK(eigenvalue(1) == doctest::Approx(kPi * kPi).epsilon(1e-15));
  CHECK(eigenvalue(3) == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-15));
  CHECK(eigenvalue(2) > eigenvalue(1));
}

TEST_CASE("fractional powers form a semigroup and act diagonally") {
  std::mt19937_64 rng(7);
  const SpectralVector v = random_vector(rng, 12);
  const SpectralVector a = fractional_apply(0.3, fractional_apply(0.45, v));
  const SpectralVector b = fractional_apply(0.75, v);
  for (std::size_t h = 0; h < v.n_modes(); ++h) {
    CHECK(a[h] == doctest::Approx(b[h]).epsilon(1e-13));
    CHECK(b[h] == doctest::Approx(std::pow(eigenvalue(h + 1), 0.75) * v[h]).epsilon(1e-13));
  }
}

TEST_CASE("sobolev norm: a = 0 is the H norm, basis vectors scale as alpha^{a/2}") {
  const SpectralVector e3 = SpectralVector::basis(3, 8);
  CHECK(sobolev_norm(0.0, e3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sobolev_norm(1.5, e3) ==
        doctest::Approx(std::pow(eigenvalue(3), 0.75)).epsilon(1e-13));
  CHECK(sobolev_norm(-2.0, e3) ==
        doctest::Approx(std::pow(eigenvalue(3), -1.0)).epsilon(1e-13));
}

TEST_CASE("interpolation |v|_b <= |v|_a^{1-t} |v|_c^t over 1000 random vectors") {
  std::mt19937_64 rng(11);
  const double a = -0.5, c = 1.5, t = 0.4, b = (1.0 - t) * a + t * c;
  for (int i = 0; i < 1000; ++i) {
    const SpectralVector v = random_vector(rng, 16);
    const double lhs = sobolev_norm(b, v);
    const double rhs = std::pow(sobolev_norm(a, v), 1.0 - t) * std::pow(sobolev_norm(c, v), t);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("embedding: grid sup norm controlled by |v|_a for a > 1/2") {
  std::mt19937_64 rng(13);
  SineTransform tr(16, 32);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SpectralVector v = random_vector(rng, 16);
    const GridField f = tr.to_physical(v);
    double sup = 0.0;
    for (double x : f.values) sup = std::max(sup, std::fabs(x));
    worst = std::max(worst, sup / sobolev_norm(0.6, v));
  }
  CHECK(worst > 0.0);
  CHECK(worst < 10.0);
}

TEST_CASE("transform round-trip is exact for M >= n_modes") {
  std::mt19937_64 rng(17);
  SineTransform tr(16, 32);
  for (int i = 0; i < 100; ++i) {
    const SpectralVector v = random_vector(rng, 16);
    const SpectralVector w = tr.to_spectral(tr.to_physical(v));
    for (std::size_t h = 0; h < 16; ++h) CHECK(w[h] == doctest::Approx(v[h]).epsilon(1e-12));
  }
}

TEST_CASE("discrete Parseval on the collocation grid") {
  std::mt19937_64 rng(19);
  SineTransform tr(8, 16);
  const SpectralVector v = random_vector(rng, 8);
  const GridField f = tr.to_physical(v);
  double grid_l2 = 0.0;
  for (double x : f.values) grid_l2 += x * x;
  grid_l2 /= static_cast<double>(f.M() + 1);
  double coef_l2 = 0.0;
  for (double x : v.c) coef_l2 += x * x;
  CHECK(grid_l2 == doctest::Approx(coef_l2).epsilon(1e-12));
}

TEST_CASE("undersampled grid is rejected") {
  CHECK_THROWS_AS(SineTransform(16, 8), ConfigError);
}

TEST_CASE("vector arithmetic") {
  SpectralVector a(3), b(3);
  a.c = {1.0, 2.0, 3.0};
  b.c = {0.5, -1.0, 2.0};
  const SpectralVector s = a + b;
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK((a - b)[2] == doctest::Approx(1.0));
  CHECK((2.0 * a)[0] == doctest::Approx(2.0));
  CHECK(dot(a, b) == doctest::Approx(0.5 - 2.0 + 6.0));
  CHECK(a.finite());
  a.c[0] = std::nan("");
  CHECK(!a.finite());
}
