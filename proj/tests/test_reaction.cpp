#include <doctest.h>

#include <cmath>

#include "rd/reaction.hpp"

using namespace rd;

TEST_CASE("cubic resolvent solves J + eps J^3 = r") {
  const OddPolynomial p = OddPolynomial::default_cubic();
  // eps = 1, r = 2: J + J^3 = 2 has the root J = 1.
  CHECK(p.resolvent(1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double r : {-40.0, -1.3, -1e-7, 0.0, 0.2, 5.0, 300.0}) {
    for (double eps : {1e-4, 1e-2, 1.0}) {
      const double J = p.resolvent(eps, r);
      CHECK(J - eps * p.eval(J) == doctest::Approx(r).epsilon(1e-11));
    }
  }
}

TEST_CASE("resolvent is a contraction") {
  const OddPolynomial p = OddPolynomial::default_cubic();
  const double eps = 0.05;
  double prev_r = -3.0, prev_J = p.resolvent(eps, prev_r);
  for (double r = -2.9; r < 3.0; r += 0.1) {
    const double J = p.resolvent(eps, r);
    CHECK(std::fabs(J - prev_J) <= std::fabs(r - prev_r) * (1.0 + 1e-12));
    prev_r = r;
    prev_J = J;
  }
}

TEST_CASE("yosida approximation values and identities") {
  const OddPolynomial p = OddPolynomial::default_cubic();
  // p_eps(r) = p(J_eps(r)) = (J_eps(r) - r) / eps.
  for (double r : {-4.0, -0.5, 0.0, 1.0, 10.0}) {
    const double eps = 0.01;
    const double J = p.resolvent(eps, r);
    CHECK(p.yosida_eval(eps, r) == doctest::Approx(p.eval(J)).epsilon(1e-12));
    CHECK(p.yosida_eval(eps, r) == doctest::Approx((J - r) / eps).epsilon(1e-9));
  }
  CHECK(p.yosida_eval(1.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("yosida derivative lies in [-1/eps, 0] and matches finite differences") {
  const OddPolynomial p = OddPolynomial::default_cubic();
  const double eps = 1e-2;
  for (double r = -20.0; r <= 20.0; r += 0.25) {
    const double d = p.yosida_deriv(eps, r);
    CHECK(d <= 0.0);
    CHECK(d >= -1.0 / eps);
    const double k = 1e-6 * (1.0 + std::fabs(r));
    const double fd = (p.yosida_eval(eps, r + k) - p.yosida_eval(eps, r - k)) / (2.0 * k);
    CHECK(d == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("lipschitz bound |p_eps(r1) - p_eps(r2)| <= |r1 - r2| / eps") {
  const OddPolynomial p({0.0, -2.0, 0.0, 0.0, 0.0, -1.0});  // -2r - r^5
  const double eps = 0.05;
  double prev_r = -5.0, prev_v = p.yosida_eval(eps, prev_r);
  for (double r = -4.9; r <= 5.0; r += 0.1) {
    const double v = p.yosida_eval(eps, r);
    CHECK(std::fabs(v - prev_v) <= std::fabs(r - prev_r) / eps * (1.0 + 1e-10));
    prev_r = r;
    prev_v = v;
  }
}

TEST_CASE("invalid drift polynomials are rejected") {
  CHECK_THROWS_AS(OddPolynomial({0.0, 0.0, -1.0}), ConfigError);        // even degree
  CHECK_THROWS_AS(OddPolynomial({0.0, 0.0, 0.0, 1.0}), ConfigError);    // c_N > 0
  CHECK_THROWS_AS(OddPolynomial({0.0, -1.0}), ConfigError);             // degree 1
  CHECK_THROWS_AS(OddPolynomial({0.0, 50.0, 0.0, -1.0}), ConfigError);  // p' > 0 near 0
}

TEST_CASE("zero drift") {
  const OddPolynomial z = OddPolynomial::zero();
  CHECK(z.is_zero());
  CHECK(z.eval(3.0) == 0.0);
  CHECK(z.deriv(3.0) == 0.0);
  CHECK(!OddPolynomial::default_cubic().is_zero());
}
