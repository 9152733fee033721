#include <doctest.h>

#include <cmath>
#include <set>

#include "rd/rng.hpp"

using namespace rd::philox;

TEST_CASE("normals are a pure function of the counter") {
  const double a = normal(42, 3, 1000, 7, 0);
  const double b = normal(42, 3, 1000, 7, 0);
  CHECK(a == b);
  CHECK(normal(42, 3, 1000, 7, 1) != a);  // lane
  CHECK(normal(42, 3, 1001, 7, 0) != a);  // step
  CHECK(normal(42, 3, 1000, 8, 0) != a);  // mode
  CHECK(normal(42, 4, 1000, 7, 0) != a);  // chain
  CHECK(normal(43, 3, 1000, 7, 0) != a);  // seed
}

TEST_CASE("philox block changes completely under key flips") {
  const Counter c{{1u, 2u, 3u, 4u}};
  const Counter r1 = philox4x32(c, 0x12345u, 0xabcdeu);
  const Counter r2 = philox4x32(c, 0x12344u, 0xabcdeu);
  int differing = 0;
  for (int i = 0; i < 4; ++i) differing += (r1.v[i] != r2.v[i]);
  CHECK(differing == 4);
}

TEST_CASE("normal moments") {
  const long n = 200000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = normal(7, 0, static_cast<uint64_t>(i), 0);
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
  }
  const double dn = static_cast<double>(n);
  CHECK(std::fabs(sum / dn) < 0.01);
  CHECK(sum2 / dn == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::fabs(sum3 / dn) < 0.05);
}

TEST_CASE("uniforms live in (0,1) and fill the interval") {
  double lo = 1.0, hi = 0.0;
  for (long i = 0; i < 20000; ++i) {
    const double u = uniform(9, 1, static_cast<uint64_t>(i), 2);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("streams for distinct modes are decorrelated") {
  double acc = 0.0;
  const long n = 50000;
  for (long i = 0; i < n; ++i)
    acc += normal(1, 0, static_cast<uint64_t>(i), 0) * normal(1, 0, static_cast<uint64_t>(i), 1);
  CHECK(std::fabs(acc / static_cast<double>(n)) < 0.02);
}
