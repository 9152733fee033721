#include "rd/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rd {

namespace {

double horner(const std::vector<double>& c, double r) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * r + *it;
  return v;
}

}  // namespace

OddPolynomial::OddPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) return;  // p == 0
  const int N = static_cast<int>(coeffs_.size()) - 1;
  if (N <= 1 || N % 2 == 0)
    throw ConfigError("drift polynomial degree must be odd and > 1, got " + std::to_string(N));
  if (coeffs_.back() >= 0.0)
    throw ConfigError("drift polynomial leading coefficient must be negative");
  // p' has even degree with negative leading coefficient; a positive sample
  // of p' would mean p is not non-increasing.
  for (int i = -300; i <= 300; ++i) {
    const double r = 0.05 * i;
    if (deriv(r) > 0.0)
      throw ConfigError("drift polynomial is not non-increasing (p'(" + std::to_string(r) +
                        ") > 0)");
  }
}

double OddPolynomial::eval(double r) const { return coeffs_.empty() ? 0.0 : horner(coeffs_, r); }

double OddPolynomial::deriv(double r) const {
  if (coeffs_.size() < 2) return 0.0;
  double v = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k)
    v = v * r + static_cast<double>(k) * coeffs_[k];
  return v;
}

double OddPolynomial::resolvent(double eps, double r) const {
  if (eps <= 0.0) throw std::invalid_argument("resolvent: eps must be positive");
  if (coeffs_.empty()) return r;
  const double tol = 1e-13 * (1.0 + std::fabs(r));
  // g(J) = J - eps p(J) - r is strictly increasing; bracket around r.
  double lo = r - eps * std::fabs(eval(r)) - 1.0;
  double hi = r + eps * std::fabs(eval(r)) + 1.0;
  auto g = [&](double J) { return J - eps * eval(J) - r; };
  while (g(lo) > 0.0) lo -= std::max(1.0, std::fabs(lo));
  while (g(hi) < 0.0) hi += std::max(1.0, std::fabs(hi));

  double J = r;
  for (int it = 0; it < 200; ++it) {
    const double gJ = g(J);
    if (std::fabs(gJ) <= tol) return J;
    if (gJ > 0.0) hi = J; else lo = J;
    const double dg = 1.0 - eps * deriv(J);
    double step = gJ / dg;  // dg >= 1 since p' <= 0
    double Jn = J - step;
    if (!(Jn > lo && Jn < hi)) Jn = 0.5 * (lo + hi);
    J = Jn;
  }
  if (std::fabs(g(J)) <= 1e-12 * (1.0 + std::fabs(r))) return J;
  throw NumericalError("resolvent: no convergence at eps=" + std::to_string(eps) +
                       " r=" + std::to_string(r) + " residual=" + std::to_string(g(J)));
}

double OddPolynomial::yosida_eval(double eps, double r) const {
  if (coeffs_.empty()) return 0.0;
  return eval(resolvent(eps, r));
}

double OddPolynomial::yosida_deriv(double eps, double r) const {
  if (eps <= 0.0) throw std::invalid_argument("yosida_deriv: eps must be positive");
  if (coeffs_.empty()) return 0.0;
  const double dpJ = deriv(resolvent(eps, r));
  return dpJ / (1.0 - eps * dpJ);
}

}  // namespace rd
