#pragma once

#include <vector>

#include "rd/errors.hpp"

namespace rd {

// Decreasing polynomial drift p(r) = sum_k c_k r^k of odd degree N > 1
// with c_N < 0, plus its Yosida regularization p_eps = p o J_eps.
class OddPolynomial {
 public:
  // coeffs in c_0..c_N order, as read from config ("p_coeffs = [0,0,0,-1]").
  explicit OddPolynomial(std::vector<double> coeffs);

  static OddPolynomial default_cubic() { return OddPolynomial({0.0, 0.0, 0.0, -1.0}); }
  static OddPolynomial zero() { return OddPolynomial(); }

  // p identically zero (Gaussian reference case).
  OddPolynomial() = default;
  bool is_zero() const { return coeffs_.empty(); }

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }

  double eval(double r) const;
  double deriv(double r) const;

  // J_eps(r): unique solution of J - eps*p(J) = r. Safeguarded Newton with
  // bisection fallback; residual <= 1e-12*(1+|r|) or NumericalError.
  double resolvent(double eps, double r) const;

  // p_eps(r) = p(J_eps(r)) = (J_eps(r) - r)/eps. Non-increasing, 1/eps-Lipschitz.
  double yosida_eval(double eps, double r) const;

  // p_eps'(r) = p'(J) / (1 - eps p'(J)), J = J_eps(r); lies in [-1/eps, 0].
  double yosida_deriv(double eps, double r) const;

 private:
  std::vector<double> coeffs_;
};

}  // namespace rd
