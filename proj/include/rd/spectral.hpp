#pragma once

#include <cstddef>
#include <vector>

#include "rd/errors.hpp"

namespace rd {

// Element of H = L^2(0,1) in the Dirichlet sine eigenbasis
// e_h(xi) = sqrt(2) sin(h pi xi), h = 1..n_modes.
struct SpectralVector {
  std::vector<double> c;  // coefficient of e_h at index h-1

  SpectralVector() = default;
  explicit SpectralVector(std::size_t n_modes) : c(n_modes, 0.0) {}

  std::size_t n_modes() const { return c.size(); }
  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  static SpectralVector basis(std::size_t h, std::size_t n_modes);

  bool finite() const;
};

SpectralVector operator+(const SpectralVector& a, const SpectralVector& b);
SpectralVector operator-(const SpectralVector& a, const SpectralVector& b);
SpectralVector operator*(double s, const SpectralVector& v);
double dot(const SpectralVector& a, const SpectralVector& b);

// Dirichlet-Laplacian eigenvalue on (0,1): alpha_h = pi^2 h^2.
double eigenvalue(std::size_t h);

// Diagonal action of (-A)^s: coefficient h maps to alpha_h^s * v_h.
SpectralVector fractional_apply(double s, const SpectralVector& v);

// |v|_a = (sum_h alpha_h^a v_h^2)^{1/2}; a = 0 gives the H norm.
double sobolev_norm(double a, const SpectralVector& v);

// Field values at the collocation nodes xi_j = j/(M+1), j = 1..M.
struct GridField {
  std::vector<double> values;
  std::size_t M() const { return values.size(); }
};

// Physical <-> spectral transforms on the interior sine grid.
// Exact inverse pair when M >= n_modes; M defaults to 2*n_modes at the
// call sites so the cubic drift is dealiased on the retained band.
class SineTransform {
 public:
  SineTransform(std::size_t n_modes, std::size_t M);

  std::size_t n_modes() const { return n_; }
  std::size_t M() const { return M_; }

  GridField to_physical(const SpectralVector& v) const;
  SpectralVector to_spectral(const GridField& f) const;

  // to_physical into a caller-owned buffer (hot path in the integrator).
  void to_physical(const SpectralVector& v, std::vector<double>& out) const;
  void to_spectral(const std::vector<double>& f, SpectralVector& out) const;

 private:
  std::size_t n_, M_;
  std::vector<double> s_;  // s_[h*M + j] = sqrt(2) sin((h+1) pi (j+1)/(M+1))
};

}  // namespace rd
