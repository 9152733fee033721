#include "rd/spectral.hpp"

#include <cmath>
#include <numbers>

namespace rd {

SpectralVector SpectralVector::basis(std::size_t h, std::size_t n_modes) {
  if (h < 1 || h > n_modes) throw std::invalid_argument("basis: h out of range");
  SpectralVector v(n_modes);
  v.c[h - 1] = 1.0;
  return v;
}

bool SpectralVector::finite() const {
  for (double x : c)
    if (!std::isfinite(x)) return false;
  return true;
}

SpectralVector operator+(const SpectralVector& a, const SpectralVector& b) {
  SpectralVector r(a.n_modes());
  for (std::size_t i = 0; i < a.n_modes(); ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

SpectralVector operator-(const SpectralVector& a, const SpectralVector& b) {
  SpectralVector r(a.n_modes());
  for (std::size_t i = 0; i < a.n_modes(); ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

SpectralVector operator*(double s, const SpectralVector& v) {
  SpectralVector r(v.n_modes());
  for (std::size_t i = 0; i < v.n_modes(); ++i) r.c[i] = s * v.c[i];
  return r;
}

double dot(const SpectralVector& a, const SpectralVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n_modes(); ++i) s += a.c[i] * b.c[i];
  return s;
}

double eigenvalue(std::size_t h) {
  if (h < 1) throw std::invalid_argument("eigenvalue: h must be >= 1");
  const double pi = std::numbers::pi;
  return pi * pi * static_cast<double>(h) * static_cast<double>(h);
}

SpectralVector fractional_apply(double s, const SpectralVector& v) {
  if (!v.finite()) throw std::invalid_argument("fractional_apply: non-finite input");
  SpectralVector r(v.n_modes());
  for (std::size_t i = 0; i < v.n_modes(); ++i)
    r.c[i] = std::pow(eigenvalue(i + 1), s) * v.c[i];
  return r;
}

double sobolev_norm(double a, const SpectralVector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.n_modes(); ++i) {
    const double w = std::pow(eigenvalue(i + 1), a);
    s += w * v.c[i] * v.c[i];
  }
  return std::sqrt(s);
}

SineTransform::SineTransform(std::size_t n_modes, std::size_t M) : n_(n_modes), M_(M) {
  if (M < n_modes)
    throw ConfigError("SineTransform: M < n_modes loses information on round trip");
  const double pi = std::numbers::pi;
  s_.resize(n_ * M_);
  for (std::size_t h = 0; h < n_; ++h)
    for (std::size_t j = 0; j < M_; ++j)
      s_[h * M_ + j] = std::sqrt(2.0) *
                       std::sin(static_cast<double>(h + 1) * pi *
                                static_cast<double>(j + 1) / static_cast<double>(M_ + 1));
}

void SineTransform::to_physical(const SpectralVector& v, std::vector<double>& out) const {
  out.assign(M_, 0.0);
  for (std::size_t h = 0; h < n_; ++h) {
    const double vh = v.c[h];
    if (vh == 0.0) continue;
    const double* row = &s_[h * M_];
    for (std::size_t j = 0; j < M_; ++j) out[j] += vh * row[j];
  }
}

void SineTransform::to_spectral(const std::vector<double>& f, SpectralVector& out) const {
  out.c.assign(n_, 0.0);
  const double w = 1.0 / static_cast<double>(M_ + 1);
  for (std::size_t h = 0; h < n_; ++h) {
    const double* row = &s_[h * M_];
    double acc = 0.0;
    for (std::size_t j = 0; j < M_; ++j) acc += f[j] * row[j];
    out.c[h] = w * acc;
  }
}

GridField SineTransform::to_physical(const SpectralVector& v) const {
  GridField f;
  to_physical(v, f.values);
  return f;
}

SpectralVector SineTransform::to_spectral(const GridField& f) const {
  SpectralVector v(n_);
  to_spectral(f.values, v);
  return v;
}

}  // namespace rd
