#include "rd/cylinder.hpp"

#include <cmath>

namespace rd {

CylinderFunction CylinderFunction::trig(SpectralVector lambda, double theta, std::string id) {
  CylinderFunction c;
  c.trig_ = true;
  c.lambda_ = lambda;
  c.theta_ = theta;
  c.id_ = id.empty() ? "trig" : std::move(id);
  c.f_ = [lambda, theta](const SpectralVector& x) { return std::cos(dot(x, lambda) + theta); };
  c.grad_ = [lambda, theta](const SpectralVector& x) {
    return -std::sin(dot(x, lambda) + theta) * lambda;
  };
  return c;
}

CylinderFunction CylinderFunction::coordinate(std::size_t mode_j, int power_m,
                                              std::size_t n_modes, std::string id) {
  CylinderFunction c;
  c.id_ = id.empty() ? "x" + std::to_string(mode_j) + "^" + std::to_string(power_m)
                     : std::move(id);
  c.f_ = [mode_j, power_m](const SpectralVector& x) {
    return std::pow(x.c[mode_j - 1], power_m);
  };
  c.grad_ = [mode_j, power_m, n_modes](const SpectralVector& x) {
    SpectralVector g(n_modes);
    g.c[mode_j - 1] = power_m * std::pow(x.c[mode_j - 1], power_m - 1);
    return g;
  };
  return c;
}

CylinderFunction CylinderFunction::constant(double value, std::size_t n_modes) {
  CylinderFunction c;
  c.id_ = "const";
  c.f_ = [value](const SpectralVector&) { return value; };
  c.grad_ = [n_modes](const SpectralVector&) { return SpectralVector(n_modes); };
  return c;
}

CylinderFunction CylinderFunction::custom(
    std::function<double(const SpectralVector&)> f,
    std::function<SpectralVector(const SpectralVector&)> grad, std::string id) {
  CylinderFunction c;
  c.f_ = std::move(f);
  c.grad_ = std::move(grad);
  c.id_ = id.empty() ? "custom" : std::move(id);
  return c;
}

double CylinderFunction::grad_coeff(const SpectralVector& x, std::size_t k) const {
  if (trig_) return -std::sin(dot(x, lambda_) + theta_) * lambda_.c[k - 1];
  return grad_(x).c[k - 1];
}

}  // namespace rd
