#pragma once

#include <functional>
#include <string>

#include "rd/spectral.hpp"

namespace rd {

// C^1 test function on H with an exact gradient. The trig kind
// phi(x) = cos(<x,lambda> + theta) is bounded with bounded gradient, so it
// is admissible for every certification; sin is cos with theta - pi/2.
class CylinderFunction {
 public:
  static CylinderFunction trig(SpectralVector lambda, double theta,
                               std::string id = "");
  // phi(x) = x_j^m
  static CylinderFunction coordinate(std::size_t mode_j, int power_m,
                                     std::size_t n_modes, std::string id = "");
  static CylinderFunction constant(double value, std::size_t n_modes);
  static CylinderFunction custom(std::function<double(const SpectralVector&)> f,
                                 std::function<SpectralVector(const SpectralVector&)> grad,
                                 std::string id = "");

  double operator()(const SpectralVector& x) const { return f_(x); }
  SpectralVector grad(const SpectralVector& x) const { return grad_(x); }
  // <grad phi(x), e_k>
  double grad_coeff(const SpectralVector& x, std::size_t k) const;

  const std::string& id() const { return id_; }
  bool is_trig() const { return trig_; }
  const SpectralVector& lambda() const { return lambda_; }
  double theta() const { return theta_; }

 private:
  CylinderFunction() = default;
  std::function<double(const SpectralVector&)> f_;
  std::function<SpectralVector(const SpectralVector&)> grad_;
  std::string id_;
  bool trig_ = false;
  SpectralVector lambda_;
  double theta_ = 0.0;
};

// Finite cylinder vector field F = sum_h f_h e_h with f_h in C^1_b.
struct CylinderField {
  struct Component {
    std::size_t mode_h;  // 1-based
    CylinderFunction f;
  };
  std::vector<Component> components;
};

}  // namespace rd
