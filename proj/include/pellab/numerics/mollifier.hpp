#pragma once

#include <array>
#include <functional>

#include "pellab/common.hpp"

namespace pellab::numerics {

// Smooth radial bump on R^4: phi(z) = c * exp(-1/(1-|z|^2)) inside the unit
// ball, 0 outside; c makes the integral 1. phi_kappa(y) = kappa^-4 phi(y/kappa).
class Mollifier {
  public:
    explicit Mollifier(double kappa);

    double kappa() const { return kappa_; }
    double normalization() const;

    double value(const std::array<double, 4>& y) const;

  private:
    double kappa_;
};

double mollifier_value(const std::array<double, 4>& y, double kappa);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor-product quadrature of  integral f(x - y) phi_kappa(y) dy  over
// [-kappa, kappa]^4. Deterministic for fixed nodes_per_axis.
double convolve4(const std::function<double(const std::array<double, 4>&)>& f,
                 const std::array<double, 4>& x, double kappa, int nodes_per_axis);

}  // namespace pellab::numerics
