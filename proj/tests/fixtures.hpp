#ifndef SOLITONLAB_TESTS_FIXTURES_HPP
#define SOLITONLAB_TESTS_FIXTURES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "solitonlab/geometry_types.hpp"

namespace soliton::testing {

inline Taylor sin_taylor(int nvars, int order, int var, double theta) {
  std::vector<double> derivs(order + 1);
  for (int k = 0; k <= order; ++k) {
    switch (k % 4) {
      case 0: derivs[k] = std::sin(theta); break;
      case 1: derivs[k] = std::cos(theta); break;
      case 2: derivs[k] = -std::sin(theta); break;
      default: derivs[k] = -std::cos(theta); break;
    }
  }
  return Taylor::univariate(nvars, order, var, derivs);
}

// Round 2-sphere of radius rho in the polar chart (theta, phi):
// g = diag(rho^2, rho^2 sin^2 theta).
inline MetricJet sphere_jet(double rho, double theta, int order) {
  Taylor st = sin_taylor(2, order, 0, theta);
  Taylor zero = Taylor::constant(2, order, 0.0);
  Taylor g00 = Taylor::constant(2, order, rho * rho);
  Taylor g11 = st * st * (rho * rho);
  return MetricJet(2, order, {g00, zero, g11});
}

// Conformally flat 2-metric e^{2u} delta from a Taylor expansion of u.
inline MetricJet conformal_jet(const Taylor& u, int order) {
  Taylor w = exp(u * 2.0);
  Taylor zero = Taylor::constant(2, order, 0.0);
  return MetricJet(2, order, {w, zero, w});
}

// Warped-product metric dr^2 + phi(r)^2 (dtheta^2 + sin^2 theta dphi^2) from
// the derivatives of an arbitrary profile phi at r.
inline MetricJet warped_product_jet(const std::vector<double>& phi_derivs, double theta,
                                    int order) {
  Taylor phi = Taylor::univariate(3, order, 0, phi_derivs);
  Taylor st = sin_taylor(3, order, 1, theta);
  Taylor zero = Taylor::constant(3, order, 0.0);
  Taylor one = Taylor::constant(3, order, 1.0);
  Taylor phi2 = phi * phi;
  return MetricJet(3, order, {one, zero, zero, phi2, zero, phi2 * (st * st)});
}

inline ScalarJet radial_scalar_jet(const std::vector<double>& f_derivs, int order) {
  return ScalarJet(3, order, Taylor::univariate(3, order, 0, f_derivs));
}

}  // namespace soliton::testing

#endif
