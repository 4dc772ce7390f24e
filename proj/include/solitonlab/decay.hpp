#ifndef SOLITONLAB_DECAY_HPP
#define SOLITONLAB_DECAY_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solitonlab/level_set.hpp"
#include "solitonlab/models.hpp"

namespace soliton {

// Decay-bound parameters: c1 r^-b <= R <= c2 r^-a with 0 < a <= 1, b >= a.
struct TheoremParams {
  double a = 1.0;
  double b = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  void validate() const;
};

// sigma = 8 a / b - 6.
double sigma_select(const TheoremParams& params);

struct MainExponents {
  double e1;        // 6 a - 8 a^2 / b
  double e2;        // 2 b - 4 a
  double effective; // min(e1, e2)
  bool asymptotically_round;  // b < 2 a
};
MainExponents main_exponents(const TheoremParams& params);

struct TermOrders {
  double order_I;    // (2 + sigma) b / 2 - 3 a
  double order_II;   // (6 + sigma) b / 2 - 4 a
  double order_III;  // same power as II; zero at the selected sigma
};
TermOrders term_orders(const TheoremParams& params, double sigma);

// Closed-form solution of u' = -u + C sqrt(u) via v = sqrt(u):
// v(tau)= C + (sqrt(u0) - C) e^{-tau/2}; sup bound max(u0, C^2).
struct ComparisonSolution {
  double C = 0.0;
  double u0 = 0.0;
  double sup_bound = 0.0;
  double operator()(double tau) const;
};
ComparisonSolution comparison_bound(double C, double u0);

// Independent fixed-step RK4 integration of the comparison equation,
// returning (tau, u) samples.  For u0 = 0 the right-hand side is integrated
// in the square-root variable, where the degenerate initial value is
// well-posed; for u0 > 0 the equation is integrated directly in u.
std::vector<std::pair<double, double>> integrate_comparison_ode(double C, double u0,
                                                                double tau_end, double h);

struct DecayFit {
  std::string quantity;
  std::string model;
  double r_min = 0.0, r_max = 0.0;
  int n = 0;
  double exponent = 0.0;
  double constant = 0.0;
  double r2 = 0.0;              // coefficient of determination in log-log
  double residual_spread = 0.0; // max |log residual|
  std::string verdict;          // "power-law" | "not-power-law" | "degenerate-quantity"
};

// Least squares of log(value) against log(r).  Requires >= 8 samples with
// positive values and strictly increasing r.
DecayFit fit_power_law(std::span<const std::pair<double, double>> samples);

enum class DecayQuantity { R, L22Mag, GradLambdaNorm, HessLambdaNorm, USigma, H, GradNormSq };

std::string decay_quantity_name(DecayQuantity q);
// Parses the CLI spelling (R, L22_mag, grad_lambda_norm, hess_lambda_norm,
// U_sigma, H, grad_norm_sq); throws on unknown names.
DecayQuantity parse_decay_quantity(const std::string& name);

// Samples a quantity along the model's reference radial ray at geometrically
// spaced radii in [r_min, r_max] and fits a power law.  Quantities that are
// undefined along the ray (U_sigma or L22 on an umbilical model) yield a
// "degenerate-quantity" verdict instead of a fit.
DecayFit measure_decay(const SolitonModel& model, DecayQuantity quantity, double sigma,
                       double r_min, double r_max, int n_samples,
                       const FrameOptions& opts = {});

// Upper-bound exponent for a quantity under the decay hypothesis, when the
// analysis provides one.
std::optional<double> predicted_exponent(DecayQuantity q, const TheoremParams& params,
                                         double sigma);

}  // namespace soliton

#endif
