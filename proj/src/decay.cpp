#include "solitonlab/decay.hpp"

#include <algorithm>
#include <cmath>

#include "solitonlab/errors.hpp"

namespace soliton {

void TheoremParams::validate() const {
  if (!(a > 0.0) || !(a <= 1.0)) throw Error("TheoremParams: a must lie in (0, 1]");
  if (!(b >= a)) throw Error("TheoremParams: b must satisfy b >= a");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error("TheoremParams: c1, c2 must be positive");
}

double sigma_select(const TheoremParams& params) {
  params.validate();
  return 8.0 * params.a / params.b - 6.0;
}

MainExponents main_exponents(const TheoremParams& params) {
  params.validate();
  MainExponents e;
  e.e1 = 6.0 * params.a - 8.0 * params.a * params.a / params.b;
  e.e2 = 2.0 * params.b - 4.0 * params.a;
  e.effective = std::min(e.e1, e.e2);
  e.asymptotically_round = params.b < 2.0 * params.a;
  return e;
}

TermOrders term_orders(const TheoremParams& params, double sigma) {
  params.validate();
  TermOrders t;
  t.order_I = (2.0 + sigma) * params.b / 2.0 - 3.0 * params.a;
  t.order_II = (6.0 + sigma) * params.b / 2.0 - 4.0 * params.a;
  t.order_III = t.order_II;
  return t;
}

double ComparisonSolution::operator()(double tau) const {
  const double v0 = std::sqrt(u0);
  const double v = C + (v0 - C) * std::exp(-tau / 2.0);
  return v * v;
}

ComparisonSolution comparison_bound(double C, double u0) {
  if (C < 0.0 || u0 < 0.0) throw Error("comparison_bound: C and u0 must be nonnegative");
  ComparisonSolution s;
  s.C = C;
  s.u0 = u0;
  s.sup_bound = std::max(u0, C * C);
  return s;
}

std::vector<std::pair<double, double>> integrate_comparison_ode(double C, double u0,
                                                                double tau_end, double h) {
  if (C < 0.0 || u0 < 0.0) throw Error("integrate_comparison_ode: negative input");
  std::vector<std::pair<double, double>> out;
  const int n = static_cast<int>(std::ceil(tau_end / h));
  out.reserve(n + 1);
  if (u0 > 0.0) {
    // Direct integration of u' = -u + C sqrt(u); u stays positive.
    auto rhs = [&](double u) { return -u + C * std::sqrt(std::max(u, 0.0)); };
    double u = u0, tau = 0.0;
    out.emplace_back(tau, u);
    for (int k = 0; k < n; ++k) {
      const double step = std::min(h, tau_end - tau);
      const double k1 = rhs(u);
      const double k2 = rhs(u + step / 2 * k1);
      const double k3 = rhs(u + step / 2 * k2);
      const double k4 = rhs(u + step * k3);
      u += step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      tau += step;
      out.emplace_back(tau, u);
    }
  } else {
    // At u0 = 0 the sqrt is not Lipschitz and u == 0 is a second solution
    // branch; the substitution w = sqrt(u), w' = (C - w)/2 is well-posed and
    // integrates the same equation.
    auto rhs = [&](double w) { return (C - w) / 2.0; };
    double w = 0.0, tau = 0.0;
    out.emplace_back(tau, w * w);
    for (int k = 0; k < n; ++k) {
      const double step = std::min(h, tau_end - tau);
      const double k1 = rhs(w);
      const double k2 = rhs(w + step / 2 * k1);
      const double k3 = rhs(w + step / 2 * k2);
      const double k4 = rhs(w + step * k3);
      w += step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      tau += step;
      out.emplace_back(tau, w * w);
    }
  }
  return out;
}

DecayFit fit_power_law(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 8) throw Error("fit_power_law: at least 8 samples required");
  double prev_r = 0.0;
  for (const auto& [r, v] : samples) {
    if (!(r > prev_r)) throw Error("fit_power_law: radii must be strictly increasing");
    if (!(v > 0.0)) throw Error("fit_power_law: values must be positive");
    prev_r = r;
  }
  const int n = static_cast<int>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [r, v] : samples) {
    const double x = std::log(r), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  double ss_res = 0, ss_tot = 0, spread = 0;
  const double ybar = sy / n;
  for (const auto& [r, v] : samples) {
    const double x = std::log(r), y = std::log(v);
    const double resid = y - (intercept + slope * x);
    ss_res += resid * resid;
    ss_tot += (y - ybar) * (y - ybar);
    spread = std::max(spread, std::abs(resid));
  }

  DecayFit fit;
  fit.r_min = samples.front().first;
  fit.r_max = samples.back().first;
  fit.n = n;
  fit.exponent = slope;
  fit.constant = std::exp(intercept);
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.residual_spread = spread;

  // Local slope drift across the range distinguishes genuine power laws from
  // super-polynomial decay.
  double smin = 0.0, smax = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double s = (std::log(samples[k + 1].second) - std::log(samples[k].second)) /
                     (std::log(samples[k + 1].first) - std::log(samples[k].first));
    if (k == 0) {
      smin = smax = s;
    } else {
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
  }
  const bool drifting = (smax - smin) > 0.25;
  fit.verdict = (drifting || fit.r2 < 0.95) ? "not-power-law" : "power-law";
  return fit;
}

std::string decay_quantity_name(DecayQuantity q) {
  switch (q) {
    case DecayQuantity::R: return "R";
    case DecayQuantity::L22Mag: return "L22_mag";
    case DecayQuantity::GradLambdaNorm: return "grad_lambda_norm";
    case DecayQuantity::HessLambdaNorm: return "hess_lambda_norm";
    case DecayQuantity::USigma: return "U_sigma";
    case DecayQuantity::H: return "H";
    case DecayQuantity::GradNormSq: return "grad_norm_sq";
  }
  return "?";
}

DecayQuantity parse_decay_quantity(const std::string& name) {
  for (DecayQuantity q : {DecayQuantity::R, DecayQuantity::L22Mag, DecayQuantity::GradLambdaNorm,
                          DecayQuantity::HessLambdaNorm, DecayQuantity::USigma, DecayQuantity::H,
                          DecayQuantity::GradNormSq})
    if (decay_quantity_name(q) == name) return q;
  throw Error("unknown decay quantity: " + name +
              " (valid: R, L22_mag, grad_lambda_norm, hess_lambda_norm, U_sigma, H, grad_norm_sq)");
}

namespace {

double eval_decay_quantity(const SolitonModel& model, const ChartPoint& p, DecayQuantity q,
                           double sigma, const FrameOptions& opts) {
  switch (q) {
    case DecayQuantity::R:
      return eval_field(model, p, GeometricField::of(GeometricField::Kind::R), opts);
    case DecayQuantity::L22Mag:
      return std::abs(L_tensor(model, p, opts).l22_definition);
    case DecayQuantity::GradLambdaNorm: {
      const AmbientFieldDerivs d = ambient_field_derivs(
          model, p, GeometricField::of(GeometricField::Kind::Lambda), 1e-3, false, opts);
      double s = 0.0;
      for (int i = 0; i < p.dim; ++i) s += d.dQ[i] * d.gradQ[i];
      return std::sqrt(std::max(s, 0.0));
    }
    case DecayQuantity::HessLambdaNorm: {
      const AmbientFieldDerivs d = ambient_field_derivs(
          model, p, GeometricField::of(GeometricField::Kind::Lambda), 1e-3, true, opts);
      const CurvatureTaylor curv(model.metric_jet(p, 0));
      const Mat3 gi = curv.ginv_value();
      double s = 0.0;
      for (int i = 0; i < p.dim; ++i)
        for (int j = 0; j < p.dim; ++j)
          for (int k = 0; k < p.dim; ++k)
            for (int l = 0; l < p.dim; ++l)
              s += gi[i][k] * gi[j][l] * d.hess[i][j] * d.hess[k][l];
      return std::sqrt(std::max(s, 0.0));
    }
    case DecayQuantity::USigma:
      return umbilical_ratio(model, p, sigma, opts);
    case DecayQuantity::H:
      return frame_at(model, p, opts).H;
    case DecayQuantity::GradNormSq:
      return eval_field(model, p, GeometricField::of(GeometricField::Kind::GradNormSq), opts);
  }
  throw Error("eval_decay_quantity: unknown quantity");
}

}  // namespace

DecayFit measure_decay(const SolitonModel& model, DecayQuantity quantity, double sigma,
                       double r_min, double r_max, int n_samples, const FrameOptions& opts) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw Error("measure_decay: need 0 < r_min < r_max");
  if (n_samples < 8) throw Error("measure_decay: at least 8 samples required");
  const double ratio = std::pow(r_max / r_min, 1.0 / (n_samples - 1));
  std::vector<std::pair<double, double>> samples;
  samples.reserve(n_samples);
  std::string failure;
  for (int k = 0; k < n_samples; ++k) {
    const double r = r_min * std::pow(ratio, k);
    const ChartPoint p = model.radial_point(r);
    try {
      const double v = eval_decay_quantity(model, p, quantity, sigma, opts);
      if (v > 0.0) samples.emplace_back(r, v);
    } catch (const UmbilicalDegenerateError&) {
      failure = "umbilical";
    } catch (const MeanCurvatureDegenerateError&) {
      failure = "mean-curvature-degenerate";
    }
  }
  DecayFit fit;
  if (samples.size() < 8 || samples.size() < static_cast<std::size_t>(n_samples) / 2) {
    fit.quantity = decay_quantity_name(quantity);
    fit.model = model.name();
    fit.r_min = r_min;
    fit.r_max = r_max;
    fit.n = static_cast<int>(samples.size());
    fit.verdict = "degenerate-quantity" + (failure.empty() ? "" : " (" + failure + ")");
    return fit;
  }
  fit = fit_power_law(samples);
  fit.quantity = decay_quantity_name(quantity);
  fit.model = model.name();
  return fit;
}

std::optional<double> predicted_exponent(DecayQuantity q, const TheoremParams& params,
                                         double sigma) {
  params.validate();
  switch (q) {
    case DecayQuantity::R:
      return -params.a;
    case DecayQuantity::H:
      return -params.a;
    case DecayQuantity::GradNormSq:
      return 0.0;
    case DecayQuantity::L22Mag:
      return -3.0 * params.a;
    case DecayQuantity::GradLambdaNorm:
      return 2.0 * params.b - 1.5 * params.a;
    case DecayQuantity::HessLambdaNorm:
      return 3.0 * params.b - 3.0 * params.a;
    case DecayQuantity::USigma: {
      if (sigma == 0.0) {
        const MainExponents e = main_exponents(params);
        return e.effective;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace soliton
