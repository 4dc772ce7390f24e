#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solitonlab/bryant.hpp"
#include "solitonlab/decay.hpp"
#include "solitonlab/errors.hpp"

using namespace soliton;
using Catch::Approx;

namespace {

ModelPtr bryant_fixture() {
  static ModelPtr m =
      bryant_model(std::make_shared<BryantProfile>(bryant_integrate(1.1e4, 1e-12)));
  return m;
}

}  // namespace

TEST_CASE("exact power law is fitted exactly") {
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < 12; ++k) {
    const double r = std::pow(10.0, 1.0 + 0.2 * k);
    samples.emplace_back(r, 5.0 / r);
  }
  const DecayFit fit = fit_power_law(samples);
  CHECK(fit.exponent == Approx(-1.0).margin(1e-12));
  CHECK(fit.constant == Approx(5.0).epsilon(1e-12));
  CHECK(fit.r2 == Approx(1.0).margin(1e-12));
  CHECK(fit.verdict == "power-law");
}

TEST_CASE("perturbed power law stays within the stated window") {
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < 32; ++k) {
    const double r = 100.0 * std::pow(100.0, k / 31.0);
    samples.emplace_back(r, (1.0 / r) * (1.0 + 0.01 * std::sin(r)));
  }
  const DecayFit fit = fit_power_law(samples);
  CHECK(std::abs(fit.exponent + 1.0) < 0.02);
}

TEST_CASE("fit preconditions") {
  std::vector<std::pair<double, double>> two = {{1.0, 1.0}, {2.0, 0.5}};
  CHECK_THROWS_AS(fit_power_law(two), Error);
  std::vector<std::pair<double, double>> bad;
  for (int k = 0; k < 10; ++k) bad.emplace_back(k + 1.0, k == 5 ? -1.0 : 1.0);
  CHECK_THROWS_AS(fit_power_law(bad), Error);
}

TEST_CASE("scale equivariance of the fit") {
  std::vector<std::pair<double, double>> samples, scaled;
  for (int k = 0; k < 16; ++k) {
    const double r = std::pow(4.0, 1.0 + k * 0.25);
    const double v = 3.0 * std::pow(r, -1.37);
    samples.emplace_back(r, v);
    scaled.emplace_back(r, 7.5 * v);
  }
  const DecayFit a = fit_power_law(samples);
  const DecayFit b = fit_power_law(scaled);
  CHECK(b.exponent == Approx(a.exponent).margin(1e-12));
  CHECK(b.constant == Approx(7.5 * a.constant).epsilon(1e-12));
}

TEST_CASE("sigma selection and the main exponents") {
  CHECK(sigma_select({1.0, 1.0}) == Approx(2.0));
  CHECK(sigma_select({1.0, 2.0}) == Approx(-2.0));
  for (double a : {0.25, 0.5, 1.0}) CHECK(sigma_select({a, a}) == Approx(2.0));

  const MainExponents e11 = main_exponents({1.0, 1.0});
  CHECK(e11.e1 == Approx(-2.0));
  CHECK(e11.e2 == Approx(-2.0));
  CHECK(e11.effective == Approx(-2.0));
  CHECK(e11.asymptotically_round);

  const MainExponents e115 = main_exponents({1.0, 1.5});
  CHECK(e115.e1 == Approx(2.0 / 3.0));
  CHECK(e115.e2 == Approx(-1.0));
  CHECK(e115.effective == Approx(-1.0));
  CHECK(e115.asymptotically_round);

  const MainExponents border = main_exponents({0.7, 1.4});
  CHECK(border.e2 == Approx(0.0).margin(1e-15));
  CHECK_FALSE(border.asymptotically_round);

  CHECK_THROWS_AS(main_exponents({1.5, 2.0}), Error);  // a > 1
  CHECK_THROWS_AS(main_exponents({1.0, 0.5}), Error);  // b < a
}

TEST_CASE("term orders and the internal exponent identity on a grid") {
  const TermOrders t = term_orders({1.0, 1.0}, 2.0);
  CHECK(t.order_I == Approx(-1.0));
  CHECK(t.order_II == Approx(0.0).margin(1e-15));
  CHECK(t.order_III == Approx(0.0).margin(1e-15));
  const TermOrders t2 = term_orders({1.0, 2.0}, -2.0);
  CHECK(t2.order_I == Approx(-3.0));
  CHECK(t2.order_III == Approx(0.0).margin(1e-15));

  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double a = 0.1 + 0.09 * i;
      const double b = a + 0.3 * j;
      const TheoremParams params{a, b};
      const double sigma = sigma_select(params);
      CHECK(std::abs(term_orders(params, sigma).order_III) < 1e-12);
      const MainExponents e = main_exponents(params);
      CHECK(std::abs(e.e1 + a * sigma) < 1e-12);
      CHECK(t.order_I <= t.order_III + 1e-12);
    }
}

TEST_CASE("comparison ODE: closed form against RK4") {
  for (double C : {0.0, 1.0, 2.0}) {
    for (double u0 : {0.0, 1.0, 9.0}) {
      const ComparisonSolution sol = comparison_bound(C, u0);
      const auto traj = integrate_comparison_ode(C, u0, 50.0, 1e-3);
      double max_err = 0.0;
      for (const auto& [tau, u] : traj) {
        max_err = std::max(max_err, std::abs(u - sol(tau)));
        CHECK(u <= sol.sup_bound + 1e-12);
      }
      CHECK(max_err < 1e-8);
    }
  }
  CHECK_THROWS_AS(comparison_bound(-1.0, 0.0), Error);
}

TEST_CASE("comparison ODE closed-form examples") {
  const ComparisonSolution s = comparison_bound(2.0, 9.0);
  CHECK(s(0.0) == Approx(9.0));
  CHECK(s(1.0) == Approx(std::pow(2.0 + std::exp(-0.5), 2)));
  CHECK(s(200.0) == Approx(4.0).epsilon(1e-12));
  CHECK(s.sup_bound == 9.0);

  const ComparisonSolution pure = comparison_bound(0.0, 1.0);
  CHECK(pure(3.0) == Approx(std::exp(-3.0)));

  const ComparisonSolution eq = comparison_bound(3.0, 9.0);
  CHECK(eq(17.0) == Approx(9.0));  // equilibrium u = C^2

  // Monotone approach to the equilibrium from either side.
  const ComparisonSolution up = comparison_bound(2.0, 1.0);
  double prev = up(0.0);
  for (double tau = 0.5; tau < 20.0; tau += 0.5) {
    CHECK(up(tau) >= prev - 1e-12);
    prev = up(tau);
  }
}

TEST_CASE("bryant decay fits") {
  const ModelPtr b = bryant_fixture();
  const DecayFit fit = measure_decay(*b, DecayQuantity::R, 0.0, 1e2, 1e4, 32);
  CHECK(fit.verdict == "power-law");
  CHECK(fit.exponent == Approx(-1.0).margin(0.05));

  const DecayFit gn = measure_decay(*b, DecayQuantity::GradNormSq, 0.0, 1e2, 1e4, 32);
  CHECK(std::abs(gn.exponent) < 0.02);

  // U_sigma degenerates on the umbilical model.
  const DecayFit u = measure_decay(*b, DecayQuantity::USigma, 0.0, 1e2, 1e3, 16);
  CHECK(u.verdict.find("degenerate-quantity") == 0);
}

TEST_CASE("cigar cross line scalar curvature is not a power law in distance") {
  const ModelPtr m = cigar_cross_line_model();
  const DecayFit fit = measure_decay(*m, DecayQuantity::R, 0.0, 2.0, 8.0, 16);
  CHECK(fit.verdict == "not-power-law");
}

TEST_CASE("decay quantity names round-trip") {
  for (DecayQuantity q : {DecayQuantity::R, DecayQuantity::L22Mag, DecayQuantity::GradLambdaNorm,
                          DecayQuantity::HessLambdaNorm, DecayQuantity::USigma, DecayQuantity::H,
                          DecayQuantity::GradNormSq})
    CHECK(parse_decay_quantity(decay_quantity_name(q)) == q);
  CHECK_THROWS_AS(parse_decay_quantity("bogus"), Error);
}

TEST_CASE("predicted exponents") {
  const TheoremParams p{1.0, 1.0};
  CHECK(*predicted_exponent(DecayQuantity::R, p, 0.0) == Approx(-1.0));
  CHECK(*predicted_exponent(DecayQuantity::GradNormSq, p, 0.0) == 0.0);
  CHECK(*predicted_exponent(DecayQuantity::L22Mag, p, 0.0) == Approx(-3.0));
}
