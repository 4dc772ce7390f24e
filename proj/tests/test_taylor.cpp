#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solitonlab/errors.hpp"
#include "solitonlab/taylor.hpp"

using namespace soliton;
using Catch::Approx;

TEST_CASE("variables and products carry exact mixed partials") {
  Taylor x = Taylor::variable(2, 4, 0, 2.0);
  Taylor y = Taylor::variable(2, 4, 1, 3.0);
  Taylor f = x * x * y;  // x^2 y
  CHECK(f.value() == Approx(12.0));
  CHECK(f.partial(1, 0) == Approx(12.0));   // 2xy
  CHECK(f.partial(0, 1) == Approx(4.0));    // x^2
  CHECK(f.partial(1, 1) == Approx(4.0));    // 2x
  CHECK(f.partial(2, 0) == Approx(6.0));    // 2y
  CHECK(f.partial(2, 1) == Approx(2.0));
  CHECK(f.partial(3, 0) == 0.0);
}

TEST_CASE("reciprocal reproduces the geometric series") {
  Taylor x = Taylor::variable(1, 6, 0, 0.0);
  Taylor r = reciprocal(x + 1.0);
  for (int k = 0; k <= 6; ++k) CHECK(r.coeff(k) == Approx(k % 2 == 0 ? 1.0 : -1.0));
}

TEST_CASE("log and exp match their series") {
  Taylor x = Taylor::variable(1, 5, 0, 0.0);
  Taylor l = log(x + 1.0);
  CHECK(l.coeff(0) == 0.0);
  for (int k = 1; k <= 5; ++k)
    CHECK(l.coeff(k) == Approx((k % 2 ? 1.0 : -1.0) / k));

  Taylor e = exp(x);
  double fact = 1.0;
  for (int k = 1; k <= 5; ++k) {
    fact *= k;
    CHECK(e.coeff(k) == Approx(1.0 / fact));
  }
}

TEST_CASE("sqrt of a perfect square recovers the factor") {
  Taylor x = Taylor::variable(1, 5, 0, 0.4);
  Taylor s = sqrt((x + 1.0) * (x + 1.0));
  CHECK(s.value() == Approx(1.4));
  CHECK(s.coeff(1) == Approx(1.0));
  for (int k = 2; k <= 5; ++k) CHECK(s.coeff(k) == Approx(0.0).margin(1e-14));
}

TEST_CASE("division composes with multiplication") {
  Taylor x = Taylor::variable(2, 4, 0, 0.3);
  Taylor y = Taylor::variable(2, 4, 1, -0.2);
  Taylor q = 1.0 + x * x + y * y;
  Taylor f = (x * y) / q;
  Taylor back = f * q;
  CHECK(back.partial(1, 1) == Approx(1.0));
  CHECK(back.partial(2, 0) == Approx(0.0).margin(1e-14));
  CHECK(back.value() == Approx(0.3 * -0.2));
}

TEST_CASE("derivative of a truncated series loses one order") {
  Taylor x = Taylor::variable(1, 3, 0, 0.0);
  Taylor r = reciprocal(x + 1.0);  // valid to degree 3
  Taylor d = r.derivative(0);      // valid to degree 2
  CHECK(d.coeff(2) == Approx(-3.0));  // d/dx (1+x)^-1 = -1 + 2x - 3x^2 + ...
  CHECK_THROWS_AS(d.coeff(3), InsufficientJetOrderError);
}

TEST_CASE("derivative of an exact polynomial keeps full validity") {
  Taylor x = Taylor::variable(1, 3, 0, 1.0);
  Taylor p = x * x * x;
  Taylor d3 = p.derivative(0).derivative(0).derivative(0);
  CHECK(d3.value() == Approx(6.0));
}

TEST_CASE("univariate builder places derivatives on one variable") {
  // sin about theta0
  const double t0 = 0.7;
  std::vector<double> derivs = {std::sin(t0), std::cos(t0), -std::sin(t0), -std::cos(t0),
                                std::sin(t0)};
  Taylor s = Taylor::univariate(3, 4, 1, derivs);
  CHECK(s.value() == Approx(std::sin(t0)));
  CHECK(s.partial(0, 1, 0) == Approx(std::cos(t0)));
  CHECK(s.partial(0, 2, 0) == Approx(-std::sin(t0)));
  CHECK(s.partial(1, 0, 0) == 0.0);
  CHECK(s.partial(0, 0, 1) == 0.0);
}

TEST_CASE("operations are deterministic") {
  auto build = [] {
    Taylor x = Taylor::variable(3, 4, 0, 0.123);
    Taylor y = Taylor::variable(3, 4, 1, -0.456);
    Taylor z = Taylor::variable(3, 4, 2, 0.789);
    return log(reciprocal(x * x + y * y + z * z + 1.0)) * sqrt(x + 2.0);
  };
  Taylor a = build();
  Taylor b = build();
  for (int i = 0; i < a.layout().size(); ++i) CHECK(a.coeff_at(i) == b.coeff_at(i));
}
