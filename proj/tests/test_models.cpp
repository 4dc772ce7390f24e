#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solitonlab/curvature.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/identities.hpp"
#include "solitonlab/level_set.hpp"
#include "solitonlab/models.hpp"
#include "solitonlab/sampling.hpp"

using namespace soliton;
using Catch::Approx;

TEST_CASE("cigar satisfies the soliton equation at seeded points") {
  const ModelPtr cigar = cigar_model();
  const auto points = sample_points(*cigar, 50, 2024);
  for (const auto& p : points) {
    const ResidualReport r = verify_soliton_equation(*cigar, p);
    CHECK(r.abs_residual < 1e-10);
    CHECK(r.rel_residual < 1e-9);
  }
}

TEST_CASE("cigar closed-form values") {
  const ModelPtr cigar = cigar_model();
  const ChartPoint origin(0.0, 0.0);
  const ChartPoint at1(1.0, 0.0);
  CHECK(scalar_curvature(origin, cigar->metric_jet(origin, 2)) == Approx(4.0));
  CHECK(scalar_curvature(at1, cigar->metric_jet(at1, 2)) == Approx(2.0));
  CHECK(cigar->hamilton_constant() == 4.0);
  CHECK(cigar->soliton_constant() == 0.0);
  // C0 = R + |grad f|^2 = 4 at every sampled point.
  for (const auto& p : sample_points(*cigar, 20, 7)) {
    const double R = scalar_curvature(p, cigar->metric_jet(p, 2));
    const double gn2 = gradient_norm_sq(p, cigar->metric_jet(p, 1), cigar->potential_jet(p, 1));
    CHECK(R + gn2 == Approx(4.0).epsilon(1e-12));
  }
  // f(origin) = 0.
  CHECK(cigar->potential_jet(origin, 0).value() == 0.0);
}

TEST_CASE("steady models have nonnegative scalar curvature at samples") {
  for (const ModelPtr& m : {cigar_model(), cigar_cross_line_model(), euclidean_model(3)}) {
    for (const auto& p : sample_points(*m, 40, 99)) {
      CHECK(scalar_curvature(p, m->metric_jet(p, 2)) >= -1e-12);
    }
  }
}

TEST_CASE("cigar cross line closed-form values") {
  const ModelPtr m = cigar_cross_line_model();
  REQUIRE(m->dimension() == 3);
  const ChartPoint p(1.0, 0.0, 0.7);

  // Line direction is Ricci-flat.
  const TensorValue ric = ricci(p, m->metric_jet(p, 2));
  CHECK(ric.at({2, 2}) == Approx(0.0).margin(1e-14));
  CHECK(ric.at({0, 2}) == Approx(0.0).margin(1e-14));

  // At rho = 1: R = 2, |grad f|^2 = 2, R_nunu = 1.
  CHECK(scalar_curvature(p, m->metric_jet(p, 2)) == Approx(2.0));
  CHECK(gradient_norm_sq(p, m->metric_jet(p, 1), m->potential_jet(p, 1)) == Approx(2.0));
  const LevelSetFrame fr = frame_at(*m, p);
  CHECK(fr.R_nunu == Approx(1.0));

  // Soliton equation at 50 seeded off-axis points.
  for (const auto& q : sample_points(*m, 50, 11)) {
    CHECK(verify_soliton_equation(*m, q).abs_residual < 1e-10);
  }
}

TEST_CASE("cigar cross line jets restrict bit-exactly to the cigar factor") {
  const ModelPtr c2 = cigar_model();
  const ModelPtr c3 = cigar_cross_line_model();
  const double x = 0.83, y = -1.21;
  for (int order : {0, 1, 2, 3, 4}) {
    const MetricJet j2 = c2->metric_jet(ChartPoint(x, y), order);
    const MetricJet j3 = c3->metric_jet(ChartPoint(x, y, 5.0), order);
    const ScalarJet f2 = c2->potential_jet(ChartPoint(x, y), order);
    const ScalarJet f3 = c3->potential_jet(ChartPoint(x, y, 5.0), order);
    for (int a0 = 0; a0 <= order; ++a0)
      for (int a1 = 0; a0 + a1 <= order; ++a1) {
        for (int i = 0; i < 2; ++i)
          for (int j = i; j < 2; ++j) {
            CHECK(j3.component(i, j).coeff(a0, a1, 0) == j2.component(i, j).coeff(a0, a1, 0));
          }
        CHECK(f3.taylor().coeff(a0, a1, 0) == f2.taylor().coeff(a0, a1, 0));
      }
  }
}

TEST_CASE("euclidean model is flat with constant potential") {
  const ModelPtr e = euclidean_model(3);
  const ChartPoint p(0.1, 0.2, 0.3);
  const TensorValue ric = ricci(p, e->metric_jet(p, 2));
  for (double v : ric.data) CHECK(v == 0.0);
  CHECK(e->hamilton_constant() == 0.0);
  const double gn2 = gradient_norm_sq(p, e->metric_jet(p, 1), e->potential_jet(p, 1));
  CHECK(scalar_curvature(p, e->metric_jet(p, 2)) + gn2 == 0.0);
  CHECK_THROWS_AS(frame_at(*e, p), GradientCriticalError);
  CHECK(euclidean_model(2)->dimension() == 2);
}

TEST_CASE("radial distances") {
  const ModelPtr cigar = cigar_model();
  CHECK(radial_distance(*cigar, ChartPoint(0.0, 0.0)) == 0.0);
  const double rho = 2.4;
  CHECK(radial_distance(*cigar, ChartPoint(rho, 0.0)) == Approx(std::asinh(rho)).epsilon(1e-12));
  // Quadrature against the closed form: integral of dt/sqrt(1+t^2).
  const int n = 40000;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * rho / n;
    acc += rho / n / std::sqrt(1.0 + t * t);
  }
  CHECK(radial_distance(*cigar, ChartPoint(rho, 0.0)) == Approx(acc).epsilon(1e-8));

  const ModelPtr cxl = cigar_cross_line_model();
  CHECK(radial_distance(*cxl, ChartPoint(rho, 0.0, 9.0)) == Approx(std::asinh(rho)));

  // radial_point inverts radial_distance on the reference ray.
  const double r = 1.7;
  CHECK(radial_distance(*cigar, cigar->radial_point(r)) == Approx(r).epsilon(1e-12));
}

TEST_CASE("jet self-consistency: analytic dg matches central differences of g") {
  const ModelPtr models[] = {cigar_model(), cigar_cross_line_model()};
  for (const ModelPtr& m : models) {
    const ChartPoint p = m->dimension() == 2 ? ChartPoint(0.9, -0.4) : ChartPoint(0.9, -0.4, 1.2);
    const MetricJet jet = m->metric_jet(p, 1);
    const double h = 1e-6;
    for (int k = 0; k < m->dimension(); ++k) {
      ChartPoint pp = p, pm = p;
      pp.x[k] += h;
      pm.x[k] -= h;
      const MetricJet jp = m->metric_jet(pp, 0);
      const MetricJet jm = m->metric_jet(pm, 0);
      for (int i = 0; i < m->dimension(); ++i)
        for (int j = i; j < m->dimension(); ++j) {
          const double fd = (jp.g(i, j) - jm.g(i, j)) / (2.0 * h);
          const double an = jet.dg(k, i, j);
          CHECK(std::abs(fd - an) <= 1e-7 * std::max(1.0, std::abs(an)));
        }
    }
  }
}

TEST_CASE("quadratic potential fixture is not a soliton but has round level sets") {
  const ModelPtr q = quadratic_potential_model();
  CHECK_FALSE(q->is_soliton());
  CHECK(std::isnan(q->hamilton_constant()));
  const ChartPoint p(1.0, 0.0, 0.0);
  const LevelSetFrame fr = frame_at(*q, p);
  CHECK(fr.H == Approx(2.0));  // unit sphere, trace convention
  CHECK(fr.kappa1 == Approx(1.0));
  CHECK(fr.kappa2 == Approx(1.0));
  CHECK(fr.grad_norm == Approx(1.0));
}
