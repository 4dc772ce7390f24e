#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "solitonlab/bryant.hpp"
#include "solitonlab/curvature.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/identities.hpp"
#include "solitonlab/level_set.hpp"

using namespace soliton;
using Catch::Approx;

namespace {

std::shared_ptr<const BryantProfile> shared_profile(double rmax = 1.5e2, double tol = 1e-12) {
  static std::map<std::pair<double, double>, std::shared_ptr<const BryantProfile>> cache;
  auto& slot = cache[{rmax, tol}];
  if (!slot) slot = std::make_shared<BryantProfile>(bryant_integrate(rmax, tol));
  return slot;
}

}  // namespace

TEST_CASE("reduced warped-product system reproduces Ric + Hess f on an arbitrary profile") {
  // Generic (non-soliton) phi and f: the rr and theta-theta components of
  // Ric + Hess f computed by the curvature pipeline must match the reduced
  // expressions the integrator uses.
  const double r = 1.3, theta = 1.0;
  const double phi0 = 0.9, phi1 = 0.6, phi2 = -0.3, phi3 = 0.2, phi4 = 0.11;
  const double f1 = -0.7, f2 = 0.25, f3 = -0.05, f4 = 0.4;
  const std::vector<double> phi_derivs = {phi0, phi1, phi2, phi3, phi4};
  const std::vector<double> f_derivs = {0.3, f1, f2, f3, f4};
  const MetricJet jet = testing::warped_product_jet(phi_derivs, theta, 2);
  const ScalarJet fj = testing::radial_scalar_jet(f_derivs, 2);
  const ChartPoint p(r, theta, 0.4);

  CurvatureTaylor curv(jet);
  const PotentialValues pot = potential_values(curv, fj);
  const Mat3 ric = curv.ric_value();

  // Radial component: Ric_rr + Hess f_rr = -2 phi''/phi + f''.
  const double reduced_rr = -2.0 * phi2 / phi0 + f2;
  CHECK(ric[0][0] + pot.hess[0][0] == Approx(reduced_rr).epsilon(1e-10));

  // Spherical component (divided by g_thth = phi^2):
  // -phi''/phi + (1 - phi'^2)/phi^2 + f' phi'/phi.
  const double reduced_sph =
      -phi2 / phi0 + (1.0 - phi1 * phi1) / (phi0 * phi0) + f1 * phi1 / phi0;
  const double g_thth = phi0 * phi0;
  CHECK((ric[1][1] + pot.hess[1][1]) / g_thth == Approx(reduced_sph).epsilon(1e-10));
  // The phi-phi component carries the same reduced expression.
  const double g_phph = g_thth * std::sin(theta) * std::sin(theta);
  CHECK((ric[2][2] + pot.hess[2][2]) / g_phph == Approx(reduced_sph).epsilon(1e-10));
}

TEST_CASE("bryant_integrate rejects invalid arguments") {
  CHECK_THROWS_AS(bryant_integrate(-1.0, 1e-10), Error);
  CHECK_THROWS_AS(bryant_integrate(10.0, 0.0), Error);
}

TEST_CASE("profile invariants: positivity, monotone potential, normalization") {
  const auto prof = shared_profile();
  CHECK(prof->hamilton_constant() == 1.0);
  for (std::size_t k = 0; k < prof->node_count(); ++k) {
    const auto& n = prof->node(k);
    CHECK(n.c[0][0] > 0.0);  // phi > 0
    CHECK(n.c[1][0] > 0.0);  // phi' > 0
    CHECK(n.c[4][0] <= 0.0); // f' <= 0
  }
  // R(O): the seed normalizes R -> 1 at the tip; the first node sits at the
  // launch radius where R is already within O(r^2) of 1.
  const BryantProfile::State s0 = prof->state_at(prof->grid_min());
  CHECK(BryantProfile::scalar_curvature(s0) == Approx(1.0).margin(1e-7));
}

TEST_CASE("Hamilton identity drift and dense-output defect stay small") {
  const auto prof = shared_profile();
  CHECK(prof->hamilton_drift() < 1e-8);
  CHECK(prof->ode_defect() < 1e-9);
}

TEST_CASE("long-range integration keeps the conservation law") {
  const auto prof = shared_profile(1e4, 1e-12);
  CHECK(prof->hamilton_drift() < 1e-8);
  // f'(r) -> -sqrt(C0) = -1 within 1% at the far end.
  const BryantProfile::State s = prof->state_at(1e4);
  CHECK(s.df == Approx(-1.0).epsilon(0.01));
  // R(r) * r approaches a positive constant: relative variation < 5% over
  // [1e2, 1e4].
  double lo = 1e300, hi = -1e300;
  for (double r = 1e2; r <= 1e4; r *= 1.3) {
    const BryantProfile::State sr = prof->state_at(r);
    const double v = BryantProfile::scalar_curvature(sr) * r;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi > 0.0);
  CHECK((hi - lo) / hi < 0.05);
}

TEST_CASE("integration is deterministic and converges under tolerance halving") {
  const BryantProfile a = bryant_integrate(120.0, 1e-10);
  const BryantProfile b = bryant_integrate(120.0, 1e-10);
  REQUIRE(a.node_count() == b.node_count());
  const BryantProfile::State sa = a.state_at(100.0);
  const BryantProfile::State sb = b.state_at(100.0);
  CHECK(sa.phi == sb.phi);
  CHECK(sa.df == sb.df);

  const BryantProfile c = bryant_integrate(120.0, 5e-11);
  const double Ra = BryantProfile::scalar_curvature(a.state_at(100.0));
  const double Rc = BryantProfile::scalar_curvature(c.state_at(100.0));
  CHECK(std::abs(Ra - Rc) < 1e-10);
}

TEST_CASE("bryant model satisfies the soliton equation") {
  const auto prof = shared_profile();
  const ModelPtr m = bryant_model(prof);
  const double tol10 = 10.0 * prof->tolerance();
  for (double r : {1.0, 10.0, 100.0}) {
    const ChartPoint p(r, M_PI / 2.0, 0.3);
    const ResidualReport rep = verify_soliton_equation(*m, p);
    CHECK(rep.abs_residual < std::max(tol10, 1e-11));
  }
}

TEST_CASE("bryant level sets are umbilical spheres") {
  const ModelPtr m = bryant_model(shared_profile());
  for (double r : {1.0, 5.0, 10.0, 50.0}) {
    const LevelSetFrame fr = frame_at(*m, ChartPoint(r, 1.1, 0.7));
    CHECK(fr.S2 < 1e-10);
    CHECK(fr.H > 0.0);
    CHECK(fr.umbilical);
  }
}

TEST_CASE("bryant closed-form cross-checks") {
  const auto prof = shared_profile();
  const ModelPtr m = bryant_model(prof);
  const double r = 10.0;
  const ChartPoint p(r, M_PI / 2.0, 0.0);
  const BryantProfile::State s = prof->state_at(r);
  // H = 2 phi'/phi (trace of the shape operator over the sphere directions).
  const LevelSetFrame fr = frame_at(*m, p);
  CHECK(fr.H == Approx(2.0 * s.dphi / s.phi).epsilon(1e-8));
  // |grad f| = |f'|.
  CHECK(fr.grad_norm == Approx(-s.df).epsilon(1e-10));
  // R from the chart pipeline equals the profile's closed form.
  CHECK(fr.R == Approx(BryantProfile::scalar_curvature(s)).epsilon(1e-9));
}

TEST_CASE("chart-domain errors outside the grid and at the poles") {
  const auto prof = shared_profile();
  const ModelPtr m = bryant_model(prof);
  CHECK_THROWS_AS(m->metric_jet(ChartPoint(1e6, 1.0, 0.0), 2), ChartDomainError);
  CHECK_THROWS_AS(m->metric_jet(ChartPoint(1e-8, 1.0, 0.0), 2), ChartDomainError);
  CHECK_THROWS_AS(m->metric_jet(ChartPoint(1.0, 0.0, 0.0), 2), ChartDomainError);
  CHECK_THROWS_AS(prof->state_at(-1.0), ChartDomainError);
}

TEST_CASE("profile CSV dump has the documented columns and monotone radii") {
  const auto prof = shared_profile(50.0, 1e-10);
  std::ostringstream os;
  write_profile_csv(*prof, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "r,phi,dphi,f,df,R,C0_check");
  double prev = -1.0;
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    const double r = std::stod(line.substr(0, line.find(',')));
    CHECK(r > prev);
    prev = r;
    ++rows;
    // C0_check column stays within the drift bound of 1.
    const auto last_comma = line.rfind(',');
    const double c0 = std::stod(line.substr(last_comma + 1));
    CHECK(c0 == Approx(1.0).margin(1e-8));
  }
  CHECK(rows == static_cast<int>(prof->node_count()));
}
