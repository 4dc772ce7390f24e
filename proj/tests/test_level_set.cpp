#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solitonlab/bryant.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/level_set.hpp"
#include "solitonlab/models.hpp"
#include "solitonlab/sampling.hpp"

using namespace soliton;
using Catch::Approx;

namespace {

ModelPtr bryant_fixture() {
  static ModelPtr m = bryant_model(
      std::make_shared<BryantProfile>(bryant_integrate(150.0, 1e-12)));
  return m;
}

}  // namespace

TEST_CASE("adapted frame on the product model at rho = 1") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.7);
  const LevelSetFrame fr = frame_at(*m, p);
  CHECK(fr.grad_norm == Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fr.H == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fr.kappa1 == Approx(0.0).margin(1e-12));
  CHECK(fr.kappa2 == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fr.S2 == Approx(0.5).epsilon(1e-12));
  CHECK(fr.A2 == Approx(0.5).epsilon(1e-12));
  CHECK(fr.R == Approx(2.0).epsilon(1e-12));
  CHECK(fr.R_nunu == Approx(1.0).epsilon(1e-12));
  CHECK(fr.lambda == Approx(1.0).epsilon(1e-12));
  CHECK(fr.theta == Approx(1.0).epsilon(1e-12));
  CHECK(fr.t == Approx(-std::log(2.0)));
  CHECK_FALSE(fr.umbilical);
  // e1 is the flat line direction, e2 the cigar circle direction.
  CHECK(std::abs(fr.e1[2]) == Approx(1.0));
  CHECK(fr.e1[0] == Approx(0.0).margin(1e-14));
  CHECK(std::abs(fr.e2[1]) == Approx(std::sqrt(2.0)));
  CHECK(fr.e2[2] == Approx(0.0).margin(1e-14));
}

TEST_CASE("frame orthonormality and algebraic invariants at seeded points") {
  const ModelPtr m = cigar_cross_line_model();
  for (const auto& p : sample_points(*m, 30, 5)) {
    const LevelSetFrame fr = frame_at(*m, p);
    CHECK(dot_g(fr.g, fr.nu, fr.e1, 3) == Approx(0.0).margin(1e-12));
    CHECK(dot_g(fr.g, fr.nu, fr.e2, 3) == Approx(0.0).margin(1e-12));
    CHECK(dot_g(fr.g, fr.e1, fr.e2, 3) == Approx(0.0).margin(1e-12));
    CHECK(dot_g(fr.g, fr.e1, fr.e1, 3) == Approx(1.0).epsilon(1e-12));
    CHECK(dot_g(fr.g, fr.e2, fr.e2, 3) == Approx(1.0).epsilon(1e-12));
    CHECK(dot_g(fr.g, fr.nu, fr.nu, 3) == Approx(1.0).epsilon(1e-12));
    CHECK(fr.H == Approx(fr.kappa1 + fr.kappa2).margin(1e-13));
    CHECK(fr.A2 == Approx(fr.kappa1 * fr.kappa1 + fr.kappa2 * fr.kappa2).margin(1e-13));
    // S^2 = 2|A|^2 - H^2 = (kappa2 - kappa1)^2 at rounding level.
    CHECK(std::abs(2.0 * fr.A2 - fr.H * fr.H - fr.S2) < 1e-12 * std::max(1.0, fr.A2));
    // Flow-equation consistency.
    CHECK(fr.H * fr.grad_norm == Approx(fr.R - fr.R_nunu).epsilon(1e-10));
  }
}

TEST_CASE("bryant frames are umbilical with positive H") {
  const ModelPtr b = bryant_fixture();
  const LevelSetFrame fr = frame_at(*b, ChartPoint(10.0, M_PI / 2.0, 0.1));
  CHECK(fr.S2 < 1e-10);
  CHECK(fr.H > 0.0);
  CHECK(fr.umbilical);
}

TEST_CASE("gradient-critical and dimension errors") {
  CHECK_THROWS_AS(frame_at(*euclidean_model(3), ChartPoint(0.1, 0.2, 0.3)),
                  GradientCriticalError);
  CHECK_THROWS_AS(frame_at(*cigar_model(), ChartPoint(1.0, 0.0)), UnsupportedModelError);
}

TEST_CASE("umbilical ratio values") {
  const ModelPtr m = cigar_cross_line_model();
  for (double rho : {0.5, 1.0, 2.0}) {
    const ChartPoint p(rho, 0.0, -0.3);
    CHECK(umbilical_ratio(*m, p, 0.0) == Approx(1.0).epsilon(1e-8));
  }
  CHECK(umbilical_ratio(*m, ChartPoint(1.0, 0.0, 0.7), 2.0) == Approx(2.0).epsilon(1e-10));
  const ModelPtr b = bryant_fixture();
  for (double sigma : {-1.0, 0.0, 2.0})
    CHECK(umbilical_ratio(*b, ChartPoint(5.0, 1.0, 0.5), sigma) < 1e-10);
}

TEST_CASE("L tensor components and trace identity") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.4);
  const LTensorResult lt = L_tensor(*m, p);
  // The tangential form vanishes on the product (R depends on the cigar
  // radius only, which is normal to the level set).
  CHECK(std::abs(lt.l22_tangential) < 1e-10);
  CHECK(std::abs(lt.e1_R) < 1e-10);
  CHECK(std::abs(lt.e2_R) < 1e-10);
  // The definition form keeps the normal component of grad R.
  CHECK(lt.l22_definition == Approx(-lt.nu_R * lt.nu_R).epsilon(1e-8));
  CHECK(lt.discrepancy != 0.0);

  // Euclidean: L vanishes (R constant).
  const TensorValue flat = L_tensor_full(*euclidean_model(3), ChartPoint(0.2, 0.1, -0.5));
  for (double v : flat.data) CHECK(v == 0.0);

  // Trace identity g^{ij} L_ij = (2 - n) |grad R|^2 on both models.
  for (const ModelPtr& mm : {cigar_model(), cigar_cross_line_model()}) {
    for (const auto& q : sample_points(*mm, 10, 31)) {
      const int n = mm->dimension();
      const MetricJet jet = mm->metric_jet(q, 3);
      CurvatureTaylor curv(jet);
      const Mat3 gi = curv.ginv_value();
      const Vec3 dR = curv.dscalar_value();
      double dr2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dr2 += gi[i][j] * dR[i] * dR[j];
      const TensorValue L = L_tensor_full(*mm, q);
      double tr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += gi[i][j] * L.at({i, j});
      CHECK(tr == Approx((2.0 - n) * dr2).margin(1e-10 * std::max(1.0, dr2)));
    }
  }

  // Umbilical points do not define e2.
  CHECK_THROWS_AS(L_tensor(*bryant_fixture(), ChartPoint(5.0, 1.0, 0.5)),
                  UmbilicalDegenerateError);
}

TEST_CASE("field sample of the potential itself") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.2, -0.3, 0.5);
  const SurfaceFieldSample s =
      field_sample(*m, p, GeometricField::of(GeometricField::Kind::Potential), 1e-3);
  CHECK(std::abs(s.grad_tan[0]) < 1e-9);
  CHECK(std::abs(s.grad_tan[1]) < 1e-9);
  CHECK(s.flow_derivative == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("surface Laplacian calibration on the unit sphere") {
  const ModelPtr q = quadratic_potential_model();
  for (int axis = 0; axis < 3; ++axis) {
    auto coord = GeometricField::custom_field(
        [axis](const SolitonModel&, const ChartPoint& pt) { return pt.x[axis]; });
    // A point where every coordinate is nonzero, on the unit sphere.
    const double n = std::sqrt(3.0);
    const ChartPoint p(1.0 / n, 1.0 / n, 1.0 / n);
    const SurfaceFieldSample s = field_sample(*q, p, coord, 1e-3);
    CHECK(s.surface_laplacian == Approx(-2.0 * p.x[axis]).margin(1e-6));
  }
}

TEST_CASE("cylindrical symmetry kills tangential derivatives of H") {
  const ModelPtr m = cigar_cross_line_model();
  const SurfaceFieldSample s = field_sample(*m, ChartPoint(1.0, 0.0, 0.7),
                                            GeometricField::of(GeometricField::Kind::H), 1e-3);
  CHECK(std::abs(s.grad_tan[0]) < 1e-8);
  CHECK(std::abs(s.grad_tan[1]) < 1e-8);
  CHECK(std::abs(s.surface_laplacian) < 1e-4);
}

TEST_CASE("tangential gradient equals ambient gradient minus normal component") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(0.8, 0.6, -0.2);
  const LevelSetFrame fr = frame_at(*m, p);
  auto coord = GeometricField::custom_field(
      [](const SolitonModel&, const ChartPoint& pt) { return pt.x[0]; });
  const SurfaceFieldSample s = field_sample(*m, p, coord, 1e-3);
  // Project the ambient gradient onto e1, e2 with the metric.
  for (int i = 0; i < 2; ++i) {
    const Vec3& e = i == 0 ? fr.e1 : fr.e2;
    const double proj = dot_g(fr.g, s.grad_ambient, e, 3);
    CHECK(s.grad_tan[i] == Approx(proj).margin(1e-6));
  }
}

TEST_CASE("flow derivative matches trajectory differencing at second order") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.0);
  const GeometricField Hf = GeometricField::of(GeometricField::Kind::H);
  const double reference = flow_derivative(*m, p, Hf, 1e-4);
  const SubnormalChart chart(*m, p, 1.0);
  const double t0 = chart.base_level();
  auto trajectory_diff = [&](double delta) {
    const ChartPoint qp = chart.at(t0 + delta, 0.0, 0.0);
    const ChartPoint qm = chart.at(t0 - delta, 0.0, 0.0);
    return (eval_field(*m, qp, Hf) - eval_field(*m, qm, Hf)) / (2.0 * delta);
  };
  const double err1 = std::abs(trajectory_diff(0.2) - reference);
  const double err2 = std::abs(trajectory_diff(0.05) - reference);
  // Quartering the step should reduce the discrepancy by about 16x.
  CHECK(err1 / err2 == Approx(16.0).epsilon(0.35));
}

TEST_CASE("surface geodesics stay on the level set") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.5, -0.7);
  const LevelSetFrame fr = frame_at(*m, p);
  const double t = fr.t;
  for (double s : {1e-3, 1e-2, 0.1}) {
    const ChartPoint q = surface_geodesic_point(*m, p, fr.e2, s);
    const double f_q = m->potential_jet(q, 0).value();
    CHECK(std::abs(f_q - t) < 1e-12);
  }
}

TEST_CASE("parallel transport preserves the frame") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.2);
  const LevelSetFrame fr = frame_at(*m, p);
  const TransportResult tr =
      surface_geodesic_transport(*m, p, fr.e2, 0.05, {fr.e1, fr.e2});
  const LevelSetFrame fq = frame_at(*m, tr.point);
  CHECK(dot_g(fq.g, tr.vectors[0], tr.vectors[0], 3) == Approx(1.0).epsilon(1e-8));
  CHECK(dot_g(fq.g, tr.vectors[1], tr.vectors[1], 3) == Approx(1.0).epsilon(1e-8));
  CHECK(dot_g(fq.g, tr.vectors[0], tr.vectors[1], 3) == Approx(0.0).margin(1e-8));
  // Transported vectors remain tangent.
  CHECK(dot_g(fq.g, tr.vectors[0], fq.nu, 3) == Approx(0.0).margin(1e-8));
  CHECK(dot_g(fq.g, tr.vectors[1], fq.nu, 3) == Approx(0.0).margin(1e-8));
}

TEST_CASE("shape derivatives vanish on the symmetric fixtures") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.7);
  const LevelSetFrame fr = frame_at(*m, p);
  const ShapeDerivatives sd = shape_derivatives(*m, p, fr, 1e-3);
  CHECK(sd.grad_norm_sq < 1e-12);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(sd.grad[k][i][j]) < 1e-7);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(sd.lap[i][j]) < 1e-5);
}

TEST_CASE("subnormal chart normalizations at the base point") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.3);
  const SubnormalChart chart(*m, p, 0.5);
  const LevelSetFrame& fr = chart.base_frame();
  const double t0 = chart.base_level();
  const double eps = 1e-4;

  // d/dx0 differential: g00 = 1/|grad f|^2.
  const ChartPoint fp = chart.at(t0 + eps, 0.0, 0.0);
  const ChartPoint fm = chart.at(t0 - eps, 0.0, 0.0);
  Vec3 d0{};
  for (int c = 0; c < 3; ++c) d0[c] = (fp.x[c] - fm.x[c]) / (2.0 * eps);
  CHECK(dot_g(fr.g, d0, d0, 3) == Approx(1.0 / fr.grad_norm_sq).epsilon(1e-6));

  // Spatial frame: g_ij = delta_ij at the base point.
  const auto frm = chart.tangent_frame(t0, eps);
  CHECK(dot_g(fr.g, frm[0], frm[0], 3) == Approx(1.0).epsilon(1e-6));
  CHECK(dot_g(fr.g, frm[1], frm[1], 3) == Approx(1.0).epsilon(1e-6));
  CHECK(dot_g(fr.g, frm[0], frm[1], 3) == Approx(0.0).margin(1e-6));

  // h12 = 0: coordinate axes along principal directions.
  CHECK(second_fundamental_form(*m, p, frm[0], frm[1]) == Approx(0.0).margin(1e-8));

  // Umbilical points cannot fix the axes.
  CHECK_THROWS_AS(SubnormalChart(*bryant_fixture(), ChartPoint(5.0, 1.0, 0.5), 0.5),
                  UmbilicalDegenerateError);
  // Extent guard.
  CHECK_THROWS_AS(chart.at(t0, 1.0, 0.0), Error);
}

TEST_CASE("frame evaluation is bit-deterministic") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(0.9, 0.33, -1.1);
  const LevelSetFrame a = frame_at(*m, p);
  const LevelSetFrame b = frame_at(*m, p);
  CHECK(a.H == b.H);
  CHECK(a.kappa1 == b.kappa1);
  CHECK(a.kappa2 == b.kappa2);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.e1[i] == b.e1[i]);
    CHECK(a.e2[i] == b.e2[i]);
  }
}

TEST_CASE("Richardson extrapolation sharpens the surface operators") {
  const ModelPtr m = cigar_cross_line_model();
  const ChartPoint p(1.0, 0.0, 0.7);
  const GeometricField Hf = GeometricField::of(GeometricField::Kind::H);
  // Flow derivative of H has the closed form (1+2 rho^2)/(2 rho^3 sqrt(1+rho^2)).
  const double exact = 3.0 / (2.0 * std::sqrt(2.0));
  const double plain = std::abs(
      ambient_field_derivs(*m, p, Hf, 1e-2, false).flow_derivative - exact);
  const double rich = std::abs(
      ambient_field_derivs(*m, p, Hf, 1e-2, false, {}, true).flow_derivative - exact);
  CHECK(rich < plain / 50.0);
}
