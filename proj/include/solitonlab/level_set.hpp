#ifndef SOLITONLAB_LEVEL_SET_HPP
#define SOLITONLAB_LEVEL_SET_HPP

#include <functional>
#include <optional>

#include "solitonlab/curvature.hpp"
#include "solitonlab/models.hpp"

namespace soliton {

struct FrameOptions {
  double gradient_cutoff = 1e-8;   // |grad f| below this is a critical point
  double h_cutoff = 1e-10;         // H at or below this flags umbilical-ratio use
  double umbilical_cutoff = 1e-10; // eigenvalue gap cutoff, scaled by max(1,|H|)
  double theta_cutoff = 1e-8;      // |lambda |grad f|^2 - 1| below this is singular
  double metric_degeneracy = 1e-12;
};

// Adapted frame of the level set {f = t} through a point: unit normal
// nu = grad f/|grad f|, orthonormal principal tangent directions e1, e2 with
// shape-operator eigenvalues kappa1 <= kappa2, and the scalar invariants of
// the flow.  The shape operator is h(X,Y) = -Hess f(X,Y)/|grad f| on tangent
// vectors, which on a steady soliton equals Ric(X,Y)/|grad f|; the sign makes
// H |grad f| = R - R_nunu on the positively curved fixtures.
struct LevelSetFrame {
  ChartPoint point;
  double t = 0.0;             // f(p)
  double grad_norm = 0.0;     // |grad f|
  double grad_norm_sq = 0.0;
  Vec3 grad{};                // contravariant grad f
  Vec3 nu{};                  // unit normal
  Vec3 e1{}, e2{};            // unit principal directions (chart components)
  double kappa1 = 0.0, kappa2 = 0.0;
  double H = 0.0;             // kappa1 + kappa2
  double A2 = 0.0;            // kappa1^2 + kappa2^2
  double S2 = 0.0;            // (kappa2 - kappa1)^2 = 2|A|^2 - H^2
  double R = 0.0, R_nunu = 0.0;
  double lambda = 0.0;        // 1/(R - R_nunu)
  double theta = 0.0;         // lambda/(lambda |grad f|^2 - 1)
  bool umbilical = false;
  bool h_degenerate = false;
  bool theta_singular = false;
  Mat3 g{}, ginv{};
};

LevelSetFrame frame_at(const SolitonModel& model, const ChartPoint& p,
                       const FrameOptions& opts = {});

// U_sigma = S^2 / H^(2+sigma); throws MeanCurvatureDegenerateError when H is
// at or below the cutoff.
double umbilical_ratio(const SolitonModel& model, const ChartPoint& p, double sigma,
                       const FrameOptions& opts = {});

// L = 2 dR (x) dR - |grad R|^2 g and its e2-component in two readings.
struct LTensorResult {
  TensorValue full;          // chart components L_ij
  double l22_definition;     // L(e2, e2) = 2 (e2 R)^2 - |grad R|^2
  double l22_tangential;     // (e2 R)^2 - (e1 R)^2
  double discrepancy;        // definition - tangential = (e1 R)^2 + (e2 R)^2 - |grad R|^2
  double e1_R, e2_R, nu_R;   // frame derivatives of R
};
// Full tensor only; no frame required.
TensorValue L_tensor_full(const SolitonModel& model, const ChartPoint& p);
// Frame-dependent components; throws UmbilicalDegenerateError at umbilical
// points where e2 is not well defined.
LTensorResult L_tensor(const SolitonModel& model, const ChartPoint& p,
                       const FrameOptions& opts = {});

// Scalar fields on the non-critical set.
struct GeometricField {
  enum class Kind { H, A2, S2, USigma, Lambda, R, GradNormSq, L22, Potential, Custom };
  Kind kind = Kind::H;
  double sigma = 0.0;  // for USigma
  std::function<double(const SolitonModel&, const ChartPoint&)> custom;

  static GeometricField of(Kind k) { return GeometricField{k, 0.0, nullptr}; }
  static GeometricField u_sigma(double s) { return GeometricField{Kind::USigma, s, nullptr}; }
  static GeometricField custom_field(std::function<double(const SolitonModel&, const ChartPoint&)> f) {
    return GeometricField{Kind::Custom, 0.0, std::move(f)};
  }
};

double eval_field(const SolitonModel& model, const ChartPoint& p, const GeometricField& field,
                  const FrameOptions& opts = {});

// Walks the level-set geodesic from p with unit tangent `dir` for arclength s,
// re-projecting onto {f = t} by Newton steps along grad f.
ChartPoint surface_geodesic_point(const SolitonModel& model, const ChartPoint& p,
                                  const Vec3& dir, double s, const FrameOptions& opts = {});

// Same walk, parallel-transporting the given tangent vectors along it.
struct TransportResult {
  ChartPoint point;
  std::vector<Vec3> vectors;
};
TransportResult surface_geodesic_transport(const SolitonModel& model, const ChartPoint& p,
                                           const Vec3& dir, double s,
                                           const std::vector<Vec3>& vectors,
                                           const FrameOptions& opts = {});

// Second fundamental form h(X, Y) = -Hess f(X, Y)/|grad f| at q; the inputs
// are projected onto the tangent space of the level set through q first.
double second_fundamental_form(const SolitonModel& model, const ChartPoint& q, const Vec3& X,
                               const Vec3& Y, const FrameOptions& opts = {});

// Ambient central-difference derivatives of a scalar field.
struct AmbientFieldDerivs {
  double value = 0.0;
  Vec3 dQ{};                  // coordinate partials
  Vec3 gradQ{};               // contravariant gradient
  Mat3 hess{};                // covariant Hessian (only when requested)
  double laplacian = 0.0;
  double hess_nunu = 0.0;
  double dQ_dot_gradf = 0.0;  // <grad Q, grad f>
  double flow_derivative = 0.0;
  bool has_hessian = false;
};
AmbientFieldDerivs ambient_field_derivs(const SolitonModel& model, const ChartPoint& p,
                                        const GeometricField& field, double step,
                                        bool with_hessian, const FrameOptions& opts = {},
                                        bool richardson = false);

// Flow derivative d_t Q = <grad Q, grad f>/|grad f|^2 of a field.
double flow_derivative(const SolitonModel& model, const ChartPoint& p,
                       const GeometricField& field, double step,
                       const FrameOptions& opts = {}, bool richardson = false);

// One field probed on the level set through p: tangential gradient and
// Hessian in the principal frame by central differences along surface
// geodesics, surface Laplacian through the ambient identity
//   Lap_Sigma Q = Lap_M Q - Hess Q(nu,nu) + H <grad Q, nu>,
// and the flow derivative.
struct SurfaceFieldSample {
  double value = 0.0;
  std::array<double, 2> grad_tan{};      // components along e1, e2
  std::array<std::array<double, 2>, 2> hess_tan{};  // surface Hessian Q_{,ij}
  double surface_laplacian = 0.0;
  Vec3 grad_ambient{};
  double dQ_dot_gradf = 0.0;
  double flow_derivative = 0.0;
  // Largest magnitude among the ambient/tangential pieces combined into the
  // surface operators; the natural noise scale of a residual containing them.
  double operator_scale = 0.0;
  double hess_tan_trace() const { return hess_tan[0][0] + hess_tan[1][1]; }
};
SurfaceFieldSample field_sample(const SolitonModel& model, const ChartPoint& p,
                                const GeometricField& field, double step,
                                const FrameOptions& opts = {}, bool richardson = false);

// Derivatives of the second fundamental form in the parallel principal frame:
// (nabla_k h)_ij and the rough surface Laplacian (Delta h)_ij by differencing
// h against parallel-transported frames along surface geodesics.
struct ShapeDerivatives {
  double grad[2][2][2] = {};  // [k][i][j]
  double lap[2][2] = {};
  double grad_norm_sq = 0.0;  // |nabla A|^2
};
ShapeDerivatives shape_derivatives(const SolitonModel& model, const ChartPoint& p,
                                   const LevelSetFrame& frame, double step,
                                   const FrameOptions& opts = {});

// Subnormal coordinates (x0 = f, x1, x2) around a non-umbilical point:
// x1, x2 are normal coordinates on the level set along the principal
// directions, transported off the level set by the flow grad f/|grad f|^2.
class SubnormalChart {
 public:
  SubnormalChart(const SolitonModel& model, const ChartPoint& p, double extent,
                 const FrameOptions& opts = {});

  ChartPoint at(double x0, double x1, double x2) const;
  // Coordinate frame d/dx1, d/dx2 at (x0, 0, 0) by central differences of the
  // chart map with spatial step eps.
  std::array<Vec3, 2> tangent_frame(double x0, double eps) const;
  Vec3 flow_vector(const ChartPoint& q) const;  // d/dx0 = grad f/|grad f|^2
  const LevelSetFrame& base_frame() const { return frame_; }
  double base_level() const { return frame_.t; }

 private:
  const SolitonModel& model_;
  LevelSetFrame frame_;
  double extent_;
  FrameOptions opts_;
};

}  // namespace soliton

#endif
