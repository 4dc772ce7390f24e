#ifndef SOLITONLAB_CURVATURE_HPP
#define SOLITONLAB_CURVATURE_HPP

#include <optional>

#include "solitonlab/geometry_types.hpp"

namespace soliton {

// Intrinsic curvature of a metric from its pointwise jet, computed in
// truncated Taylor arithmetic so that derived quantities keep as many exact
// partial derivatives as the jet order allows.
//
// Conventions:
//   Gamma^k_ij  Levi-Civita connection coefficients.
//   R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik
//             + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
//   i.e. R^l_ijk are the components of R(d_i, d_j) d_k.
//   Riem_ijkl = g_km R^m_ijl = g( R(d_i, d_j) d_l , d_k ).
//   With this sign the round sphere has Riem_1212 > 0 (positive sectional
//   curvature) and Ric_jl = g^ik Riem_ijkl, R = g^jl Ric_jl are positive too.
class CurvatureTaylor {
 public:
  // Throws DegenerateMetricError when the smallest metric eigenvalue is
  // below `degeneracy_threshold`.
  explicit CurvatureTaylor(const MetricJet& jet, double degeneracy_threshold = 1e-12);

  int dim() const { return dim_; }
  int order() const { return order_; }

  const Taylor& g(int i, int j) const { return g_[MetricJet::sym_index(i, j, dim_)]; }
  const Taylor& ginv(int i, int j) const { return ginv_[MetricJet::sym_index(i, j, dim_)]; }
  const Taylor& gamma(int k, int i, int j) const { return gamma_[(k * 3 + i) * 3 + j]; }
  const Taylor& riem(int i, int j, int k, int l) const {  // lowered Riem_ijkl
    return riem_[((i * 3 + j) * 3 + k) * 3 + l];
  }
  const Taylor& ric(int i, int j) const { return ric_[i * 3 + j]; }
  const Taylor& scalar() const { return scalar_; }

  // Pointwise values.
  Mat3 g_value() const;
  Mat3 ginv_value() const;
  double gamma_value(int k, int i, int j) const { return gamma(k, i, j).value(); }
  double riem_value(int i, int j, int k, int l) const { return riem(i, j, k, l).value(); }
  Mat3 ric_value() const;
  double scalar_value() const { return scalar_.value(); }

  // Covariant derivative of the lowered curvature tensor, nabla_m Riem_ijkl.
  // Requires jet order >= 3.
  double nabla_riem_value(int m, int i, int j, int k, int l) const;
  // nabla_m Ric_jl, jet order >= 3.
  double nabla_ric_value(int m, int j, int l) const;
  // Scalar-curvature partials d_i R (order >= 3) and covariant Hessian and
  // Laplacian of R (order >= 4).
  Vec3 dscalar_value() const;
  Mat3 hess_scalar_value() const;
  double laplacian_scalar_value() const;

 private:
  int dim_;
  int order_;
  std::vector<Taylor> g_, ginv_;
  std::vector<Taylor> gamma_;  // full 3x3x3, entries beyond dim unused
  std::vector<Taylor> riem_;   // full 3^4 lowered tensor
  std::vector<Taylor> ric_;    // full 3x3
  Taylor scalar_;
};

// Gradient, Hessian and Laplacian of a scalar with respect to the metric.
struct PotentialValues {
  Vec3 df{};            // lower-index partials d_i f
  Vec3 grad{};          // grad f = g^ij d_j f (contravariant)
  double grad_norm_sq = 0.0;
  Mat3 hess{};          // Hess f_ij = d_i d_j f - Gamma^k_ij d_k f
  double laplacian = 0.0;
};
PotentialValues potential_values(const CurvatureTaylor& curv, const ScalarJet& f);

// --- Pointwise operations in chart coordinates (spec surface) ---

// Gamma^k_ij; index order (k, i, j); requires order >= 1.
TensorValue christoffel(const ChartPoint& p, const MetricJet& jet);

struct RiemannResult {
  TensorValue mixed;    // R^l_ijk, index order (l, i, j, k)
  TensorValue lowered;  // Riem_ijkl
};
RiemannResult riemann(const ChartPoint& p, const MetricJet& jet);

TensorValue ricci(const ChartPoint& p, const MetricJet& jet);
double scalar_curvature(const ChartPoint& p, const MetricJet& jet);

// nabla_m Riem_ijkl, index order (m, i, j, k, l); requires order >= 3.
TensorValue riemann_covariant_derivative(const ChartPoint& p, const MetricJet& jet);

TensorValue hessian(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f);
double laplacian(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f);
TensorValue gradient(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f);
double gradient_norm_sq(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f);

}  // namespace soliton

#endif
