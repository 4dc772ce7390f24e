#include "solitonlab/curvature.hpp"

#include <cmath>

#include "solitonlab/errors.hpp"

namespace soliton {

CurvatureTaylor::CurvatureTaylor(const MetricJet& jet, double degeneracy_threshold)
    : dim_(jet.dim()), order_(jet.order()) {
  if (jet.smallest_eigenvalue() < degeneracy_threshold)
    throw DegenerateMetricError("metric is degenerate: smallest eigenvalue below threshold");

  const int nsym = dim_ == 2 ? 3 : 6;
  g_.reserve(nsym);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) g_.push_back(jet.component(i, j));

  // Inverse metric by cofactors over Taylor arithmetic.
  ginv_.resize(nsym, Taylor());
  auto G = [&](int i, int j) -> const Taylor& { return g_[MetricJet::sym_index(i, j, dim_)]; };
  if (dim_ == 2) {
    Taylor det = G(0, 0) * G(1, 1) - G(0, 1) * G(0, 1);
    Taylor idet = reciprocal(det);
    ginv_[MetricJet::sym_index(0, 0, 2)] = G(1, 1) * idet;
    ginv_[MetricJet::sym_index(1, 1, 2)] = G(0, 0) * idet;
    ginv_[MetricJet::sym_index(0, 1, 2)] = -(G(0, 1) * idet);
  } else {
    Taylor det = G(0, 0) * (G(1, 1) * G(2, 2) - G(1, 2) * G(1, 2)) -
                 G(0, 1) * (G(0, 1) * G(2, 2) - G(1, 2) * G(0, 2)) +
                 G(0, 2) * (G(0, 1) * G(1, 2) - G(1, 1) * G(0, 2));
    Taylor idet = reciprocal(det);
    ginv_[MetricJet::sym_index(0, 0, 3)] = (G(1, 1) * G(2, 2) - G(1, 2) * G(1, 2)) * idet;
    ginv_[MetricJet::sym_index(0, 1, 3)] = (G(0, 2) * G(1, 2) - G(0, 1) * G(2, 2)) * idet;
    ginv_[MetricJet::sym_index(0, 2, 3)] = (G(0, 1) * G(1, 2) - G(0, 2) * G(1, 1)) * idet;
    ginv_[MetricJet::sym_index(1, 1, 3)] = (G(0, 0) * G(2, 2) - G(0, 2) * G(0, 2)) * idet;
    ginv_[MetricJet::sym_index(1, 2, 3)] = (G(0, 1) * G(0, 2) - G(0, 0) * G(1, 2)) * idet;
    ginv_[MetricJet::sym_index(2, 2, 3)] = (G(0, 0) * G(1, 1) - G(0, 1) * G(0, 1)) * idet;
  }

  // First partials of the metric components.
  std::vector<Taylor> dg(3 * nsym);
  for (int k = 0; k < dim_; ++k)
    for (int s = 0; s < nsym; ++s) dg[k * nsym + s] = g_[s].derivative(k);
  auto DG = [&](int k, int i, int j) -> const Taylor& {
    return dg[k * nsym + MetricJet::sym_index(i, j, dim_)];
  };

  gamma_.resize(27, Taylor());
  if (order_ >= 1) {
    for (int k = 0; k < dim_; ++k)
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
          Taylor acc;
          bool first = true;
          for (int l = 0; l < dim_; ++l) {
            Taylor term = (DG(i, l, j) + DG(j, i, l) - DG(l, i, j)) * ginv(k, l);
            if (first) {
              acc = term;
              first = false;
            } else {
              acc += term;
            }
          }
          acc *= 0.5;
          gamma_[(k * 3 + i) * 3 + j] = acc;
          gamma_[(k * 3 + j) * 3 + i] = acc;
        }
  }

  riem_.resize(81, Taylor());
  ric_.resize(9, Taylor());
  if (order_ >= 2) {
    // R^l_ijk for i < j, then lower and fill by antisymmetry.
    auto Gm = [&](int k, int i, int j) -> const Taylor& { return gamma_[(k * 3 + i) * 3 + j]; };
    std::vector<Taylor> rmixed(81, Taylor());
    for (int l = 0; l < dim_; ++l)
      for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
          for (int k = 0; k < dim_; ++k) {
            Taylor acc = Gm(l, j, k).derivative(i) - Gm(l, i, k).derivative(j);
            for (int m = 0; m < dim_; ++m)
              acc += Gm(l, i, m) * Gm(m, j, k) - Gm(l, j, m) * Gm(m, i, k);
            rmixed[((l * 3 + i) * 3 + j) * 3 + k] = acc;
            rmixed[((l * 3 + j) * 3 + i) * 3 + k] = -acc;
          }
    // Riem_ijkl = g_km R^m_ijl.
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        if (i == j) continue;
        for (int k = 0; k < dim_; ++k)
          for (int l = 0; l < dim_; ++l) {
            Taylor acc;
            bool first = true;
            for (int m = 0; m < dim_; ++m) {
              Taylor term = G(k, m) * rmixed[((m * 3 + i) * 3 + j) * 3 + l];
              if (first) {
                acc = term;
                first = false;
              } else {
                acc += term;
              }
            }
            riem_[((i * 3 + j) * 3 + k) * 3 + l] = acc;
          }
      }
    // Zero tensors for i == j stay default; give them the right layout.
    for (int k = 0; k < dim_; ++k)
      for (int l = 0; l < dim_; ++l)
        for (int i = 0; i < dim_; ++i)
          riem_[((i * 3 + i) * 3 + k) * 3 + l] =
              Taylor::constant(dim_, order_, 0.0);

    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l) {
        Taylor acc = Taylor::constant(dim_, order_, 0.0);
        for (int i = 0; i < dim_; ++i)
          for (int k = 0; k < dim_; ++k) acc += ginv(i, k) * riem(i, j, k, l);
        ric_[j * 3 + l] = acc;
      }
    Taylor acc = Taylor::constant(dim_, order_, 0.0);
    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l) acc += ginv(j, l) * ric(j, l);
    scalar_ = acc;
  }
}

Mat3 CurvatureTaylor::g_value() const {
  Mat3 m{};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m[i][j] = g(i, j).value();
  return m;
}

Mat3 CurvatureTaylor::ginv_value() const {
  Mat3 m{};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m[i][j] = ginv(i, j).value();
  return m;
}

Mat3 CurvatureTaylor::ric_value() const {
  Mat3 m{};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m[i][j] = ric(i, j).value();
  return m;
}

double CurvatureTaylor::nabla_riem_value(int m, int i, int j, int k, int l) const {
  double v = riem(i, j, k, l).partial(m == 0, m == 1, m == 2);
  for (int a = 0; a < dim_; ++a) {
    v -= gamma_value(a, m, i) * riem_value(a, j, k, l);
    v -= gamma_value(a, m, j) * riem_value(i, a, k, l);
    v -= gamma_value(a, m, k) * riem_value(i, j, a, l);
    v -= gamma_value(a, m, l) * riem_value(i, j, k, a);
  }
  return v;
}

double CurvatureTaylor::nabla_ric_value(int m, int j, int l) const {
  double v = ric(j, l).partial(m == 0, m == 1, m == 2);
  for (int a = 0; a < dim_; ++a) {
    v -= gamma_value(a, m, j) * ric(a, l).value();
    v -= gamma_value(a, m, l) * ric(j, a).value();
  }
  return v;
}

Vec3 CurvatureTaylor::dscalar_value() const {
  Vec3 d{};
  for (int i = 0; i < dim_; ++i) d[i] = scalar_.partial(i == 0, i == 1, i == 2);
  return d;
}

Mat3 CurvatureTaylor::hess_scalar_value() const {
  const Vec3 dR = dscalar_value();
  Mat3 h{};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      std::array<int, 3> a{0, 0, 0};
      a[i] += 1;
      a[j] += 1;
      double v = scalar_.partial(a[0], a[1], a[2]);
      for (int k = 0; k < dim_; ++k) v -= gamma_value(k, i, j) * dR[k];
      h[i][j] = v;
    }
  return h;
}

double CurvatureTaylor::laplacian_scalar_value() const {
  const Mat3 h = hess_scalar_value();
  const Mat3 gi = ginv_value();
  double acc = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) acc += gi[i][j] * h[i][j];
  return acc;
}

PotentialValues potential_values(const CurvatureTaylor& curv, const ScalarJet& f) {
  const int dim = curv.dim();
  PotentialValues pv;
  for (int i = 0; i < dim; ++i) pv.df[i] = f.d(i);
  const Mat3 gi = curv.ginv_value();
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += gi[i][j] * pv.df[j];
    pv.grad[i] = s;
  }
  pv.grad_norm_sq = 0.0;
  for (int i = 0; i < dim; ++i) pv.grad_norm_sq += pv.grad[i] * pv.df[i];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double v = f.d2(i, j);
      for (int k = 0; k < dim; ++k) v -= curv.gamma_value(k, i, j) * pv.df[k];
      pv.hess[i][j] = v;
    }
  pv.laplacian = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) pv.laplacian += gi[i][j] * pv.hess[i][j];
  return pv;
}

TensorValue christoffel(const ChartPoint& p, const MetricJet& jet) {
  if (jet.order() < 1) throw InsufficientJetOrderError("christoffel: jet order >= 1 required");
  CurvatureTaylor c(jet);
  TensorValue t(p, 1, 2);
  const int d = jet.dim();
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t.at({k, i, j}) = c.gamma_value(k, i, j);
  return t;
}

RiemannResult riemann(const ChartPoint& p, const MetricJet& jet) {
  if (jet.order() < 2) throw InsufficientJetOrderError("riemann: jet order >= 2 required");
  CurvatureTaylor c(jet);
  const int d = jet.dim();
  RiemannResult r{TensorValue(p, 1, 3), TensorValue(p, 0, 4)};
  const Mat3 gi = c.ginv_value();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double low = c.riem_value(i, j, k, l);
          r.lowered.at({i, j, k, l}) = low;
        }
  // R^l_ijk = g^lm Riem_ijml  (inverse of the lowering used above).
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double acc = 0.0;
          for (int m = 0; m < d; ++m) acc += gi[l][m] * c.riem_value(i, j, m, k);
          r.mixed.at({l, i, j, k}) = acc;
        }
  return r;
}

TensorValue ricci(const ChartPoint& p, const MetricJet& jet) {
  if (jet.order() < 2) throw InsufficientJetOrderError("ricci: jet order >= 2 required");
  CurvatureTaylor c(jet);
  TensorValue t(p, 0, 2);
  for (int i = 0; i < jet.dim(); ++i)
    for (int j = 0; j < jet.dim(); ++j) t.at({i, j}) = c.ric(i, j).value();
  return t;
}

double scalar_curvature(const ChartPoint& p, const MetricJet& jet) {
  (void)p;
  if (jet.order() < 2) throw InsufficientJetOrderError("scalar_curvature: jet order >= 2 required");
  CurvatureTaylor c(jet);
  return c.scalar_value();
}

TensorValue riemann_covariant_derivative(const ChartPoint& p, const MetricJet& jet) {
  if (jet.order() < 3)
    throw InsufficientJetOrderError("riemann_covariant_derivative: jet order >= 3 required");
  CurvatureTaylor c(jet);
  const int d = jet.dim();
  TensorValue t(p, 0, 5);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            t.at({m, i, j, k, l}) = c.nabla_riem_value(m, i, j, k, l);
  return t;
}

TensorValue hessian(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f) {
  if (jet.order() < 1 || f.order() < 2)
    throw InsufficientJetOrderError("hessian: metric order >= 1 and scalar order >= 2 required");
  CurvatureTaylor c(jet);
  const PotentialValues pv = potential_values(c, f);
  TensorValue t(p, 0, 2);
  for (int i = 0; i < jet.dim(); ++i)
    for (int j = 0; j < jet.dim(); ++j) t.at({i, j}) = pv.hess[i][j];
  return t;
}

double laplacian(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f) {
  (void)p;
  if (jet.order() < 1 || f.order() < 2)
    throw InsufficientJetOrderError("laplacian: metric order >= 1 and scalar order >= 2 required");
  CurvatureTaylor c(jet);
  return potential_values(c, f).laplacian;
}

TensorValue gradient(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f) {
  if (f.order() < 1) throw InsufficientJetOrderError("gradient: scalar order >= 1 required");
  CurvatureTaylor c(jet);
  PotentialValues pv;
  for (int i = 0; i < jet.dim(); ++i) pv.df[i] = f.d(i);
  const Mat3 gi = c.ginv_value();
  TensorValue t(p, 1, 0);
  for (int i = 0; i < jet.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < jet.dim(); ++j) s += gi[i][j] * pv.df[j];
    t.at({i}) = s;
  }
  return t;
}

double gradient_norm_sq(const ChartPoint& p, const MetricJet& jet, const ScalarJet& f) {
  (void)p;
  if (f.order() < 1) throw InsufficientJetOrderError("gradient_norm_sq: scalar order >= 1 required");
  CurvatureTaylor c(jet);
  const Mat3 gi = c.ginv_value();
  double acc = 0.0;
  for (int i = 0; i < jet.dim(); ++i)
    for (int j = 0; j < jet.dim(); ++j) acc += gi[i][j] * f.d(i) * f.d(j);
  return acc;
}

}  // namespace soliton
