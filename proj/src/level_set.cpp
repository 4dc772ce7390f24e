#include "solitonlab/level_set.hpp"

#include <algorithm>
#include <cmath>

#include "solitonlab/errors.hpp"

namespace soliton {

namespace {

// Pointwise ambient geometry bundle used by the walkers.
struct Ambient {
  CurvatureTaylor curv;
  PotentialValues pot;
  double f;

  Ambient(const SolitonModel& m, const ChartPoint& p, const FrameOptions& o)
      : curv(m.metric_jet(p, 2), o.metric_degeneracy),
        pot(potential_values(curv, m.potential_jet(p, 2))),
        f(m.potential_jet(p, 0).value()) {}
};

double df_of(const Ambient& a, const Vec3& v, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a.pot.df[i] * v[i];
  return s;
}

// Hess f(X, Y) in chart components.
double hess_f(const Ambient& a, const Vec3& X, const Vec3& Y, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += a.pot.hess[i][j] * X[i] * Y[j];
  return s;
}

Vec3 gamma_quadratic(const Ambient& a, const Vec3& X, const Vec3& Y, int dim) {
  Vec3 r{};
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) s += a.curv.gamma_value(k, i, j) * X[i] * Y[j];
    r[k] = s;
  }
  return r;
}

// Newton projection of x onto {f = t} along grad f.
ChartPoint project_to_level(const SolitonModel& model, ChartPoint x, double t,
                            const FrameOptions& opts) {
  const double tol = std::max(1e-12, 8.0 * 2.2e-16 * std::max(1.0, std::abs(t)));
  for (int it = 0; it < 12; ++it) {
    Ambient a(model, x, opts);
    const double miss = a.f - t;
    if (std::abs(miss) <= tol) return x;
    if (a.pot.grad_norm_sq < opts.gradient_cutoff * opts.gradient_cutoff)
      throw GradientCriticalError("project_to_level: gradient vanished during projection");
    for (int i = 0; i < x.dim; ++i) x.x[i] -= a.pot.grad[i] * miss / a.pot.grad_norm_sq;
  }
  throw ReprojectionError("project_to_level: residual |f - t| did not converge");
}

Vec3 project_tangent(const Ambient& a, const Vec3& v, int dim) {
  const double c = df_of(a, v, dim) / a.pot.grad_norm_sq;
  Vec3 r = v;
  for (int i = 0; i < dim; ++i) r[i] -= c * a.pot.grad[i];
  return r;
}

// Combined geodesic + parallel-transport state.
struct WalkState {
  Vec3 x;
  Vec3 v;
  std::vector<Vec3> E;
};

WalkState walk_rhs(const SolitonModel& model, const WalkState& s, int dim,
                   const FrameOptions& opts) {
  Ambient a(model, ChartPoint::of_dim(dim, s.x), opts);
  WalkState d;
  d.x = s.v;
  const Vec3 gq = gamma_quadratic(a, s.v, s.v, dim);
  const double c = hess_f(a, s.v, s.v, dim) / a.pot.grad_norm_sq;
  for (int i = 0; i < dim; ++i) d.v[i] = -gq[i] - c * a.pot.grad[i];
  d.E.resize(s.E.size());
  for (std::size_t e = 0; e < s.E.size(); ++e) {
    const Vec3 gqe = gamma_quadratic(a, s.v, s.E[e], dim);
    const double ce = hess_f(a, s.v, s.E[e], dim) / a.pot.grad_norm_sq;
    for (int i = 0; i < dim; ++i) d.E[e][i] = -gqe[i] - ce * a.pot.grad[i];
  }
  return d;
}

WalkState axpy(const WalkState& s, const WalkState& d, double h) {
  WalkState r = s;
  for (int i = 0; i < 3; ++i) {
    r.x[i] += h * d.x[i];
    r.v[i] += h * d.v[i];
  }
  for (std::size_t e = 0; e < s.E.size(); ++e)
    for (int i = 0; i < 3; ++i) r.E[e][i] += h * d.E[e][i];
  return r;
}

WalkState walk(const SolitonModel& model, const ChartPoint& p, const Vec3& dir, double s,
               std::vector<Vec3> vectors, const FrameOptions& opts) {
  const int dim = p.dim;
  WalkState st{p.x, dir, std::move(vectors)};
  if (s == 0.0) return st;
  const double t = Ambient(model, p, opts).f;
  const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(s) / 0.02)));
  const double h = s / nsub;
  for (int k = 0; k < nsub; ++k) {
    const WalkState k1 = walk_rhs(model, st, dim, opts);
    const WalkState k2 = walk_rhs(model, axpy(st, k1, h / 2), dim, opts);
    const WalkState k3 = walk_rhs(model, axpy(st, k2, h / 2), dim, opts);
    const WalkState k4 = walk_rhs(model, axpy(st, k3, h), dim, opts);
    for (int i = 0; i < 3; ++i) {
      st.x[i] += h / 6.0 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
      st.v[i] += h / 6.0 * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
    }
    for (std::size_t e = 0; e < st.E.size(); ++e)
      for (int i = 0; i < 3; ++i)
        st.E[e][i] += h / 6.0 * (k1.E[e][i] + 2 * k2.E[e][i] + 2 * k3.E[e][i] + k4.E[e][i]);
    // Post-step stabilization: back onto the level set, velocities tangent.
    ChartPoint q = project_to_level(model, ChartPoint::of_dim(dim, st.x), t, opts);
    st.x = q.x;
    Ambient a(model, q, opts);
    st.v = project_tangent(a, st.v, dim);
    for (auto& E : st.E) E = project_tangent(a, E, dim);
  }
  return st;
}

}  // namespace

LevelSetFrame frame_at(const SolitonModel& model, const ChartPoint& p, const FrameOptions& opts) {
  const MetricJet jet = model.metric_jet(p, 2);
  const ScalarJet fj = model.potential_jet(p, 2);
  CurvatureTaylor curv(jet, opts.metric_degeneracy);
  const PotentialValues pot = potential_values(curv, fj);

  if (pot.grad_norm_sq <= opts.gradient_cutoff * opts.gradient_cutoff)
    throw GradientCriticalError("frame_at: |grad f| below the gradient cutoff");
  if (p.dim != 3)
    throw UnsupportedModelError("frame_at: level-set frames require a 3-d model");

  LevelSetFrame fr;
  fr.point = p;
  fr.t = fj.value();
  fr.grad = pot.grad;
  fr.grad_norm_sq = pot.grad_norm_sq;
  fr.grad_norm = std::sqrt(pot.grad_norm_sq);
  fr.g = curv.g_value();
  fr.ginv = curv.ginv_value();
  for (int i = 0; i < 3; ++i) fr.nu[i] = pot.grad[i] / fr.grad_norm;

  // Orthonormal tangent basis from the chart axes (deterministic choice).
  auto tangent_part = [&](int axis, const Vec3* also_remove) {
    Vec3 w{};
    w[axis] = 1.0;
    const double cn = dot_g(fr.g, w, fr.nu, 3);
    for (int i = 0; i < 3; ++i) w[i] -= cn * fr.nu[i];
    if (also_remove) {
      const double cu = dot_g(fr.g, w, *also_remove, 3);
      for (int i = 0; i < 3; ++i) w[i] -= cu * (*also_remove)[i];
    }
    return w;
  };
  int best = 0;
  double best_norm = -1.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 w = tangent_part(k, nullptr);
    const double n = dot_g(fr.g, w, w, 3);
    if (n > best_norm + 1e-14) {
      best_norm = n;
      best = k;
    }
  }
  Vec3 u1 = tangent_part(best, nullptr);
  u1 = vscale(u1, 1.0 / norm_g(fr.g, u1, 3));
  int second = -1;
  double second_norm = -1.0;
  for (int k = 0; k < 3; ++k) {
    if (k == best) continue;
    const Vec3 w = tangent_part(k, &u1);
    const double n = dot_g(fr.g, w, w, 3);
    if (n > second_norm + 1e-14) {
      second_norm = n;
      second = k;
    }
  }
  Vec3 u2 = tangent_part(second, &u1);
  u2 = vscale(u2, 1.0 / norm_g(fr.g, u2, 3));

  // Shape operator in the (u1, u2) basis.
  auto h_of = [&](const Vec3& X, const Vec3& Y) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += pot.hess[i][j] * X[i] * Y[j];
    return -s / fr.grad_norm;
  };
  const double h11 = h_of(u1, u1), h22 = h_of(u2, u2), h12 = h_of(u1, u2);
  fr.H = h11 + h22;
  const Eig2 eig = sym_eigen_2x2(h11, h22, h12);
  fr.kappa1 = eig.k1;
  fr.kappa2 = eig.k2;
  fr.A2 = eig.k1 * eig.k1 + eig.k2 * eig.k2;
  fr.S2 = (eig.k2 - eig.k1) * (eig.k2 - eig.k1);
  fr.umbilical = (eig.k2 - eig.k1) < opts.umbilical_cutoff * std::max(1.0, std::abs(fr.H));
  fr.h_degenerate = fr.H <= opts.h_cutoff;

  auto combine = [&](const std::array<double, 2>& c) {
    Vec3 v{};
    for (int i = 0; i < 3; ++i) v[i] = c[0] * u1[i] + c[1] * u2[i];
    return v;
  };
  if (!fr.umbilical) {
    fr.e1 = combine(eig.v1);
    fr.e2 = combine(eig.v2);
  } else {
    // Tie-break: e1 along the best-projecting chart axis, e2 its complement.
    fr.e1 = u1;
    fr.e2 = u2;
  }
  // Deterministic orientation: largest-|component| entry made positive.
  auto orient = [](Vec3& v) {
    int arg = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(v[i]) > std::abs(v[arg]) + 1e-300) arg = i;
    if (v[arg] < 0.0)
      for (double& c : v) c = -c;
  };
  orient(fr.e1);
  orient(fr.e2);

  fr.R = curv.scalar_value();
  const Mat3 ric = curv.ric_value();
  fr.R_nunu = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fr.R_nunu += ric[i][j] * fr.nu[i] * fr.nu[j];
  fr.lambda = 1.0 / (fr.R - fr.R_nunu);
  const double theta_den = fr.lambda * fr.grad_norm_sq - 1.0;
  fr.theta_singular = std::abs(theta_den) < opts.theta_cutoff;
  fr.theta = fr.lambda / theta_den;
  return fr;
}

double umbilical_ratio(const SolitonModel& model, const ChartPoint& p, double sigma,
                       const FrameOptions& opts) {
  const LevelSetFrame fr = frame_at(model, p, opts);
  if (fr.H <= opts.h_cutoff)
    throw MeanCurvatureDegenerateError("umbilical_ratio: H at or below the cutoff");
  return fr.S2 / std::pow(fr.H, 2.0 + sigma);
}

TensorValue L_tensor_full(const SolitonModel& model, const ChartPoint& p) {
  const MetricJet jet = model.metric_jet(p, 3);
  CurvatureTaylor curv(jet);
  const int dim = jet.dim();
  const Vec3 dR = curv.dscalar_value();
  const Mat3 gi = curv.ginv_value();
  const Mat3 g = curv.g_value();
  double dr2 = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) dr2 += gi[i][j] * dR[i] * dR[j];
  TensorValue t(p, 0, 2);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t.at({i, j}) = 2.0 * dR[i] * dR[j] - dr2 * g[i][j];
  return t;
}

LTensorResult L_tensor(const SolitonModel& model, const ChartPoint& p, const FrameOptions& opts) {
  const LevelSetFrame fr = frame_at(model, p, opts);
  if (fr.umbilical)
    throw UmbilicalDegenerateError("L_tensor: e2 undefined at an umbilical point");
  const MetricJet jet = model.metric_jet(p, 3);
  CurvatureTaylor curv(jet, opts.metric_degeneracy);
  const Vec3 dR = curv.dscalar_value();
  const Mat3 gi = curv.ginv_value();
  double dr2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dr2 += gi[i][j] * dR[i] * dR[j];
  LTensorResult r{L_tensor_full(model, p), 0, 0, 0, 0, 0, 0};
  auto dir_deriv = [&](const Vec3& e) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += dR[i] * e[i];
    return s;
  };
  r.e1_R = dir_deriv(fr.e1);
  r.e2_R = dir_deriv(fr.e2);
  r.nu_R = dir_deriv(fr.nu);
  r.l22_definition = 2.0 * r.e2_R * r.e2_R - dr2;
  r.l22_tangential = r.e2_R * r.e2_R - r.e1_R * r.e1_R;
  r.discrepancy = r.l22_definition - r.l22_tangential;
  return r;
}

double eval_field(const SolitonModel& model, const ChartPoint& p, const GeometricField& field,
                  const FrameOptions& opts) {
  using Kind = GeometricField::Kind;
  switch (field.kind) {
    case Kind::H:
      return frame_at(model, p, opts).H;
    case Kind::A2:
      return frame_at(model, p, opts).A2;
    case Kind::S2:
      return frame_at(model, p, opts).S2;
    case Kind::USigma: {
      const LevelSetFrame fr = frame_at(model, p, opts);
      if (fr.H <= opts.h_cutoff)
        throw MeanCurvatureDegenerateError("U_sigma: H at or below the cutoff");
      return fr.S2 / std::pow(fr.H, 2.0 + field.sigma);
    }
    case Kind::Lambda:
      return frame_at(model, p, opts).lambda;
    case Kind::R: {
      CurvatureTaylor curv(model.metric_jet(p, 2), opts.metric_degeneracy);
      return curv.scalar_value();
    }
    case Kind::GradNormSq: {
      CurvatureTaylor curv(model.metric_jet(p, 0), opts.metric_degeneracy);
      const ScalarJet fj = model.potential_jet(p, 1);
      const Mat3 gi = curv.ginv_value();
      double acc = 0.0;
      for (int i = 0; i < p.dim; ++i)
        for (int j = 0; j < p.dim; ++j) acc += gi[i][j] * fj.d(i) * fj.d(j);
      return acc;
    }
    case Kind::L22:
      return L_tensor(model, p, opts).l22_definition;
    case Kind::Potential:
      return model.potential_jet(p, 0).value();
    case Kind::Custom:
      return field.custom(model, p);
  }
  throw Error("eval_field: unknown field kind");
}

ChartPoint surface_geodesic_point(const SolitonModel& model, const ChartPoint& p, const Vec3& dir,
                                  double s, const FrameOptions& opts) {
  WalkState st = walk(model, p, dir, s, {}, opts);
  return ChartPoint::of_dim(p.dim, st.x);
}

TransportResult surface_geodesic_transport(const SolitonModel& model, const ChartPoint& p,
                                           const Vec3& dir, double s,
                                           const std::vector<Vec3>& vectors,
                                           const FrameOptions& opts) {
  WalkState st = walk(model, p, dir, s, vectors, opts);
  return TransportResult{ChartPoint::of_dim(p.dim, st.x), st.E};
}

double second_fundamental_form(const SolitonModel& model, const ChartPoint& q, const Vec3& X,
                               const Vec3& Y, const FrameOptions& opts) {
  Ambient a(model, q, opts);
  if (a.pot.grad_norm_sq <= opts.gradient_cutoff * opts.gradient_cutoff)
    throw GradientCriticalError("second_fundamental_form: critical point");
  const Vec3 Xt = project_tangent(a, X, q.dim);
  const Vec3 Yt = project_tangent(a, Y, q.dim);
  return -hess_f(a, Xt, Yt, q.dim) / std::sqrt(a.pot.grad_norm_sq);
}

namespace {

AmbientFieldDerivs ambient_derivs_once(const SolitonModel& model, const ChartPoint& p,
                                       const GeometricField& field, double step,
                                       bool with_hessian, const FrameOptions& opts) {
  const int dim = p.dim;
  Ambient a(model, p, opts);
  AmbientFieldDerivs r;
  r.value = eval_field(model, p, field, opts);
  r.has_hessian = with_hessian;

  Vec3 eta{};
  for (int k = 0; k < dim; ++k) eta[k] = step / std::sqrt(a.curv.g(k, k).value());

  auto shifted = [&](int k, double mult) {
    ChartPoint q = p;
    q.x[k] += mult * eta[k];
    return q;
  };
  std::array<std::array<double, 2>, 3> side{};  // [axis][0]=+, [1]=-
  for (int k = 0; k < dim; ++k) {
    side[k][0] = eval_field(model, shifted(k, +1.0), field, opts);
    side[k][1] = eval_field(model, shifted(k, -1.0), field, opts);
    r.dQ[k] = (side[k][0] - side[k][1]) / (2.0 * eta[k]);
  }
  const Mat3 gi = a.curv.ginv_value();
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += gi[i][j] * r.dQ[j];
    r.gradQ[i] = s;
  }
  r.dQ_dot_gradf = 0.0;
  for (int i = 0; i < dim; ++i) r.dQ_dot_gradf += r.dQ[i] * a.pot.grad[i];
  r.flow_derivative = r.dQ_dot_gradf / a.pot.grad_norm_sq;

  if (with_hessian) {
    Mat3 d2{};
    for (int k = 0; k < dim; ++k)
      d2[k][k] = (side[k][0] - 2.0 * r.value + side[k][1]) / (eta[k] * eta[k]);
    for (int k = 0; k < dim; ++k)
      for (int l = k + 1; l < dim; ++l) {
        ChartPoint pp = p, pm = p, mp = p, mm = p;
        pp.x[k] += eta[k];
        pp.x[l] += eta[l];
        pm.x[k] += eta[k];
        pm.x[l] -= eta[l];
        mp.x[k] -= eta[k];
        mp.x[l] += eta[l];
        mm.x[k] -= eta[k];
        mm.x[l] -= eta[l];
        const double v = (eval_field(model, pp, field, opts) - eval_field(model, pm, field, opts) -
                          eval_field(model, mp, field, opts) + eval_field(model, mm, field, opts)) /
                         (4.0 * eta[k] * eta[l]);
        d2[k][l] = d2[l][k] = v;
      }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double v = d2[i][j];
        for (int k = 0; k < dim; ++k) v -= a.curv.gamma_value(k, i, j) * r.dQ[k];
        r.hess[i][j] = v;
      }
    r.laplacian = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r.laplacian += gi[i][j] * r.hess[i][j];
    const double gn = std::sqrt(a.pot.grad_norm_sq);
    Vec3 nu{};
    for (int i = 0; i < dim; ++i) nu[i] = a.pot.grad[i] / gn;
    r.hess_nunu = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r.hess_nunu += r.hess[i][j] * nu[i] * nu[j];
  }
  return r;
}

}  // namespace

AmbientFieldDerivs ambient_field_derivs(const SolitonModel& model, const ChartPoint& p,
                                        const GeometricField& field, double step,
                                        bool with_hessian, const FrameOptions& opts,
                                        bool richardson) {
  AmbientFieldDerivs full = ambient_derivs_once(model, p, field, step, with_hessian, opts);
  if (!richardson) return full;
  AmbientFieldDerivs half = ambient_derivs_once(model, p, field, step / 2.0, with_hessian, opts);
  auto comb = [](double a, double b) { return (4.0 * b - a) / 3.0; };
  AmbientFieldDerivs r = half;
  for (int i = 0; i < 3; ++i) {
    r.dQ[i] = comb(full.dQ[i], half.dQ[i]);
    r.gradQ[i] = comb(full.gradQ[i], half.gradQ[i]);
    for (int j = 0; j < 3; ++j) r.hess[i][j] = comb(full.hess[i][j], half.hess[i][j]);
  }
  r.laplacian = comb(full.laplacian, half.laplacian);
  r.hess_nunu = comb(full.hess_nunu, half.hess_nunu);
  r.dQ_dot_gradf = comb(full.dQ_dot_gradf, half.dQ_dot_gradf);
  r.flow_derivative = comb(full.flow_derivative, half.flow_derivative);
  return r;
}

double flow_derivative(const SolitonModel& model, const ChartPoint& p,
                       const GeometricField& field, double step, const FrameOptions& opts,
                       bool richardson) {
  return ambient_field_derivs(model, p, field, step, /*with_hessian=*/false, opts, richardson)
      .flow_derivative;
}

namespace {

struct TangentialDerivs {
  std::array<double, 2> grad{};
  std::array<std::array<double, 2>, 2> hess{};
};

TangentialDerivs tangential_once(const SolitonModel& model, const ChartPoint& p,
                                 const LevelSetFrame& fr, const GeometricField& field,
                                 double value_at_p, double s, const FrameOptions& opts) {
  auto probe = [&](const Vec3& dir) {
    const ChartPoint q = surface_geodesic_point(model, p, dir, s, opts);
    return eval_field(model, q, field, opts);
  };
  TangentialDerivs td;
  std::array<Vec3, 2> dirs{fr.e1, fr.e2};
  std::array<double, 2> plus{}, minus{};
  for (int i = 0; i < 2; ++i) {
    plus[i] = probe(dirs[i]);
    minus[i] = probe(vscale(dirs[i], -1.0));
    td.grad[i] = (plus[i] - minus[i]) / (2.0 * s);
    td.hess[i][i] = (plus[i] - 2.0 * value_at_p + minus[i]) / (s * s);
  }
  // Cross term from the diagonal direction d = (e1 + e2)/sqrt(2).
  Vec3 d{};
  const double inv = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 3; ++i) d[i] = (fr.e1[i] + fr.e2[i]) * inv;
  const double pd = probe(d);
  const double md = probe(vscale(d, -1.0));
  const double hdd = (pd - 2.0 * value_at_p + md) / (s * s);
  const double h12 = hdd - 0.5 * (td.hess[0][0] + td.hess[1][1]);
  td.hess[0][1] = td.hess[1][0] = h12;
  return td;
}

}  // namespace

SurfaceFieldSample field_sample(const SolitonModel& model, const ChartPoint& p,
                                const GeometricField& field, double step,
                                const FrameOptions& opts, bool richardson) {
  const LevelSetFrame fr = frame_at(model, p, opts);
  SurfaceFieldSample out;
  out.value = eval_field(model, p, field, opts);

  TangentialDerivs td = tangential_once(model, p, fr, field, out.value, step, opts);
  if (richardson) {
    const TangentialDerivs th = tangential_once(model, p, fr, field, out.value, step / 2.0, opts);
    for (int i = 0; i < 2; ++i) {
      td.grad[i] = (4.0 * th.grad[i] - td.grad[i]) / 3.0;
      for (int j = 0; j < 2; ++j) td.hess[i][j] = (4.0 * th.hess[i][j] - td.hess[i][j]) / 3.0;
    }
  }
  out.grad_tan = td.grad;
  out.hess_tan = td.hess;

  const AmbientFieldDerivs amb =
      ambient_field_derivs(model, p, field, step, /*with_hessian=*/true, opts, richardson);
  out.grad_ambient = amb.gradQ;
  out.dQ_dot_gradf = amb.dQ_dot_gradf;
  out.flow_derivative = amb.flow_derivative;
  double dQ_nu = 0.0;
  for (int i = 0; i < 3; ++i) dQ_nu += amb.dQ[i] * fr.nu[i];
  out.surface_laplacian = amb.laplacian - amb.hess_nunu + fr.H * dQ_nu;
  out.operator_scale = std::max({std::abs(amb.laplacian), std::abs(amb.hess_nunu),
                                 std::abs(fr.H * dQ_nu), std::abs(out.dQ_dot_gradf),
                                 std::abs(out.hess_tan[0][0]), std::abs(out.hess_tan[1][1]),
                                 std::abs(out.hess_tan[0][1]), std::abs(out.grad_tan[0]),
                                 std::abs(out.grad_tan[1])});
  return out;
}

ShapeDerivatives shape_derivatives(const SolitonModel& model, const ChartPoint& p,
                                   const LevelSetFrame& frame, double step,
                                   const FrameOptions& opts) {
  ShapeDerivatives sd;
  const std::vector<Vec3> base{frame.e1, frame.e2};
  const double h0[2][2] = {{frame.kappa1, 0.0}, {0.0, frame.kappa2}};
  std::array<Vec3, 2> dirs{frame.e1, frame.e2};
  for (int k = 0; k < 2; ++k) {
    const TransportResult fwd = surface_geodesic_transport(model, p, dirs[k], step, base, opts);
    const TransportResult bwd =
        surface_geodesic_transport(model, p, vscale(dirs[k], -1.0), step, base, opts);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        const double hp =
            second_fundamental_form(model, fwd.point, fwd.vectors[i], fwd.vectors[j], opts);
        const double hm =
            second_fundamental_form(model, bwd.point, bwd.vectors[i], bwd.vectors[j], opts);
        const double grad = (hp - hm) / (2.0 * step);
        const double lap = (hp - 2.0 * h0[i][j] + hm) / (step * step);
        sd.grad[k][i][j] = grad;
        sd.grad[k][j][i] = grad;
        sd.lap[i][j] += lap;
        if (i != j) sd.lap[j][i] += lap;
      }
  }
  sd.grad_norm_sq = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) sd.grad_norm_sq += sd.grad[k][i][j] * sd.grad[k][i][j];
  return sd;
}

SubnormalChart::SubnormalChart(const SolitonModel& model, const ChartPoint& p, double extent,
                               const FrameOptions& opts)
    : model_(model), frame_(frame_at(model, p, opts)), extent_(extent), opts_(opts) {
  if (frame_.umbilical)
    throw UmbilicalDegenerateError("subnormal_chart: principal axes undefined (umbilical)");
  if (!(extent > 0.0)) throw Error("subnormal_chart: extent must be positive");
}

ChartPoint SubnormalChart::at(double x0, double x1, double x2) const {
  const double rho = std::hypot(x1, x2);
  if (rho > extent_ || std::abs(x0 - frame_.t) > extent_)
    throw Error("subnormal_chart: coordinates exceed the chart extent");
  ChartPoint q = frame_.point;
  if (rho > 0.0) {
    Vec3 dir{};
    for (int i = 0; i < 3; ++i) dir[i] = (x1 * frame_.e1[i] + x2 * frame_.e2[i]) / rho;
    q = surface_geodesic_point(model_, q, dir, rho, opts_);
  }
  const double delta = x0 - frame_.t;
  if (delta != 0.0) {
    // Flow along grad f/|grad f|^2; the f-value advances exactly with x0.
    const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / 0.01)));
    const double h = delta / nsub;
    Vec3 x = q.x;
    auto rhs = [&](const Vec3& y) {
      Ambient a(model_, ChartPoint::of_dim(3, y), opts_);
      Vec3 r{};
      for (int i = 0; i < 3; ++i) r[i] = a.pot.grad[i] / a.pot.grad_norm_sq;
      return r;
    };
    for (int k = 0; k < nsub; ++k) {
      const Vec3 k1 = rhs(x);
      const Vec3 k2 = rhs(vadd(x, vscale(k1, h / 2)));
      const Vec3 k3 = rhs(vadd(x, vscale(k2, h / 2)));
      const Vec3 k4 = rhs(vadd(x, vscale(k3, h)));
      for (int i = 0; i < 3; ++i)
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    q = project_to_level(model_, ChartPoint::of_dim(3, x), x0, opts_);
  }
  return q;
}

std::array<Vec3, 2> SubnormalChart::tangent_frame(double x0, double eps) const {
  std::array<Vec3, 2> frame{};
  for (int i = 0; i < 2; ++i) {
    const ChartPoint plus = at(x0, i == 0 ? eps : 0.0, i == 1 ? eps : 0.0);
    const ChartPoint minus = at(x0, i == 0 ? -eps : 0.0, i == 1 ? -eps : 0.0);
    for (int c = 0; c < 3; ++c) frame[i][c] = (plus.x[c] - minus.x[c]) / (2.0 * eps);
  }
  return frame;
}

Vec3 SubnormalChart::flow_vector(const ChartPoint& q) const {
  Ambient a(model_, q, opts_);
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = a.pot.grad[i] / a.pot.grad_norm_sq;
  return r;
}

}  // namespace soliton
