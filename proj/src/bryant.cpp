#include "solitonlab/bryant.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "solitonlab/errors.hpp"

namespace soliton {

namespace {

constexpr int kTaylorOrder = 16;
constexpr double kLaunchR = 1e-4;
constexpr double kHMax = 1.0;

// Taylor coefficients of the solution of
//   u' = v,  v' = z/u + w v,  z' = -2 v v',  F' = w,  w' = 2 v'/u
// about a point with state (u, v, z, F, w), up to `order`.
struct SolutionSeries {
  std::array<std::vector<double>, 5> c;  // u, v, z, F, w
};

SolutionSeries expand_solution(double u0, double v0, double z0, double F0, double w0,
                               int order) {
  const int n = order + 1;
  SolutionSeries s;
  for (auto& a : s.c) a.assign(n, 0.0);
  auto& u = s.c[0];
  auto& v = s.c[1];
  auto& z = s.c[2];
  auto& F = s.c[3];
  auto& w = s.c[4];
  u[0] = u0;
  v[0] = v0;
  z[0] = z0;
  F[0] = F0;
  w[0] = w0;
  std::vector<double> sq(n, 0.0);  // z/u
  std::vector<double> rv(n, 0.0);  // v' = z/u + w v
  std::vector<double> t(n, 0.0);   // v'/u
  for (int k = 0; k + 1 < n; ++k) {
    // Coefficient k of the divisions and products, from data of index <= k.
    double conv = 0.0;
    for (int i = 0; i < k; ++i) conv += sq[i] * u[k - i];
    sq[k] = (z[k] - conv) / u[0];
    double wv = 0.0;
    for (int i = 0; i <= k; ++i) wv += w[i] * v[k - i];
    rv[k] = sq[k] + wv;
    conv = 0.0;
    for (int i = 0; i < k; ++i) conv += t[i] * u[k - i];
    t[k] = (rv[k] - conv) / u[0];
    double vrv = 0.0;
    for (int i = 0; i <= k; ++i) vrv += v[i] * rv[k - i];

    u[k + 1] = v[k] / (k + 1);
    v[k + 1] = rv[k] / (k + 1);
    z[k + 1] = -2.0 * vrv / (k + 1);
    F[k + 1] = w[k] / (k + 1);
    w[k + 1] = 2.0 * t[k] / (k + 1);
  }
  return s;
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double horner_derivative(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) acc = acc * x + c[k] * k;
  return acc;
}

// Tip series with C0 = 1:  phi = r + a3 r^3 + a5 r^5,  f' = c1 r + c3 r^3,
// coefficients fixed by smoothness of the reduced system at r = 0.
struct Seed {
  double u, v, z, F, w;
};

Seed tip_seed(double r) {
  const double a3 = -1.0 / 36.0;
  const double a5 = 87.0 * a3 * a3 / 50.0;
  const double c1 = 12.0 * a3;
  const double c3 = 30.0 * a5 - 33.0 * a3 * a3;
  const double r2 = r * r;
  Seed s;
  s.u = r * (1.0 + r2 * (a3 + r2 * a5));
  s.v = 1.0 + r2 * (3.0 * a3 + r2 * 5.0 * a5);
  // z = 1 - phi'^2 expanded directly (no cancellation).
  const double z2 = -6.0 * a3;
  const double z4 = -(9.0 * a3 * a3 + 10.0 * a5);
  const double z6 = -30.0 * a3 * a5;
  const double z8 = -25.0 * a5 * a5;
  s.z = r2 * (z2 + r2 * (z4 + r2 * (z6 + r2 * z8)));
  s.F = r2 * (c1 / 2.0 + r2 * c3 / 4.0);
  s.w = r * (c1 + r2 * c3);
  return s;
}

double rhs_ddphi(double u, double v, double z, double w) { return z / u + w * v; }

}  // namespace

BryantProfile bryant_integrate(double r_max, double tolerance) {
  if (!(r_max > 0.0)) throw Error("bryant_integrate: r_max must be positive");
  if (!(tolerance > 0.0)) throw Error("bryant_integrate: tolerance must be positive");
  if (r_max <= kLaunchR) throw Error("bryant_integrate: r_max below the launch radius");

  BryantProfile p;
  p.order_ = kTaylorOrder;
  p.tolerance_ = tolerance;

  Seed seed = tip_seed(kLaunchR);
  double r = kLaunchR;
  double u = seed.u, v = seed.v, z = seed.z, F = seed.F, w = seed.w;

  const int K = kTaylorOrder;
  while (r < r_max) {
    SolutionSeries s = expand_solution(u, v, z, F, w, K);
    // Step size from the highest retained coefficients, per-component scaled.
    double h = kHMax;
    for (int c = 0; c < 5; ++c) {
      const double scale = tolerance * std::max(1.0, std::abs(s.c[c][0]));
      const double aK = std::abs(s.c[c][K]);
      const double aK1 = std::abs(s.c[c][K - 1]);
      if (aK > 0.0) h = std::min(h, std::pow(scale / aK, 1.0 / K));
      if (aK1 > 0.0) h = std::min(h, std::pow(scale / aK1, 1.0 / (K - 1)));
    }
    h *= 0.8;
    if (h < 1e-12 * std::max(1.0, r))
      throw IntegrationFailureError("bryant_integrate: step-size underflow", r);
    if (r + h > r_max) h = r_max - r;

    BryantProfile::Node node;
    node.r = r;
    node.h = h;
    node.c = s.c;
    p.nodes_.push_back(std::move(node));

    u = horner(s.c[0], h);
    v = horner(s.c[1], h);
    z = horner(s.c[2], h);
    F = horner(s.c[3], h);
    w = horner(s.c[4], h);
    r += h;

    if (!(u > 0.0) || !(v > 0.0))
      throw IntegrationFailureError("bryant_integrate: warp factor left the positive cone", r);
    if (w > 0.0)
      throw IntegrationFailureError("bryant_integrate: potential gradient changed sign", r);
  }
  // Terminal node for dense evaluation exactly at r_max.
  BryantProfile::Node last;
  last.r = r;
  last.h = 0.0;
  last.c = expand_solution(u, v, z, F, w, K).c;
  p.nodes_.push_back(std::move(last));
  p.r_end_ = r;
  return p;
}

BryantProfile::State BryantProfile::state_at(double r) const {
  if (r < grid_min() || r > grid_max())
    throw ChartDomainError("BryantProfile: radius outside the integrated grid");
  // Last node with node.r <= r.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                             [](double value, const Node& n) { return value < n.r; });
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k > 0) --k;
  const Node& n = nodes_[k];
  const double x = r - n.r;
  State s;
  s.r = r;
  s.phi = horner(n.c[0], x);
  s.dphi = horner(n.c[1], x);
  s.z = horner(n.c[2], x);
  s.f = horner(n.c[3], x);
  s.df = horner(n.c[4], x);
  s.ddphi = rhs_ddphi(s.phi, s.dphi, s.z, s.df);
  s.ddf = 2.0 * s.ddphi / s.phi;
  return s;
}

double BryantProfile::scalar_curvature(const State& s) {
  return -4.0 * s.ddphi / s.phi + 2.0 * s.z / (s.phi * s.phi);
}

double BryantProfile::hamilton_drift() const {
  double drift = 0.0;
  for (const Node& n : nodes_) {
    State s;
    s.r = n.r;
    s.phi = n.c[0][0];
    s.dphi = n.c[1][0];
    s.z = n.c[2][0];
    s.f = n.c[3][0];
    s.df = n.c[4][0];
    s.ddphi = rhs_ddphi(s.phi, s.dphi, s.z, s.df);
    const double value = scalar_curvature(s) + s.df * s.df;
    drift = std::max(drift, std::abs(value - c0_));
  }
  return drift;
}

double BryantProfile::ode_defect() const {
  double defect = 0.0;
  for (const Node& n : nodes_) {
    if (n.h == 0.0) continue;
    const double x = 0.5 * n.h;
    const double u = horner(n.c[0], x);
    const double v = horner(n.c[1], x);
    const double z = horner(n.c[2], x);
    const double w = horner(n.c[4], x);
    const double rv = rhs_ddphi(u, v, z, w);
    const double du = horner_derivative(n.c[0], x);
    const double dv = horner_derivative(n.c[1], x);
    const double dz = horner_derivative(n.c[2], x);
    const double dF = horner_derivative(n.c[3], x);
    const double dw = horner_derivative(n.c[4], x);
    defect = std::max(defect, std::abs(du - v));
    defect = std::max(defect, std::abs(dv - rv));
    defect = std::max(defect, std::abs(dz + 2.0 * v * rv));
    defect = std::max(defect, std::abs(dF - w));
    defect = std::max(defect, std::abs(dw - 2.0 * rv / u));
  }
  return defect;
}

namespace {

class BryantModel final : public SolitonModel {
 public:
  BryantModel(std::shared_ptr<const BryantProfile> profile, BryantModelOptions opts)
      : SolitonModel("bryant", 3, 0.0, profile->hamilton_constant(), "tip r=0"),
        profile_(std::move(profile)),
        opts_(opts) {}

  MetricJet metric_jet(const ChartPoint& p, int order) const override {
    check_domain(p);
    const Taylor phi = warp_taylor(p.x[0], order);
    const Taylor sin_theta = sin_taylor(p.x[1], order);
    Taylor phi2 = phi * phi;
    Taylor zero = Taylor::constant(3, order, 0.0);
    Taylor one = Taylor::constant(3, order, 1.0);
    Taylor g_thth = phi2;
    Taylor g_phph = phi2 * (sin_theta * sin_theta);
    return MetricJet(3, order, {one, zero, zero, g_thth, zero, g_phph});
  }

  ScalarJet potential_jet(const ChartPoint& p, int order) const override {
    check_domain(p);
    SolutionSeries s = series_at(p.x[0], order);
    std::vector<double> derivs(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k > 1) fact *= k;
      derivs[k] = s.c[3][k] * (k > 1 ? fact : 1.0);
    }
    return ScalarJet(3, order, Taylor::univariate(3, order, 0, derivs));
  }

  double radial_distance(const ChartPoint& p) const override { return p.x[0]; }

  ChartPoint radial_point(double r) const override { return ChartPoint(r, M_PI / 2.0, 1.0); }

  double jet_accuracy() const override { return profile_->tolerance(); }

  const BryantProfile& profile() const { return *profile_; }

 private:
  void check_domain(const ChartPoint& p) const {
    if (p.x[0] < opts_.r_cutoff)
      throw ChartDomainError("bryant: radius below the chart cutoff");
    if (p.x[0] < profile_->grid_min() || p.x[0] > profile_->grid_max())
      throw ChartDomainError("bryant: radius outside the integrated grid");
    if (std::abs(std::sin(p.x[1])) < opts_.pole_cutoff)
      throw ChartDomainError("bryant: chart singular at the sphere poles");
  }

  SolutionSeries series_at(double r, int order) const {
    const BryantProfile::State s = profile_->state_at(r);
    return expand_solution(s.phi, s.dphi, s.z, s.f, s.df, order);
  }

  Taylor warp_taylor(double r, int order) const {
    SolutionSeries s = series_at(r, order);
    std::vector<double> derivs(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k > 1) fact *= k;
      derivs[k] = s.c[0][k] * (k > 1 ? fact : 1.0);
    }
    return Taylor::univariate(3, order, 0, derivs);
  }

  static Taylor sin_taylor(double theta, int order) {
    std::vector<double> derivs(order + 1);
    for (int k = 0; k <= order; ++k) {
      switch (k % 4) {
        case 0: derivs[k] = std::sin(theta); break;
        case 1: derivs[k] = std::cos(theta); break;
        case 2: derivs[k] = -std::sin(theta); break;
        default: derivs[k] = -std::cos(theta); break;
      }
    }
    return Taylor::univariate(3, order, 1, derivs);
  }

  std::shared_ptr<const BryantProfile> profile_;
  BryantModelOptions opts_;
};

}  // namespace

ModelPtr bryant_model(std::shared_ptr<const BryantProfile> profile,
                      const BryantModelOptions& opts) {
  return std::make_shared<BryantModel>(std::move(profile), opts);
}

void write_profile_csv(const BryantProfile& profile, std::ostream& out) {
  out << "r,phi,dphi,f,df,R,C0_check\n";
  char buf[512];
  for (std::size_t k = 0; k < profile.node_count(); ++k) {
    const auto& n = profile.node(k);
    BryantProfile::State s;
    s.r = n.r;
    s.phi = n.c[0][0];
    s.dphi = n.c[1][0];
    s.z = n.c[2][0];
    s.f = n.c[3][0];
    s.df = n.c[4][0];
    s.ddphi = rhs_ddphi(s.phi, s.dphi, s.z, s.df);
    const double R = BryantProfile::scalar_curvature(s);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.r, s.phi,
                  s.dphi, s.f, s.df, R, R + s.df * s.df);
    out << buf;
  }
}

}  // namespace soliton
