#include "solitonlab/models.hpp"

#include <cmath>
#include <limits>

#include "solitonlab/errors.hpp"

namespace soliton {

double SolitonModel::radial_distance(const ChartPoint&) const {
  throw UnsupportedModelError("radial_distance: not defined for model " + name_);
}

ChartPoint SolitonModel::radial_point(double) const {
  throw UnsupportedModelError("radial_point: not defined for model " + name_);
}

namespace {

// Jet of the 2-d cigar data at (x, y) in `nvars` chart variables (the first
// two are the cigar factor).  Shared by the cigar and the product model so
// their cigar-factor coefficients agree bit-exactly.
struct CigarTaylor {
  Taylor w;  // conformal factor 1/(1+x^2+y^2)
  Taylor f;  // potential -log(1+x^2+y^2)
};

CigarTaylor cigar_taylor(int nvars, int order, double x, double y) {
  Taylor X = Taylor::variable(nvars, order, 0, x);
  Taylor Y = Taylor::variable(nvars, order, 1, y);
  Taylor q = X * X + Y * Y + 1.0;
  CigarTaylor c{reciprocal(q), -log(q)};
  return c;
}

class CigarModel final : public SolitonModel {
 public:
  CigarModel() : SolitonModel("cigar", 2, 0.0, 4.0, "origin (x,y)=(0,0)") {}

  MetricJet metric_jet(const ChartPoint& p, int order) const override {
    CigarTaylor c = cigar_taylor(2, order, p.x[0], p.x[1]);
    Taylor zero = Taylor::constant(2, order, 0.0);
    return MetricJet(2, order, {c.w, zero, c.w});
  }

  ScalarJet potential_jet(const ChartPoint& p, int order) const override {
    return ScalarJet(2, order, cigar_taylor(2, order, p.x[0], p.x[1]).f);
  }

  double radial_distance(const ChartPoint& p) const override {
    // ds = d(rho)/sqrt(1+rho^2) integrates to arcsinh(rho).
    return std::asinh(std::hypot(p.x[0], p.x[1]));
  }

  ChartPoint radial_point(double r) const override { return ChartPoint(std::sinh(r), 0.0); }
};

class CigarCrossLineModel final : public SolitonModel {
 public:
  CigarCrossLineModel() : SolitonModel("cigarxr", 3, 0.0, 4.0, "axis rho=0") {}

  MetricJet metric_jet(const ChartPoint& p, int order) const override {
    CigarTaylor c = cigar_taylor(3, order, p.x[0], p.x[1]);
    Taylor zero = Taylor::constant(3, order, 0.0);
    Taylor one = Taylor::constant(3, order, 1.0);
    return MetricJet(3, order, {c.w, zero, zero, c.w, zero, one});
  }

  ScalarJet potential_jet(const ChartPoint& p, int order) const override {
    return ScalarJet(3, order, cigar_taylor(3, order, p.x[0], p.x[1]).f);
  }

  double radial_distance(const ChartPoint& p) const override {
    // Distance from the axis foot-point: the cigar-factor radial distance.
    return std::asinh(std::hypot(p.x[0], p.x[1]));
  }

  ChartPoint radial_point(double r) const override {
    return ChartPoint(std::sinh(r), 0.0, 0.0);
  }
};

class EuclideanModel final : public SolitonModel {
 public:
  explicit EuclideanModel(int dim)
      : SolitonModel(dim == 2 ? "euclidean2" : "euclidean", dim, 0.0, 0.0, "all points") {
    if (dim != 2 && dim != 3) throw Error("euclidean_model: dim must be 2 or 3");
  }

  MetricJet metric_jet(const ChartPoint&, int order) const override {
    Taylor zero = Taylor::constant(dim_, order, 0.0);
    Taylor one = Taylor::constant(dim_, order, 1.0);
    if (dim_ == 2) return MetricJet(2, order, {one, zero, one});
    return MetricJet(3, order, {one, zero, zero, one, zero, one});
  }

  ScalarJet potential_jet(const ChartPoint&, int order) const override {
    return ScalarJet(dim_, order, Taylor::constant(dim_, order, 0.0));
  }

  double radial_distance(const ChartPoint& p) const override {
    return std::sqrt(dot_euclid(p.x, p.x, dim_));
  }

  ChartPoint radial_point(double r) const override {
    return dim_ == 2 ? ChartPoint(r, 0.0) : ChartPoint(r, 0.0, 0.0);
  }
};

class QuadraticPotentialModel final : public SolitonModel {
 public:
  QuadraticPotentialModel()
      : SolitonModel("euclidean-quadratic", 3, 0.0, std::numeric_limits<double>::quiet_NaN(),
                     "origin", /*is_soliton=*/false) {}

  MetricJet metric_jet(const ChartPoint&, int order) const override {
    Taylor zero = Taylor::constant(3, order, 0.0);
    Taylor one = Taylor::constant(3, order, 1.0);
    return MetricJet(3, order, {one, zero, zero, one, zero, one});
  }

  ScalarJet potential_jet(const ChartPoint& p, int order) const override {
    Taylor X = Taylor::variable(3, order, 0, p.x[0]);
    Taylor Y = Taylor::variable(3, order, 1, p.x[1]);
    Taylor Z = Taylor::variable(3, order, 2, p.x[2]);
    Taylor f = (X * X + Y * Y + Z * Z) * (-0.5);
    return ScalarJet(3, order, f);
  }

  double radial_distance(const ChartPoint& p) const override {
    return std::sqrt(dot_euclid(p.x, p.x, 3));
  }

  ChartPoint radial_point(double r) const override { return ChartPoint(r, 0.0, 0.0); }
};

}  // namespace

ModelPtr cigar_model() { return std::make_shared<CigarModel>(); }

ModelPtr cigar_cross_line_model() { return std::make_shared<CigarCrossLineModel>(); }

ModelPtr euclidean_model(int dim) { return std::make_shared<EuclideanModel>(dim); }

ModelPtr quadratic_potential_model() { return std::make_shared<QuadraticPotentialModel>(); }

double radial_distance(const SolitonModel& model, const ChartPoint& p) {
  return model.radial_distance(p);
}

}  // namespace soliton
