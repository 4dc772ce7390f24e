#ifndef SOLITONLAB_MODELS_HPP
#define SOLITONLAB_MODELS_HPP

#include <memory>
#include <string>

#include "solitonlab/geometry_types.hpp"

namespace soliton {

// A named provider of metric and potential jets in a fixed chart, together
// with the soliton constant mu (Ric + Hess f = mu g) and the Hamilton
// constant C0 = R + |grad f|^2 for steady models.
class SolitonModel {
 public:
  virtual ~SolitonModel() = default;

  const std::string& name() const { return name_; }
  int dimension() const { return dim_; }
  double soliton_constant() const { return mu_; }
  double hamilton_constant() const { return c0_; }
  const std::string& critical_set_description() const { return critical_set_; }
  // False for calibration fixtures that are not solitons.
  bool is_soliton() const { return is_soliton_; }

  virtual MetricJet metric_jet(const ChartPoint& p, int order) const = 0;
  virtual ScalarJet potential_jet(const ChartPoint& p, int order) const = 0;

  // Accuracy of the supplied jets: rounding-level for closed-form models,
  // the integration tolerance for numerically constructed ones.
  virtual double jet_accuracy() const { return 1e-14; }

  // Geodesic distance from the model's distinguished set (tip / origin /
  // axis foot-point).  Throws UnsupportedModelError when undefined.
  virtual double radial_distance(const ChartPoint& p) const;
  // Chart point on the model's reference radial ray at geodesic distance r.
  virtual ChartPoint radial_point(double r) const;

 protected:
  SolitonModel(std::string name, int dim, double mu, double c0, std::string critical_set,
               bool is_soliton = true)
      : name_(std::move(name)),
        dim_(dim),
        mu_(mu),
        c0_(c0),
        critical_set_(std::move(critical_set)),
        is_soliton_(is_soliton) {}

  std::string name_;
  int dim_;
  double mu_;
  double c0_;
  std::string critical_set_;
  bool is_soliton_;
};

using ModelPtr = std::shared_ptr<const SolitonModel>;

// Hamilton's cigar: g_ij = delta_ij / (1 + x^2 + y^2), f = -log(1 + x^2 + y^2).
// mu = 0, C0 = 4, critical point at the origin.
ModelPtr cigar_model();

// Product of the cigar with a flat line (chart (x, y, z)); the potential
// depends on the cigar factor only.  The known collapsed 3-d steady example.
ModelPtr cigar_cross_line_model();

// Flat R^n with f = 0 (trivial steady soliton).  dim in {2,3}.
ModelPtr euclidean_model(int dim);

// Calibration fixture, not a soliton: flat R^3 with f = -|x|^2/2, whose level
// sets are round spheres.  hamilton_constant() is NaN.
ModelPtr quadratic_potential_model();

double radial_distance(const SolitonModel& model, const ChartPoint& p);

}  // namespace soliton

#endif
