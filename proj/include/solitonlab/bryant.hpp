#ifndef SOLITONLAB_BRYANT_HPP
#define SOLITONLAB_BRYANT_HPP

#include <memory>
#include <vector>

#include "solitonlab/models.hpp"

namespace soliton {

// Numerically constructed rotationally symmetric steady soliton profile:
// g = dr^2 + phi(r)^2 g_{S^2} with potential f(r), normalized so that
// R(O) = C0 = 1 and f(O) = 0.
//
// The reduced steady-soliton system (checked against the curvature pipeline
// on the warped-product ansatz in the tests):
//     radial:     -2 phi''/phi + f'' = 0
//     spherical:  -phi''/phi + (1 - phi'^2)/phi^2 + f' phi'/phi = 0
// is integrated as a first-order system in (phi, phi', z, f, f') with the
// auxiliary variable z = 1 - phi'^2 carried to avoid cancellation near the
// tip, using an adaptive Taylor-series method.  Each accepted step stores the
// solution polynomial, which doubles as the dense output; state derivatives
// of any order are regenerated algebraically from the ODE right-hand side.
class BryantProfile {
 public:
  struct State {
    double r;
    double phi, dphi, ddphi;
    double f, df, ddf;
    double z;  // 1 - dphi^2, integrated form
  };

  struct Node {
    double r;
    double h;  // step to the next node (0 for the last)
    // Taylor coefficients of (phi, dphi, z, f, df) about r, length order+1.
    std::array<std::vector<double>, 5> c;
  };

  int taylor_order() const { return order_; }
  double tolerance() const { return tolerance_; }
  double grid_min() const { return nodes_.front().r; }
  double grid_max() const { return r_end_; }
  double hamilton_constant() const { return c0_; }  // normalization record
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(std::size_t k) const { return nodes_[k]; }

  // Dense evaluation; throws ChartDomainError outside [grid_min, grid_max].
  State state_at(double r) const;

  // Scalar curvature and Hamilton identity value R + f'^2 from a state.
  static double scalar_curvature(const State& s);

  // max_k |R + f'^2 - C0| over grid nodes.
  double hamilton_drift() const;
  // max over interval midpoints of the dense-output defect |y' - F(y)|,
  // the per-interval residual of the reduced first-order system.
  double ode_defect() const;

 private:
  friend BryantProfile bryant_integrate(double r_max, double tolerance);
  std::vector<Node> nodes_;
  int order_ = 0;
  double tolerance_ = 0.0;
  double r_end_ = 0.0;
  double c0_ = 1.0;
};

// Integrates the profile from the tip series seed at r0 = 1e-4 out to r_max.
// Adaptive steps keep the local truncation error below `tolerance` (scaled
// per component).  Throws IntegrationFailureError when the warp factor
// leaves the positive cone or the step size underflows.
BryantProfile bryant_integrate(double r_max, double tolerance);

struct BryantModelOptions {
  double r_cutoff = 1e-3;       // chart-singular below this radius
  double pole_cutoff = 1e-6;    // |sin(theta)| below this is chart-singular
};

// Wraps a profile as a jet provider in the chart (r, theta, varphi):
// g = dr^2 + phi^2 dtheta^2 + phi^2 sin^2(theta) dvarphi^2.
ModelPtr bryant_model(std::shared_ptr<const BryantProfile> profile,
                      const BryantModelOptions& opts = {});

void write_profile_csv(const BryantProfile& profile, std::ostream& out);

}  // namespace soliton

#endif
