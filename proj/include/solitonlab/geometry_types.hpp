#ifndef SOLITONLAB_GEOMETRY_TYPES_HPP
#define SOLITONLAB_GEOMETRY_TYPES_HPP

#include <array>
#include <initializer_list>
#include <vector>

#include "solitonlab/linalg.hpp"
#include "solitonlab/taylor.hpp"

namespace soliton {

// A point in a single coordinate chart of dimension 2 or 3.
struct ChartPoint {
  int dim = 3;
  Vec3 x{0.0, 0.0, 0.0};

  ChartPoint() = default;
  ChartPoint(double x0, double x1) : dim(2), x{x0, x1, 0.0} {}
  ChartPoint(double x0, double x1, double x2) : dim(3), x{x0, x1, x2} {}
  static ChartPoint of_dim(int d, const Vec3& v) {
    ChartPoint p;
    p.dim = d;
    p.x = v;
    if (d == 2) p.x[2] = 0.0;
    return p;
  }
};

// Metric components and their partial derivatives up to `order` at one chart
// point, stored as truncated Taylor expansions of each component g_ij.
// Symmetry in the differentiation indices is automatic in this representation.
class MetricJet {
 public:
  MetricJet(int dim, int order, std::vector<Taylor> components);

  int dim() const { return dim_; }
  int order() const { return order_; }

  static int sym_index(int i, int j, int dim);
  const Taylor& component(int i, int j) const;

  double g(int i, int j) const;
  double dg(int k, int i, int j) const;              // d_k g_ij
  double d2g(int k, int l, int i, int j) const;      // d_k d_l g_ij
  double d3g(int k, int l, int m, int i, int j) const;
  double d4g(int k, int l, int m, int n, int i, int j) const;

  Mat3 g_matrix() const;
  double smallest_eigenvalue() const;

 private:
  int dim_;
  int order_;
  std::vector<Taylor> comp_;  // packed upper triangle, i <= j
};

// A scalar function's jet at a chart point (value and partials to `order`).
class ScalarJet {
 public:
  ScalarJet(int dim, int order, Taylor t);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const Taylor& taylor() const { return t_; }

  double value() const { return t_.value(); }
  double d(int i) const;
  double d2(int i, int j) const;
  double d3(int i, int j, int k) const;
  double d4(int i, int j, int k, int l) const;

 private:
  int dim_;
  int order_;
  Taylor t_;
};

// Pointwise tensor components in chart coordinates.  Index layout is
// row-major over the indices in the order documented by each operation,
// contravariant slots first.
struct TensorValue {
  ChartPoint point;
  int dim = 3;
  int n_contra = 0;
  int n_cov = 0;
  std::vector<double> data;

  TensorValue() = default;
  TensorValue(const ChartPoint& p, int contra, int cov);

  int rank() const { return n_contra + n_cov; }
  double at(std::initializer_list<int> idx) const;
  double& at(std::initializer_list<int> idx);
};

}  // namespace soliton

#endif
