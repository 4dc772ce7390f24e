#include "solitonlab/geometry_types.hpp"

#include <cmath>

#include "solitonlab/errors.hpp"

namespace soliton {

MetricJet::MetricJet(int dim, int order, std::vector<Taylor> components)
    : dim_(dim), order_(order), comp_(std::move(components)) {
  if (dim < 2 || dim > 3) throw Error("MetricJet: dimension must be 2 or 3");
  if (order < 0 || order > 4) throw Error("MetricJet: order must be in [0,4]");
  const std::size_t expect = dim == 2 ? 3 : 6;
  if (comp_.size() != expect) throw Error("MetricJet: wrong component count");
}

int MetricJet::sym_index(int i, int j, int dim) {
  if (i > j) std::swap(i, j);
  if (dim == 2) return i == 0 ? j : 2;        // 00,01,11
  return i == 0 ? j : (i == 1 ? 2 + j : 5);   // 00,01,02,11,12,22
}

const Taylor& MetricJet::component(int i, int j) const {
  return comp_[sym_index(i, j, dim_)];
}

namespace {
// Assemble the multi-index of mixed partials from listed directions.
std::array<int, 3> multi(std::initializer_list<int> dirs) {
  std::array<int, 3> a{0, 0, 0};
  for (int d : dirs) a[d] += 1;
  return a;
}
}  // namespace

double MetricJet::g(int i, int j) const { return component(i, j).value(); }

double MetricJet::dg(int k, int i, int j) const {
  auto a = multi({k});
  return component(i, j).partial(a[0], a[1], a[2]);
}

double MetricJet::d2g(int k, int l, int i, int j) const {
  auto a = multi({k, l});
  return component(i, j).partial(a[0], a[1], a[2]);
}

double MetricJet::d3g(int k, int l, int m, int i, int j) const {
  auto a = multi({k, l, m});
  return component(i, j).partial(a[0], a[1], a[2]);
}

double MetricJet::d4g(int k, int l, int m, int n, int i, int j) const {
  auto a = multi({k, l, m, n});
  return component(i, j).partial(a[0], a[1], a[2]);
}

Mat3 MetricJet::g_matrix() const {
  Mat3 m{};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m[i][j] = g(i, j);
  return m;
}

double MetricJet::smallest_eigenvalue() const {
  return sym_eigenvalues(g_matrix(), dim_)[0];
}

ScalarJet::ScalarJet(int dim, int order, Taylor t)
    : dim_(dim), order_(order), t_(std::move(t)) {
  if (order < 0 || order > 4) throw Error("ScalarJet: order must be in [0,4]");
}

double ScalarJet::d(int i) const {
  auto a = multi({i});
  return t_.partial(a[0], a[1], a[2]);
}

double ScalarJet::d2(int i, int j) const {
  auto a = multi({i, j});
  return t_.partial(a[0], a[1], a[2]);
}

double ScalarJet::d3(int i, int j, int k) const {
  auto a = multi({i, j, k});
  return t_.partial(a[0], a[1], a[2]);
}

double ScalarJet::d4(int i, int j, int k, int l) const {
  auto a = multi({i, j, k, l});
  return t_.partial(a[0], a[1], a[2]);
}

TensorValue::TensorValue(const ChartPoint& p, int contra, int cov)
    : point(p), dim(p.dim), n_contra(contra), n_cov(cov) {
  std::size_t n = 1;
  for (int r = 0; r < rank(); ++r) n *= dim;
  data.assign(n, 0.0);
}

double TensorValue::at(std::initializer_list<int> idx) const {
  std::size_t pos = 0;
  for (int i : idx) pos = pos * dim + i;
  return data[pos];
}

double& TensorValue::at(std::initializer_list<int> idx) {
  std::size_t pos = 0;
  for (int i : idx) pos = pos * dim + i;
  return data[pos];
}

}  // namespace soliton
