#ifndef SOLITONLAB_LINALG_HPP
#define SOLITONLAB_LINALG_HPP

#include <array>
#include <cmath>

namespace soliton {

// Fixed-size helpers for chart-dimension (<= 3) vectors and symmetric
// matrices.  Entries beyond the active dimension stay zero.
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 vadd(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 vsub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 vscale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline double dot_euclid(const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

// g-inner product of two (contravariant) vectors.
inline double dot_g(const Mat3& g, const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += g[i][j] * a[i] * b[j];
  return s;
}

inline double norm_g(const Mat3& g, const Vec3& a, int dim) {
  return std::sqrt(dot_g(g, a, a, dim));
}

double det_sym(const Mat3& m, int dim);
Mat3 inverse_sym(const Mat3& m, int dim);

// Eigenvalues of a symmetric dim x dim matrix, ascending.  Closed-form
// (quadratic / Cardano), deterministic.
std::array<double, 3> sym_eigenvalues(const Mat3& m, int dim);

// Eigen-decomposition of a symmetric 2x2 matrix [[a,c],[c,b]]:
// eigenvalues k1 <= k2 with orthonormal eigenvectors v1, v2.
struct Eig2 {
  double k1, k2;
  std::array<double, 2> v1, v2;
};
Eig2 sym_eigen_2x2(double a, double b, double c);

}  // namespace soliton

#endif
