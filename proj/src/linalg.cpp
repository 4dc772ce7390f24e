#include "solitonlab/linalg.hpp"

#include <algorithm>

#include "solitonlab/errors.hpp"

namespace soliton {

double det_sym(const Mat3& m, int dim) {
  if (dim == 1) return m[0][0];
  if (dim == 2) return m[0][0] * m[1][1] - m[0][1] * m[0][1];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[1][2]) -
         m[0][1] * (m[0][1] * m[2][2] - m[1][2] * m[0][2]) +
         m[0][2] * (m[0][1] * m[1][2] - m[1][1] * m[0][2]);
}

Mat3 inverse_sym(const Mat3& m, int dim) {
  const double det = det_sym(m, dim);
  if (det == 0.0) throw DegenerateMetricError("inverse_sym: singular matrix");
  Mat3 r{};
  const double id = 1.0 / det;
  if (dim == 1) {
    r[0][0] = id;
  } else if (dim == 2) {
    r[0][0] = m[1][1] * id;
    r[1][1] = m[0][0] * id;
    r[0][1] = r[1][0] = -m[0][1] * id;
  } else {
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[1][2]) * id;
    r[0][1] = (m[0][2] * m[1][2] - m[0][1] * m[2][2]) * id;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[0][2]) * id;
    r[1][2] = (m[0][1] * m[0][2] - m[0][0] * m[1][2]) * id;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[0][1]) * id;
    r[1][0] = r[0][1];
    r[2][0] = r[0][2];
    r[2][1] = r[1][2];
  }
  return r;
}

std::array<double, 3> sym_eigenvalues(const Mat3& m, int dim) {
  if (dim == 1) return {m[0][0], 0.0, 0.0};
  if (dim == 2) {
    const double tr = m[0][0] + m[1][1];
    const double d = (m[0][0] - m[1][1]) * 0.5;
    const double s = std::sqrt(d * d + m[0][1] * m[0][1]);
    return {tr * 0.5 - s, tr * 0.5 + s, 0.0};
  }
  // Symmetric 3x3 via the trigonometric form of Cardano's method.
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  Mat3 b = m;
  for (int i = 0; i < 3; ++i) b[i][i] -= q;
  const double p2 = (b[0][0] * b[0][0] + b[1][1] * b[1][1] + b[2][2] * b[2][2] +
                     2.0 * (b[0][1] * b[0][1] + b[0][2] * b[0][2] + b[1][2] * b[1][2])) /
                    6.0;
  const double p = std::sqrt(std::max(p2, 0.0));
  if (p == 0.0) return {q, q, q};
  const double detb = det_sym(b, 3);
  double r = detb / (2.0 * p * p * p);
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> ev{e3, e2, e1};
  std::sort(ev.begin(), ev.end());
  return ev;
}

Eig2 sym_eigen_2x2(double a, double b, double c) {
  Eig2 e;
  const double mean = (a + b) * 0.5;
  const double diff = (a - b) * 0.5;
  const double s = std::sqrt(diff * diff + c * c);
  e.k1 = mean - s;
  e.k2 = mean + s;
  // Eigenvector for k2: pick the numerically better of (c, k2-a), (k2-b, c).
  double vx, vy;
  const double n1 = std::hypot(c, e.k2 - a);
  const double n2 = std::hypot(e.k2 - b, c);
  if (n2 >= n1) {
    vx = e.k2 - b;
    vy = c;
  } else {
    vx = c;
    vy = e.k2 - a;
  }
  double n = std::hypot(vx, vy);
  if (n == 0.0) {  // already diagonal and degenerate
    vx = 1.0;
    vy = 0.0;
    n = 1.0;
  }
  e.v2 = {vx / n, vy / n};
  e.v1 = {-e.v2[1], e.v2[0]};
  return e;
}

}  // namespace soliton
