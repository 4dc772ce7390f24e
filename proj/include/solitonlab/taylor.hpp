#ifndef SOLITONLAB_TAYLOR_HPP
#define SOLITONLAB_TAYLOR_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "solitonlab/errors.hpp"

namespace soliton {

// Coefficient layout for truncated multivariate Taylor expansions:
// multi-indices alpha with |alpha| <= degree in graded lexicographic order.
// Shared immutable tables, one instance per (nvars, degree).
class TaylorLayout {
 public:
  static const TaylorLayout& get(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(alpha_.size()); }

  const std::array<std::uint8_t, 3>& alpha(int pos) const { return alpha_[pos]; }
  int alpha_degree(int pos) const { return alpha_deg_[pos]; }
  double alpha_factorial(int pos) const { return alpha_fact_[pos]; }

  // Position of a multi-index; -1 if |alpha| exceeds the degree.
  int index_of(int a0, int a1, int a2) const;

  static constexpr int kMaxVars = 3;
  static constexpr int kMaxDegree = 8;

 private:
  TaylorLayout(int nvars, int degree);
  int nvars_;
  int degree_;
  std::vector<std::array<std::uint8_t, 3>> alpha_;
  std::vector<int> alpha_deg_;
  std::vector<double> alpha_fact_;
  std::vector<int> lut_;
};

// Truncated Taylor expansion of a scalar function around a chart point.
// coeff(alpha) = (d^alpha F)(p) / alpha!.  Coefficients with |alpha| <= valid
// are exact Taylor coefficients of the represented function; positions above
// `valid` are not meaningful.  An `exact` expansion represents a polynomial,
// so differentiation does not lose validity.
class Taylor {
 public:
  Taylor() : layout_(nullptr), valid_(-1), exact_(false) {}
  Taylor(int nvars, int degree)
      : layout_(&TaylorLayout::get(nvars, degree)),
        c_(layout_->size(), 0.0),
        valid_(degree),
        exact_(true) {}

  static Taylor constant(int nvars, int degree, double value);
  // base + (x_var - base_var); `base` is the value of the variable at the point.
  static Taylor variable(int nvars, int degree, int var, double base);
  // Univariate function of chart variable `var`: derivs[k] = k-th derivative
  // at the base point, k = 0..degree.
  static Taylor univariate(int nvars, int degree, int var,
                           std::span<const double> derivs);

  int nvars() const { return layout_->nvars(); }
  int degree() const { return layout_->degree(); }
  int valid() const { return valid_; }
  bool exact() const { return exact_; }
  const TaylorLayout& layout() const { return *layout_; }

  // Value and partial derivatives (alpha! * coefficient).  Throws
  // InsufficientJetOrderError when the requested order exceeds validity.
  double value() const;
  double coeff(int a0, int a1 = 0, int a2 = 0) const;
  double partial(int a0, int a1 = 0, int a2 = 0) const;

  double coeff_at(int pos) const { return c_[pos]; }
  void set_coeff(int a0, int a1, int a2, double v);

  Taylor derivative(int var) const;

  Taylor operator-() const;
  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(double s);

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator+(Taylor a, double s);
  friend Taylor operator-(Taylor a, double s);
  friend Taylor operator+(double s, Taylor a) { return std::move(a) + s; }
  friend Taylor operator-(double s, const Taylor& a) { return -a + s; }
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);

  friend Taylor reciprocal(const Taylor& a);
  friend Taylor sqrt(const Taylor& a);
  friend Taylor log(const Taylor& a);
  friend Taylor exp(const Taylor& a);
  friend Taylor pow_int(const Taylor& a, int n);

 private:
  void require_valid(int order) const;
  const TaylorLayout* layout_;
  std::vector<double> c_;
  int valid_;
  bool exact_;
};

}  // namespace soliton

#endif
