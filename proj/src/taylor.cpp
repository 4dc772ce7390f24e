#include "solitonlab/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace soliton {

namespace {
constexpr int kPackBase = TaylorLayout::kMaxDegree + 1;

int pack(int a0, int a1, int a2) {
  return (a0 * kPackBase + a1) * kPackBase + a2;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}
}  // namespace

TaylorLayout::TaylorLayout(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  lut_.assign(kPackBase * kPackBase * kPackBase, -1);
  // Graded lexicographic enumeration.
  for (int d = 0; d <= degree; ++d) {
    for (int a0 = d; a0 >= 0; --a0) {
      for (int a1 = d - a0; a1 >= 0; --a1) {
        const int a2 = d - a0 - a1;
        if ((nvars < 2 && a1 > 0) || (nvars < 3 && a2 > 0)) continue;
        lut_[pack(a0, a1, a2)] = static_cast<int>(alpha_.size());
        alpha_.push_back({static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1),
                          static_cast<std::uint8_t>(a2)});
        alpha_deg_.push_back(d);
        alpha_fact_.push_back(factorial(a0) * factorial(a1) * factorial(a2));
      }
    }
  }
}

const TaylorLayout& TaylorLayout::get(int nvars, int degree) {
  if (nvars < 1 || nvars > kMaxVars || degree < 0 || degree > kMaxDegree)
    throw Error("TaylorLayout: unsupported nvars/degree");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<TaylorLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, degree}];
  if (!slot) slot.reset(new TaylorLayout(nvars, degree));
  return *slot;
}

int TaylorLayout::index_of(int a0, int a1, int a2) const {
  if (a0 + a1 + a2 > degree_) return -1;
  return lut_[pack(a0, a1, a2)];
}

Taylor Taylor::constant(int nvars, int degree, double value) {
  Taylor t(nvars, degree);
  t.c_[0] = value;
  return t;
}

Taylor Taylor::variable(int nvars, int degree, int var, double base) {
  Taylor t(nvars, degree);
  t.c_[0] = base;
  if (degree >= 1) {
    const int pos = t.layout_->index_of(var == 0, var == 1, var == 2);
    t.c_[pos] = 1.0;
  }
  return t;
}

Taylor Taylor::univariate(int nvars, int degree, int var, std::span<const double> derivs) {
  Taylor t(nvars, degree);
  t.exact_ = false;  // generally a truncated series
  double fact = 1.0;
  for (int k = 0; k <= degree && k < static_cast<int>(derivs.size()); ++k) {
    if (k > 0) fact *= k;
    const int pos = t.layout_->index_of(var == 0 ? k : 0, var == 1 ? k : 0, var == 2 ? k : 0);
    t.c_[pos] = derivs[k] / fact;
  }
  return t;
}

void Taylor::require_valid(int order) const {
  if (!layout_ || order > valid_)
    throw InsufficientJetOrderError(
        "Taylor: derivative of order " + std::to_string(order) +
        " requested but expansion is valid only to order " + std::to_string(valid_));
}

double Taylor::value() const {
  require_valid(0);
  return c_[0];
}

double Taylor::coeff(int a0, int a1, int a2) const {
  require_valid(a0 + a1 + a2);
  const int pos = layout_->index_of(a0, a1, a2);
  if (pos < 0) throw Error("Taylor::coeff: multi-index out of range");
  return c_[pos];
}

double Taylor::partial(int a0, int a1, int a2) const {
  return coeff(a0, a1, a2) * factorial(a0) * factorial(a1) * factorial(a2);
}

void Taylor::set_coeff(int a0, int a1, int a2, double v) {
  const int pos = layout_->index_of(a0, a1, a2);
  if (pos < 0) throw Error("Taylor::set_coeff: multi-index out of range");
  c_[pos] = v;
}

Taylor Taylor::derivative(int var) const {
  Taylor r(nvars(), degree());
  for (int pos = 0; pos < layout_->size(); ++pos) {
    const auto& a = layout_->alpha(pos);
    int b[3] = {a[0], a[1], a[2]};
    b[var] += 1;
    const int src = layout_->index_of(b[0], b[1], b[2]);
    if (src >= 0) r.c_[pos] = c_[src] * b[var];
  }
  r.exact_ = exact_;
  r.valid_ = exact_ ? degree() : valid_ - 1;
  return r;
}

Taylor Taylor::operator-() const {
  Taylor r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  for (int i = 0; i < layout_->size(); ++i) c_[i] += o.c_[i];
  valid_ = std::min(exact_ ? degree() : valid_, o.exact_ ? o.degree() : o.valid_);
  exact_ = exact_ && o.exact_;
  if (exact_) valid_ = degree();
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  for (int i = 0; i < layout_->size(); ++i) c_[i] -= o.c_[i];
  valid_ = std::min(exact_ ? degree() : valid_, o.exact_ ? o.degree() : o.valid_);
  exact_ = exact_ && o.exact_;
  if (exact_) valid_ = degree();
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Taylor operator+(Taylor a, double s) {
  a.c_[0] += s;
  return a;
}

Taylor operator-(Taylor a, double s) {
  a.c_[0] -= s;
  return a;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  const TaylorLayout& L = *a.layout_;
  Taylor r(L.nvars(), L.degree());
  const int n = L.size();
  for (int i = 0; i < n; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const auto& va = L.alpha(i);
    const int da = L.alpha_degree(i);
    for (int j = 0; j < n; ++j) {
      if (da + L.alpha_degree(j) > L.degree()) break;  // graded order: later j only grow
      const double bj = b.c_[j];
      if (bj == 0.0) continue;
      const auto& vb = L.alpha(j);
      const int pos = L.index_of(va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]);
      r.c_[pos] += ai * bj;
    }
  }
  r.exact_ = a.exact_ && b.exact_;
  r.valid_ = r.exact_ ? L.degree()
                      : std::min(a.exact_ ? a.degree() : a.valid_,
                                 b.exact_ ? b.degree() : b.valid_);
  return r;
}

Taylor reciprocal(const Taylor& a) {
  const double a0 = a.c_[0];
  if (a0 == 0.0) throw Error("Taylor: reciprocal of series with zero constant term");
  const TaylorLayout& L = *a.layout_;
  Taylor r = Taylor::constant(L.nvars(), L.degree(), 1.0 / a0);
  // Newton iteration r <- r (2 - a r); correct degree doubles each pass.
  int correct = 0;
  while (correct < L.degree()) {
    Taylor ar = a * r;
    Taylor two_minus = -ar + 2.0;
    r = r * two_minus;
    correct = 2 * correct + 1;
  }
  r.exact_ = false;
  r.valid_ = a.exact_ ? L.degree() : a.valid_;
  return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }

Taylor sqrt(const Taylor& a) {
  const double a0 = a.c_[0];
  if (a0 <= 0.0) throw Error("Taylor: sqrt needs positive constant term");
  const TaylorLayout& L = *a.layout_;
  Taylor s = Taylor::constant(L.nvars(), L.degree(), std::sqrt(a0));
  for (int it = 0; it < L.degree() + 2; ++it) {
    s = (s + a / s) * 0.5;
  }
  s.exact_ = false;
  s.valid_ = a.exact_ ? L.degree() : a.valid_;
  return s;
}

Taylor log(const Taylor& a) {
  const double a0 = a.c_[0];
  if (a0 <= 0.0) throw Error("Taylor: log needs positive constant term");
  const TaylorLayout& L = *a.layout_;
  // log(a) = log(a0) + log(1+u), u = a/a0 - 1 (no constant term).
  Taylor u = a * (1.0 / a0) - 1.0;
  Taylor acc = Taylor::constant(L.nvars(), L.degree(), std::log(a0));
  Taylor upow = u;
  for (int k = 1; k <= L.degree(); ++k) {
    acc += upow * ((k % 2 == 1 ? 1.0 : -1.0) / k);
    if (k < L.degree()) upow = upow * u;
  }
  acc.exact_ = false;
  acc.valid_ = a.exact_ ? L.degree() : a.valid_;
  return acc;
}

Taylor exp(const Taylor& a) {
  const TaylorLayout& L = *a.layout_;
  const double a0 = a.c_[0];
  Taylor u = a - a0;  // no constant term
  Taylor acc = Taylor::constant(L.nvars(), L.degree(), 1.0);
  Taylor upow = u;
  double fact = 1.0;
  for (int k = 1; k <= L.degree(); ++k) {
    fact *= k;
    acc += upow * (1.0 / fact);
    if (k < L.degree()) upow = upow * u;
  }
  acc *= std::exp(a0);
  acc.exact_ = false;
  acc.valid_ = a.exact_ ? L.degree() : a.valid_;
  return acc;
}

Taylor pow_int(const Taylor& a, int n) {
  const TaylorLayout& L = *a.layout_;
  if (n == 0) return Taylor::constant(L.nvars(), L.degree(), 1.0);
  if (n < 0) return reciprocal(pow_int(a, -n));
  Taylor r = a;
  for (int k = 1; k < n; ++k) r = r * a;
  return r;
}

}  // namespace soliton
