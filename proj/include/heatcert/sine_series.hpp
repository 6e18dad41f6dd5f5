#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcert/interval.hpp"

namespace heatcert {

/// Raised for exponents outside the implemented p = 2 nonlinearity.
class UnsupportedExponent : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Multi-index (m_1, ..., m_d); entries beyond the dimension are ignored.
using MultiIndex = std::array<int, 3>;

namespace detail {

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static double from(double v) { return v; }
  static double pi() { return std::numbers::pi; }
  static double magnitude(double v) { return std::fabs(v); }
  static Interval enclose(double v) { return Interval(v); }
};

template <>
struct ScalarOps<Interval> {
  static Interval from(double v) { return Interval(v); }
  static Interval pi() { return heatcert::pi(); }
  static Interval magnitude(const Interval& v) { return abs(v); }
  static Interval enclose(const Interval& v) { return v; }
};

inline std::size_t ipow(std::size_t base, int d) {
  std::size_t r = 1;
  for (int k = 0; k < d; ++k) r *= base;
  return r;
}

inline void check_shape(int dim, int order) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (order < 1) throw std::invalid_argument("spectral order must be positive");
}

}  // namespace detail

/// Finite sine expansion sum_m a_m psi_m on (0,1)^d with
/// psi_m(x) = prod_k sin(m_k pi x_k) and 1 <= m_k <= N.
///
/// Coefficients are stored densely with m_1 as the slowest index.
template <class S>
class SineSeries {
 public:
  using value_type = S;

  SineSeries(int dim, int order)
      : dim_(dim), order_(order), coeffs_((detail::check_shape(dim, order), detail::ipow(order, dim)), S(0.0)) {}

  SineSeries(int dim, int order, std::vector<S> coeffs) : SineSeries(dim, order) {
    if (coeffs.size() != coeffs_.size()) throw std::invalid_argument("coefficient count does not match N^d");
    coeffs_ = std::move(coeffs);
  }

  /// amplitude * psi_m
  static SineSeries mode(int dim, int order, const MultiIndex& m, S amplitude) {
    SineSeries f(dim, order);
    f.at(m) = amplitude;
    return f;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return coeffs_.size(); }

  S& operator[](std::size_t flat) { return coeffs_[flat]; }
  const S& operator[](std::size_t flat) const { return coeffs_[flat]; }
  S& at(const MultiIndex& m) { return coeffs_[flat(m)]; }
  const S& at(const MultiIndex& m) const { return coeffs_[flat(m)]; }

  std::span<const S> coefficients() const { return coeffs_; }
  std::span<S> coefficients() { return coeffs_; }

  std::size_t flat(const MultiIndex& m) const {
    std::size_t f = 0;
    for (int k = 0; k < dim_; ++k) {
      if (m[k] < 1 || m[k] > order_) throw std::out_of_range("multi-index outside 1..N");
      f = f * order_ + static_cast<std::size_t>(m[k] - 1);
    }
    return f;
  }

  MultiIndex index(std::size_t flat) const {
    MultiIndex m{1, 1, 1};
    for (int k = dim_ - 1; k >= 0; --k) {
      m[k] = static_cast<int>(flat % order_) + 1;
      flat /= order_;
    }
    return m;
  }

  SineSeries& operator+=(const SineSeries& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = coeffs_[i] + o.coeffs_[i];
    return *this;
  }
  SineSeries& operator-=(const SineSeries& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = coeffs_[i] - o.coeffs_[i];
    return *this;
  }
  SineSeries& operator*=(const S& s) {
    for (auto& c : coeffs_) c = c * s;
    return *this;
  }

  friend SineSeries operator+(SineSeries a, const SineSeries& b) { return a += b; }
  friend SineSeries operator-(SineSeries a, const SineSeries& b) { return a -= b; }
  friend SineSeries operator*(SineSeries a, const S& s) { return a *= s; }
  friend SineSeries operator*(const S& s, SineSeries a) { return a *= s; }

  void check_compatible(const SineSeries& o) const {
    if (o.dim_ != dim_ || o.order_ != order_) throw std::invalid_argument("sine series shapes differ");
  }

 private:
  int dim_;
  int order_;
  std::vector<S> coeffs_;
};

/// Finite cosine expansion sum_j c_j prod_k cos(j_k pi x_k) with
/// 0 <= j_k <= 2N. Products of two order-N sine series live here exactly.
template <class S>
class CosineSeries {
 public:
  CosineSeries(int dim, int order)
      : dim_(dim), order_(order), coeffs_((detail::check_shape(dim, order), detail::ipow(2 * order + 1, dim)), S(0.0)) {}

  int dim() const { return dim_; }
  /// Order of the generating sine series; frequencies run over 0..2N.
  int order() const { return order_; }
  int extent() const { return 2 * order_ + 1; }
  std::size_t size() const { return coeffs_.size(); }

  S& operator[](std::size_t flat) { return coeffs_[flat]; }
  const S& operator[](std::size_t flat) const { return coeffs_[flat]; }

  std::size_t flat(const MultiIndex& j) const {
    std::size_t f = 0;
    for (int k = 0; k < dim_; ++k) f = f * extent() + static_cast<std::size_t>(j[k]);
    return f;
  }

  MultiIndex index(std::size_t flat) const {
    MultiIndex j{0, 0, 0};
    for (int k = dim_ - 1; k >= 0; --k) {
      j[k] = static_cast<int>(flat % extent());
      flat /= extent();
    }
    return j;
  }

  std::span<const S> coefficients() const { return coeffs_; }

  CosineSeries& operator+=(const CosineSeries& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = coeffs_[i] + o.coeffs_[i];
    return *this;
  }
  CosineSeries& operator*=(const S& s) {
    for (auto& c : coeffs_) c = c * s;
    return *this;
  }
  friend CosineSeries operator+(CosineSeries a, const CosineSeries& b) { return a += b; }
  friend CosineSeries operator*(CosineSeries a, const S& s) { return a *= s; }

 private:
  int dim_;
  int order_;
  std::vector<S> coeffs_;
};

inline SineSeries<Interval> to_interval(const SineSeries<double>& f) {
  std::vector<Interval> c;
  c.reserve(f.size());
  for (double v : f.coefficients()) c.emplace_back(v);
  return {f.dim(), f.order(), std::move(c)};
}

inline const SineSeries<Interval>& to_interval(const SineSeries<Interval>& f) { return f; }

/// Midpoints of an interval series.
inline SineSeries<double> to_double(const SineSeries<Interval>& f) {
  std::vector<double> c;
  c.reserve(f.size());
  for (const auto& v : f.coefficients()) c.push_back(v.mid());
  return {f.dim(), f.order(), std::move(c)};
}

// ---------------------------------------------------------------------------
// One-dimensional closed forms.

/// Integral over (0,1) of cos(j pi x) sin(m pi x), m >= 1, j >= 0.
/// Equals 2m / (pi (m^2 - j^2)) when m + j is odd and vanishes otherwise.
template <class S>
S cos_sin_integral(int j, int m) {
  if ((m + j) % 2 == 0) return S(0.0);
  const double num = 2.0 * m;
  const double den = static_cast<double>(m) * m - static_cast<double>(j) * j;
  return S(num) / S(den) / detail::ScalarOps<S>::pi();
}

/// Integral over (0,1) of sin(a pi x) sin(b pi x) sin(c pi x) for a, b, c >= 1.
template <class S>
S triple_sine_integral(int a, int b, int c) {
  const int diff = a > b ? a - b : b - a;
  return S(0.5) * (cos_sin_integral<S>(diff, c) - cos_sin_integral<S>(a + b, c));
}

// ---------------------------------------------------------------------------
// Norms.

/// ||f||_{L^2} = (2^{-d} sum a_m^2)^{1/2}.
template <class S>
Interval l2_norm(const SineSeries<S>& f) {
  Interval sum(0.0);
  for (const auto& a : f.coefficients()) sum = sum + sqr(detail::ScalarOps<S>::enclose(a));
  return sqrt(sum * Interval(std::ldexp(1.0, -f.dim())));
}

/// L^2 norm of a cosine expansion; each nonzero frequency contributes a factor 1/2.
template <class S>
Interval l2_norm(const CosineSeries<S>& g) {
  Interval sum(0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const MultiIndex j = g.index(i);
    int nonzero = 0;
    for (int k = 0; k < g.dim(); ++k) nonzero += j[k] != 0;
    sum = sum + sqr(detail::ScalarOps<S>::enclose(g[i])) * Interval(std::ldexp(1.0, -nonzero));
  }
  return sqrt(sum);
}

/// Upper bound of ||f||_{L^infty} by the l^1 norm of the coefficients.
template <class S>
Interval linf_bound(const SineSeries<S>& f) {
  Interval sum(0.0);
  for (const auto& a : f.coefficients()) sum = sum + abs(detail::ScalarOps<S>::enclose(a));
  return {0.0, sum.hi()};
}

// ---------------------------------------------------------------------------
// Linear operators.

/// Delta psi_m = -pi^2 |m|^2 psi_m.
template <class S>
SineSeries<S> laplacian(const SineSeries<S>& f) {
  SineSeries<S> out(f.dim(), f.order());
  const S pi2 = detail::ScalarOps<S>::pi() * detail::ScalarOps<S>::pi();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const MultiIndex m = f.index(i);
    int norm2 = 0;
    for (int k = 0; k < f.dim(); ++k) norm2 += m[k] * m[k];
    out[i] = -(pi2 * S(static_cast<double>(norm2))) * f[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products.

/// Exact cosine expansion of f * g via sin a sin b = (cos(a-b) - cos(a+b)) / 2 per axis.
template <class S>
CosineSeries<S> product(const SineSeries<S>& f, const SineSeries<S>& g) {
  f.check_compatible(g);
  const int d = f.dim();
  CosineSeries<S> out(d, f.order());
  const S scale(std::ldexp(1.0, -d));
  const unsigned corners = 1u << d;
  for (std::size_t ia = 0; ia < f.size(); ++ia) {
    if (f[ia] == S(0.0)) continue;
    const MultiIndex a = f.index(ia);
    const S fa = f[ia] * scale;
    for (std::size_t ib = 0; ib < g.size(); ++ib) {
      if (g[ib] == S(0.0)) continue;
      const MultiIndex b = g.index(ib);
      const S w = fa * g[ib];
      for (unsigned corner = 0; corner < corners; ++corner) {
        MultiIndex j{0, 0, 0};
        bool negative = false;
        for (int k = 0; k < d; ++k) {
          if (corner & (1u << k)) {
            j[k] = a[k] + b[k];
            negative = !negative;
          } else {
            j[k] = a[k] > b[k] ? a[k] - b[k] : b[k] - a[k];
          }
        }
        S& slot = out[out.flat(j)];
        slot = negative ? slot - w : slot + w;
      }
    }
  }
  return out;
}

/// L^2 inner products (g, psi_m) for all 1 <= m_k <= order, by contracting
/// one axis at a time with the 1-D table of cos_sin_integral.
template <class S>
SineSeries<S> sine_projection(const CosineSeries<S>& g, int order) {
  const int d = g.dim();
  const int in = g.extent();
  std::vector<S> table(static_cast<std::size_t>(order) * in, S(0.0));
  for (int m = 1; m <= order; ++m)
    for (int j = 0; j < in; ++j) table[(m - 1) * in + j] = cos_sin_integral<S>(j, m);

  std::vector<S> data(g.coefficients().begin(), g.coefficients().end());
  std::array<std::size_t, 3> ext{1, 1, 1};
  for (int k = 0; k < d; ++k) ext[k] = in;
  for (int axis = 0; axis < d; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (int k = 0; k < axis; ++k) outer *= ext[k];
    for (int k = axis + 1; k < d; ++k) inner *= ext[k];
    std::vector<S> next(outer * order * inner, S(0.0));
    for (std::size_t o = 0; o < outer; ++o)
      for (int m = 0; m < order; ++m)
        for (int j = 0; j < in; ++j) {
          const S& t = table[m * in + j];
          if (t == S(0.0)) continue;
          const std::size_t src = (o * in + j) * inner;
          const std::size_t dst = (o * order + m) * inner;
          for (std::size_t i = 0; i < inner; ++i) next[dst + i] = next[dst + i] + t * data[src + i];
        }
    data = std::move(next);
    ext[axis] = order;
  }
  return {d, order, std::move(data)};
}

/// ||f g||_{L^2}, exact up to outward rounding.
template <class S>
Interval product_l2_norm(const SineSeries<S>& f, const SineSeries<S>& g) {
  return l2_norm(product(to_interval(f), to_interval(g)));
}

/// Coefficients of the L^2 projection of f^p onto V_N: 2^d (f^p, psi_m).
template <class S>
SineSeries<S> galerkin_power(const SineSeries<S>& f, int p, int order) {
  if (p != 2) throw UnsupportedExponent("galerkin_power supports p = 2 only, got p = " + std::to_string(p));
  SineSeries<S> out = sine_projection(product(f, f), order);
  out *= S(std::ldexp(1.0, f.dim()));
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation (diagnostics and tests).

inline double evaluate(const SineSeries<double>& f, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const MultiIndex m = f.index(i);
    double v = f[i];
    for (int k = 0; k < f.dim(); ++k) v *= std::sin(m[k] * std::numbers::pi * x[k]);
    sum += v;
  }
  return sum;
}

}  // namespace heatcert
