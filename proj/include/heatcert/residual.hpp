#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "heatcert/approx.hpp"
#include "heatcert/interval.hpp"
#include "heatcert/sine_series.hpp"

namespace heatcert {

/// Which right-hand side the defect is measured against.
enum class Nonlinearity { quadratic, none };

namespace detail {

/// A function on the cube written as a sine part plus a cosine part.
struct MixedSeries {
  SineSeries<Interval> sine;
  CosineSeries<Interval> cosine;
};

inline Interval sine_inner(const SineSeries<Interval>& f, const SineSeries<Interval>& g) {
  Interval s(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s = s + f[i] * g[i];
  return s * Interval(std::ldexp(1.0, -f.dim()));
}

inline Interval cosine_inner(const CosineSeries<Interval>& f, const CosineSeries<Interval>& g) {
  Interval s(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const MultiIndex j = f.index(i);
    int nonzero = 0;
    for (int k = 0; k < f.dim(); ++k) nonzero += j[k] != 0;
    s = s + f[i] * g[i] * Interval(std::ldexp(1.0, -nonzero));
  }
  return s;
}

/// (f, g) in L^2 for a sine series f and a cosine series g given as its sine projection.
inline Interval cross_inner(const SineSeries<Interval>& f, const SineSeries<Interval>& g_projected) {
  Interval s(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s = s + f[i] * g_projected[i];
  return s;
}

/// Coefficients q_0..q_4 of ||R(s)||^2 in the local time s in [0,1] on J_i.
inline std::array<Interval, 5> residual_square_polynomial(const ApproxSolution& omega, std::size_t i,
                                                          Nonlinearity nonlinearity) {
  if (i < 1 || i > omega.intervals()) throw std::out_of_range("interval index outside 1..n");
  const int d = omega.dim();
  const int n = omega.order();
  const SineSeries<Interval> a = to_interval(omega.snapshot(i - 1));
  const SineSeries<Interval> e = to_interval(omega.snapshot(i)) - a;
  const SineSeries<Interval> dt = time_derivative_enclosure(omega, i);

  // R(s) = R_0 + s R_1 + s^2 R_2.
  std::array<MixedSeries, 3> r{MixedSeries{dt - laplacian(a), CosineSeries<Interval>(d, n)},
                               MixedSeries{SineSeries<Interval>(d, n) - laplacian(e), CosineSeries<Interval>(d, n)},
                               MixedSeries{SineSeries<Interval>(d, n), CosineSeries<Interval>(d, n)}};
  if (nonlinearity == Nonlinearity::quadratic) {
    r[0].cosine = product(a, a) * Interval(-1.0);
    r[1].cosine = product(a, e) * Interval(-2.0);
    r[2].cosine = product(e, e) * Interval(-1.0);
  }
  std::array<SineSeries<Interval>, 3> projected{sine_projection(r[0].cosine, n), sine_projection(r[1].cosine, n),
                                                sine_projection(r[2].cosine, n)};

  std::array<Interval, 5> q{Interval(0.0), Interval(0.0), Interval(0.0), Interval(0.0), Interval(0.0)};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const Interval g = sine_inner(r[j].sine, r[k].sine) + cross_inner(r[j].sine, projected[k]) +
                         cross_inner(r[k].sine, projected[j]) + cosine_inner(r[j].cosine, r[k].cosine);
      q[j + k] = q[j + k] + g;
    }
  return q;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

/// Upper bound of a degree-4 polynomial on [0,1] from Bernstein coefficients on equal sub-intervals.
inline double polynomial_upper_bound(const std::array<Interval, 5>& q, int pieces) {
  constexpr int deg = 4;
  double best = -INFINITY;
  for (int piece = 0; piece < pieces; ++piece) {
    const Interval s0 = rational(piece, pieces);
    const Interval h = rational(1, pieces);
    // Taylor shift: r(u) = q(s0 + h u).
    std::array<Interval, deg + 1> r;
    for (int m = 0; m <= deg; ++m) {
      Interval c(0.0);
      for (int k = m; k <= deg; ++k) c = c + q[k] * Interval(binomial(k, m)) * pow(s0, k - m);
      r[m] = c * pow(h, m);
    }
    for (int k = 0; k <= deg; ++k) {
      Interval b(0.0);
      for (int m = 0; m <= k; ++m) b = b + r[m] * rational(static_cast<long long>(binomial(k, m)),
                                                               static_cast<long long>(binomial(deg, m)));
      best = std::max(best, b.hi());
    }
  }
  return best;
}

}  // namespace detail

/// Upper bound delta_i of sup over J_i of ||d omega/dt - Delta omega - omega^2||_{L^2}.
///
/// On J_i the defect is a quadratic polynomial in the local time with
/// trigonometric coefficients of frequency up to 2N, so its squared norm is an
/// exact quartic; its maximum is bounded with Bernstein coefficients.
inline Interval delta_bound(const ApproxSolution& omega, std::size_t i,
                            Nonlinearity nonlinearity = Nonlinearity::quadratic, int pieces = 8) {
  const auto q = detail::residual_square_polynomial(omega, i, nonlinearity);
  const double upper = detail::polynomial_upper_bound(q, pieces);
  if (upper <= 0.0) return Interval(0.0);
  return {0.0, sqrt(Interval(upper)).hi()};
}

}  // namespace heatcert
