#pragma once

#include <array>

#include "heatcert/interval.hpp"

namespace heatcert {

namespace detail {

// Bernoulli numbers B_2 .. B_22 as exact rationals.
struct BernoulliRational {
  long long num;
  long long den;
};

inline constexpr std::array<BernoulliRational, 11> kBernoulli{{
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
    {43867, 798},
    {-174611, 330},
    {854513, 138},
}};

// Stirling terms used; the last table entry bounds the remainder.
inline constexpr int kStirlingTerms = 10;
// Arguments are shifted up to at least this value before the series is used.
inline constexpr double kStirlingShift = 12.0;

/// ln Gamma(z) for z >= kStirlingShift by the Stirling series truncated after
/// B_20. For real z > 0 the truncation error is bounded by the first omitted
/// term |B_22| / (22 * 21 * z^21).
inline Interval lgamma_stirling(const Interval& z) {
  const Interval half(0.5);
  Interval acc = (z - half) * log(z) - z + half * log(Interval(2.0) * pi());
  const Interval w = Interval(1.0) / z;
  const Interval w2 = sqr(w);
  Interval wpow = w;  // z^{-(2k-1)}
  for (int k = 1; k <= kStirlingTerms; ++k) {
    const auto& b = kBernoulli[k - 1];
    const long long scale = 2LL * k * (2LL * k - 1);
    acc = acc + rational(b.num, b.den * scale) * wpow;
    wpow = wpow * w2;
  }
  const auto& next = kBernoulli[kStirlingTerms];
  const long long next_scale = 2LL * (kStirlingTerms + 1) * (2LL * (kStirlingTerms + 1) - 1);
  const Interval bound = rational(next.num, next.den * next_scale) * wpow;
  return acc + Interval(-bound.hi(), bound.hi());
}

/// Natural interval extension of Gamma on x > 0 via Gamma(x) = Gamma(x+n)/(x(x+1)...(x+n-1)).
inline Interval gamma_extension(const Interval& x) {
  Interval z = x;
  Interval denom(1.0);
  while (z.lo() < kStirlingShift) {
    denom = denom * z;
    z = z + Interval(1.0);
  }
  return exp(lgamma_stirling(z)) / denom;
}

// The positive minimum of Gamma lies at 1.46163214496836...
inline constexpr double kGammaArgminLo = 1.4616321449;
inline constexpr double kGammaArgminHi = 1.4616321450;

}  // namespace detail

/// Enclosure of the Gamma function over an interval with lo > 0.
///
/// Gamma decreases on (0, x*] and increases on [x*, inf) where x* is its
/// positive minimizer, so only the endpoints (and x* when it is inside) matter.
inline Interval gamma(const Interval& x) {
  if (x.lo() <= 0.0) throw DomainError("gamma requires x > 0");
  const Interval at_lo = detail::gamma_extension(Interval(x.lo()));
  if (x.is_point()) return at_lo;
  const Interval at_hi = detail::gamma_extension(Interval(x.hi()));
  if (x.hi() <= detail::kGammaArgminLo) return {at_hi.lo(), at_lo.hi()};
  if (x.lo() >= detail::kGammaArgminHi) return {at_lo.lo(), at_hi.hi()};
  const Interval near_min =
      detail::gamma_extension(Interval(detail::kGammaArgminLo, detail::kGammaArgminHi));
  return {std::min({near_min.lo(), at_lo.lo(), at_hi.lo()}), std::max(at_lo.hi(), at_hi.hi())};
}

/// B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y).
inline Interval beta(const Interval& x, const Interval& y) {
  if (x.lo() <= 0.0 || y.lo() <= 0.0) throw DomainError("beta requires positive arguments");
  return gamma(x) * gamma(y) / gamma(x + y);
}

}  // namespace heatcert
