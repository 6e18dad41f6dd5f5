#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace heatcert {

/// Raised when an operation is applied outside its mathematical domain
/// (division by an interval containing zero, log of a non-positive value,
/// overflow to infinity, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

inline double checked(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite result");
  return x;
}

// Below this magnitude the fma-based error term of a product or quotient may
// itself be rounded, so we fall back to blind one-ulp nudging.
inline constexpr double kTiny = 0x1p-960;

/// Lower/upper floating-point bounds of an exactly defined real.
struct Bracket {
  double lo;
  double hi;
};

// Round-to-nearest result plus the sign of the exact error gives directed
// rounding without touching the FPU mode.
inline Bracket from_error(double r, double err) {
  if (err > 0) return {r, next_up(r)};
  if (err < 0) return {next_down(r), r};
  return {r, r};
}

inline Bracket add(double a, double b) {
  const double s = checked(a + b, "add");
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return from_error(s, err);
}

inline Bracket sub(double a, double b) { return add(a, -b); }

inline Bracket mul(double a, double b) {
  const double p = checked(a * b, "mul");
  if (p == 0.0) {
    if (a == 0.0 || b == 0.0) return {0.0, 0.0};
    return {next_down(0.0), next_up(0.0)};
  }
  if (std::fabs(p) < kTiny) return {next_down(p), next_up(p)};
  return from_error(p, std::fma(a, b, -p));
}

inline Bracket div(double a, double b) {
  const double q = checked(a / b, "div");
  if (q == 0.0) {
    if (a == 0.0) return {0.0, 0.0};
    return {next_down(0.0), next_up(0.0)};
  }
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return {next_down(q), next_up(q)};
  // a - q*b is exact; exact quotient exceeds q iff (a - q*b)/b > 0.
  const double r = std::fma(-q, b, a);
  return from_error(q, b > 0 ? r : -r);
}

inline Bracket sqrt(double x) {
  const double s = std::sqrt(x);
  if (s == 0.0) return {0.0, 0.0};
  if (x < kTiny) return {std::max(0.0, next_down(s)), next_up(s)};
  return from_error(s, std::fma(-s, s, x));
}

}  // namespace detail

/// Closed real interval [lo, hi] with outward-rounded endpoints.
///
/// Every operation returns an interval that contains the exact image of the
/// operands. Endpoints are always finite; empty and unbounded intervals are
/// not representable.
class Interval {
 public:
  constexpr Interval() = default;

  /// Degenerate interval at an exactly representable value.
  explicit Interval(double v) : lo_(v), hi_(v) { validate(); }

  Interval(double lo, double hi) : lo_(lo), hi_(hi) { validate(); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Midpoint rounded to nearest; not guaranteed to lie at the exact center.
  double mid() const { return lo_ == hi_ ? lo_ : 0.5 * lo_ + 0.5 * hi_; }
  double width() const { return detail::sub(hi_, lo_).hi; }
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const {
    if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
    return std::min(std::fabs(lo_), std::fabs(hi_));
  }

  bool is_point() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }

  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }
  Interval& operator/=(const Interval& o) { return *this = *this / o; }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return {detail::add(a.lo_, b.lo_).lo, detail::add(a.hi_, b.hi_).hi};
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return {detail::sub(a.lo_, b.hi_).lo, detail::sub(a.hi_, b.lo_).hi};
  }
  friend Interval operator-(const Interval& a) { return {-a.hi_, -a.lo_}; }

  friend Interval operator*(const Interval& a, const Interval& b) {
    const detail::Bracket p1 = detail::mul(a.lo_, b.lo_);
    const detail::Bracket p2 = detail::mul(a.lo_, b.hi_);
    const detail::Bracket p3 = detail::mul(a.hi_, b.lo_);
    const detail::Bracket p4 = detail::mul(a.hi_, b.hi_);
    return {std::min({p1.lo, p2.lo, p3.lo, p4.lo}), std::max({p1.hi, p2.hi, p3.hi, p4.hi})};
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DomainError("division by an interval containing zero");
    const detail::Bracket q1 = detail::div(a.lo_, b.lo_);
    const detail::Bracket q2 = detail::div(a.lo_, b.hi_);
    const detail::Bracket q3 = detail::div(a.hi_, b.lo_);
    const detail::Bracket q4 = detail::div(a.hi_, b.hi_);
    return {std::min({q1.lo, q2.lo, q3.lo, q4.lo}), std::max({q1.hi, q2.hi, q3.hi, q4.hi})};
  }

  friend Interval operator+(const Interval& a, double b) { return a + Interval(b); }
  friend Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
  friend Interval operator-(const Interval& a, double b) { return a - Interval(b); }
  friend Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
  friend Interval operator*(const Interval& a, double b) { return a * Interval(b); }
  friend Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
  friend Interval operator/(const Interval& a, double b) { return a / Interval(b); }
  friend Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

  friend bool operator==(const Interval& a, const Interval& b) = default;

  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    const auto prec = os.precision(17);
    os << '[' << x.lo_ << ", " << x.hi_ << ']';
    os.precision(prec);
    return os;
  }

 private:
  void validate() const {
    if (!std::isfinite(lo_) || !std::isfinite(hi_))
      throw DomainError("interval endpoints must be finite");
    if (!(lo_ <= hi_)) throw DomainError("interval requires lo <= hi");
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline Interval intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) throw DomainError("empty intersection");
  return {lo, hi};
}

/// Elementwise maximum: encloses {max(x, y) : x in a, y in b}.
inline Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

inline Interval abs(const Interval& a) {
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return -a;
  return {0.0, a.mag()};
}

inline Interval sqr(const Interval& a) {
  const Interval m = abs(a);
  return {detail::mul(m.lo(), m.lo()).lo, detail::mul(m.hi(), m.hi()).hi};
}

inline Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0) throw DomainError("sqrt of negative values");
  return {detail::sqrt(a.lo()).lo, detail::sqrt(a.hi()).hi};
}

/// Enclosure of pi: the double nearest pi lies below it.
inline Interval pi() {
  constexpr double p = 3.141592653589793115997963468544185161590576171875;
  return {p, detail::next_up(p)};
}

/// Enclosure of ln 2: the double nearest ln 2 lies below it.
inline Interval ln2() {
  constexpr double l = 0.69314718055994528622676398299518041312694549560546875;
  return {l, detail::next_up(l)};
}

namespace detail {

// Taylor polynomial of exp on |r| <= 0.35, degree 20. The Lagrange remainder
// is at most 0.35^21/21! * e^0.35 < 1e-29.
inline constexpr int kExpDegree = 20;
inline constexpr double kExpRemainder = 1e-28;
inline constexpr double kExpReduced = 0.35;

inline Interval exp_taylor(const Interval& r, bool minus_one) {
  if (r.mag() > kExpReduced) throw std::logic_error("exp_taylor: argument not reduced");
  Interval p(1.0);
  for (int j = kExpDegree; j >= 2; --j) p = Interval(1.0) + r * p / Interval(static_cast<double>(j));
  // p = sum_{k>=0} r^k/(k+1)!, so r*p = exp(r) - 1.
  Interval em1 = r * p;
  if (r.lo() != 0.0 || r.hi() != 0.0)
    em1 = em1 + Interval(-kExpRemainder, kExpRemainder);
  return minus_one ? em1 : Interval(1.0) + em1;
}

inline Interval scale_pow2(const Interval& x, int k) {
  double lo = std::ldexp(x.lo(), k);
  double hi = std::ldexp(x.hi(), k);
  if (!std::isfinite(hi) || !std::isfinite(lo)) throw DomainError("exp: overflow");
  // ldexp is exact unless the result is subnormal.
  if (std::fabs(lo) < 0x1p-1000) lo = std::max(0.0, next_down(lo));
  if (std::fabs(hi) < 0x1p-1000) hi = next_up(hi);
  return {lo, hi};
}

/// Rigorous enclosure of e^x for a double x.
inline Interval exp_point(double x) {
  if (x == 0.0) return Interval(1.0);
  if (x > 709.0) throw DomainError("exp: overflow");
  if (x < -744.0) return {0.0, std::numeric_limits<double>::denorm_min()};
  const double k = std::nearbyint(x / 0.6931471805599453);
  const Interval r = Interval(x) - Interval(k) * ln2();
  return scale_pow2(exp_taylor(r, false), static_cast<int>(k));
}

inline Interval expm1_point(double x) {
  if (std::fabs(x) < kExpReduced) return exp_taylor(Interval(x), true);
  return exp_point(x) - Interval(1.0);
}

/// Rigorous enclosure of ln x. The libm value is widened until the rigorous
/// exponential certifies it brackets x.
inline Interval log_point(double x) {
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
  if (x == 1.0) return Interval(0.0);
  const double y = std::log(x);
  double gap = 2.0 * (next_up(std::fabs(y)) - std::fabs(y));
  for (int attempt = 0; attempt < 80; ++attempt, gap *= 4.0) {
    const double lo = sub(y, gap).lo;
    const double hi = add(y, gap).hi;
    if (exp_point(lo).hi() <= x && exp_point(hi).lo() >= x) return {lo, hi};
  }
  throw std::logic_error("log: enclosure could not be certified");
}

// a^n for a >= 0 with directed rounding.
inline Bracket pow_nonneg(double a, unsigned n) {
  Bracket r{1.0, 1.0};
  for (unsigned i = 0; i < n; ++i) r = {mul(r.lo, a).lo, mul(r.hi, a).hi};
  return r;
}

}  // namespace detail

inline Interval exp(const Interval& a) {
  return {detail::exp_point(a.lo()).lo(), detail::exp_point(a.hi()).hi()};
}

inline Interval expm1(const Interval& a) {
  return {detail::expm1_point(a.lo()).lo(), detail::expm1_point(a.hi()).hi()};
}

inline Interval log(const Interval& a) {
  if (a.lo() <= 0.0) throw DomainError("log requires a positive interval");
  return {detail::log_point(a.lo()).lo(), detail::log_point(a.hi()).hi()};
}

/// Integer power; handles signs and even powers of zero-straddling intervals.
inline Interval pow(const Interval& a, int n) {
  if (n == 0) return Interval(1.0);
  if (n < 0) return Interval(1.0) / pow(a, -n);
  const auto un = static_cast<unsigned>(n);
  const Interval m = abs(a);
  const detail::Bracket lo = detail::pow_nonneg(m.lo(), un);
  const detail::Bracket hi = detail::pow_nonneg(m.hi(), un);
  if (n % 2 == 0) return {lo.lo, hi.hi};
  if (a.lo() >= 0.0) return {lo.lo, hi.hi};
  if (a.hi() <= 0.0) return {-hi.hi, -lo.lo};
  const detail::Bracket neg = detail::pow_nonneg(-a.lo(), un);
  const detail::Bracket pos = detail::pow_nonneg(a.hi(), un);
  return {-neg.hi, pos.hi};
}

/// Real power a^q. Requires a > 0 unless q is a degenerate integer.
inline Interval pow(const Interval& a, const Interval& q) {
  if (q.is_point()) {
    const double e = q.lo();
    if (e == 0.5) return sqrt(a);
    if (std::nearbyint(e) == e && std::fabs(e) < 1024) return pow(a, static_cast<int>(e));
  }
  if (a.lo() <= 0.0) throw DomainError("pow requires a positive base for real exponents");
  // Each variable occurs once, so this is the exact range up to rounding.
  return exp(q * log(a));
}

inline Interval pow(const Interval& a, double q) { return pow(a, Interval(q)); }

/// Encloses the rational num/den.
inline Interval rational(long long num, long long den) {
  return Interval(static_cast<double>(num)) / Interval(static_cast<double>(den));
}

}  // namespace heatcert
