#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "heatcert/approx.hpp"
#include "heatcert/interval.hpp"
#include "heatcert/sine_series.hpp"
#include "heatcert/special.hpp"

namespace heatcert {

/// Exact rational number num/den with den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  Interval enclosure() const { return rational(num, den); }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Problem data for u_t - Delta u = u^p on (0,1)^d with shift mu and fractional power alpha.
class ProblemParams {
 public:
  ProblemParams(int dim, int p, Rational alpha, double mu, double gamma, int order)
      : dim_(dim), p_(p), alpha_(alpha), mu_(mu), gamma_(gamma), order_(order) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("d must be 1, 2 or 3");
    if (p < 2) throw std::invalid_argument("p must be an integer >= 2");
    if (alpha.den <= 0) throw std::invalid_argument("alpha denominator must be positive");
    // d(p-1)/(4p) < alpha < 1/p, compared in integers.
    if (!(static_cast<long long>(dim) * (p - 1) * alpha.den < 4LL * p * alpha.num) || !(p * alpha.num < alpha.den))
      throw std::invalid_argument("alpha = " + std::to_string(alpha.num) + "/" + std::to_string(alpha.den) +
                                  " is outside (d(p-1)/(4p), 1/p)");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive and finite");
    if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
    if (order < 1) throw std::invalid_argument("N must be positive");
  }

  int dim() const { return dim_; }
  int p() const { return p_; }
  Rational alpha_rational() const { return alpha_; }
  Interval alpha() const { return alpha_.enclosure(); }
  Interval mu() const { return Interval(mu_); }
  double mu_value() const { return mu_; }
  double gamma() const { return gamma_; }
  int order() const { return order_; }

  /// Smallest Dirichlet eigenvalue of -Delta on the unit cube, d pi^2.
  Interval lambda_min() const { return Interval(static_cast<double>(dim_)) * sqr(pi()); }
  /// lambda_A = lambda_min + mu.
  Interval lambda_a() const { return lambda_min() + mu(); }

 private:
  int dim_;
  int p_;
  Rational alpha_;
  double mu_;
  double gamma_;
  int order_;
};

namespace detail {

inline void check_interval_index(const ApproxSolution& omega, std::size_t i) {
  if (i < 1 || i > omega.intervals()) throw std::out_of_range("interval index outside 1..n");
}

/// Upper bound of sup over J_i x Omega of |omega|; linear interpolation keeps
/// the sup norm below the larger endpoint value.
inline Interval linf_on_interval(const ApproxSolution& omega, std::size_t i) {
  check_interval_index(omega, i);
  const double hi = std::max(linf_bound(omega.snapshot(i - 1)).hi(), linf_bound(omega.snapshot(i)).hi());
  return {0.0, hi};
}

inline Interval upper_only(const Interval& x) { return {0.0, x.hi()}; }

}  // namespace detail

/// sigma_i = mu + p (sup |omega|)^{p-1}, so that sigma - p omega^{p-1} >= mu on J_i.
inline Interval sigma_for_interval(const ApproxSolution& omega, std::size_t i, const ProblemParams& params) {
  const Interval m(detail::linf_on_interval(omega, i).hi());
  return params.mu() + Interval(static_cast<double>(params.p())) * pow(m, params.p() - 1);
}

/// C_omega on J_i: p(p-1) sup|omega|^{p-2} sup|d omega/dt|, the Lipschitz constant of p omega^{p-1} in t.
inline Interval c_omega(const ApproxSolution& omega, std::size_t i, const ProblemParams& params) {
  const int p = params.p();
  const Interval dt(linf_bound(time_derivative_enclosure(omega, i)).hi());
  const Interval m(detail::linf_on_interval(omega, i).hi());
  return Interval(static_cast<double>(p) * (p - 1)) * pow(m, p - 2) * dt;
}

/// Upper bound of ||omega||_{C(J_i; L^{2p})}; the L^{2p} norm is convex along the linear interpolation.
inline Interval omega_l2p_norm(const ApproxSolution& omega, std::size_t i, const ProblemParams& params) {
  detail::check_interval_index(omega, i);
  if (params.p() != 2) throw UnsupportedExponent("the L^{2p} norm is implemented for p = 2 only");
  const Interval a = sqrt(product_l2_norm(omega.snapshot(i - 1), omega.snapshot(i - 1)));
  const Interval b = sqrt(product_l2_norm(omega.snapshot(i), omega.snapshot(i)));
  return {0.0, std::max(a.hi(), b.hi())};
}

/// Upper bound of the embedding constant C_{q,alpha} with ||phi||_{L^q} <= C ||Delta_mu^alpha phi||_{L^2}.
/// The minimum over beta is replaced by zeta at a golden-section candidate.
inline Interval embedding_constant(int q, const Interval& alpha, const ProblemParams& params) {
  if (q < 2) throw DomainError("embedding exponent must be at least 2");
  const long long e_num = static_cast<long long>(params.dim()) * (q - 2);
  const long long e_den = 4LL * q;
  const Interval lambda = params.lambda_min();
  const Interval mu = params.mu();
  if (e_num == 0) {
    if (!(alpha.lo() > 0.0)) throw DomainError("embedding constant needs alpha > 0");
    return pow(lambda + mu, -alpha);
  }
  const Interval e = rational(e_num, e_den);
  if (!(alpha.lo() > e.hi())) throw DomainError("embedding constant needs alpha > d(q-2)/(4q)");

  const double ed = e.mid();
  const double gap = alpha.mid() - ed;
  const double lam = lambda.mid();
  const double mud = mu.mid();
  auto log_zeta = [&](double beta) { return -ed * std::log(beta) - gap * std::log((1.0 - beta) * lam + mud); };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1e-12, b = 1.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = log_zeta(x1), f2 = log_zeta(x2);
  for (int k = 0; k < 60; ++k) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = log_zeta(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = log_zeta(x2);
    }
  }
  double beta = f1 <= f2 ? x1 : x2;
  if (log_zeta(1.0) <= log_zeta(beta)) beta = 1.0;

  const Interval b_iv(beta);
  const Interval shifted = (Interval(1.0) - b_iv) * lambda + mu;
  const Interval zeta = pow(b_iv, -e) * pow(shifted, e - alpha);
  const Interval prefactor = gamma(alpha - e) / (pow(Interval(4.0) * pi(), e) * gamma(alpha));
  return detail::upper_only(prefactor * zeta);
}

/// W(tau) = (alpha/e)^alpha (1 + C_omega tau^2 / ((1-alpha)(2-alpha))).
inline Interval w_factor(const Interval& tau, const Interval& c_om, const Interval& alpha) {
  if (!(alpha.lo() > 0.0 && alpha.hi() < 1.0)) throw DomainError("w_factor needs 0 < alpha < 1");
  if (!(tau.lo() > 0.0)) throw DomainError("w_factor needs tau > 0");
  const Interval one(1.0);
  const Interval lead = exp(alpha * (log(alpha) - one));
  return lead * (one + c_om * sqr(tau) / ((one - alpha) * (Interval(2.0) - alpha)));
}

/// L_omega(rho) = p(p-1) C^2 e^{sigma tau} (tau^alpha ||omega|| + C e^{sigma tau} rho)^{p-2} tau^{1-p alpha} B(1-alpha, 1-p alpha).
inline Interval l_omega(const Interval& rho, const Interval& omega_norm, const Interval& sigma, const Interval& tau,
                        const Interval& c2p, const ProblemParams& params) {
  const int p = params.p();
  const Interval alpha = params.alpha();
  const Interval one(1.0);
  const Interval p_alpha = Interval(static_cast<double>(p)) * alpha;
  if (!(p_alpha.hi() < 1.0)) throw DomainError("l_omega needs 1 - p alpha > 0");
  const Interval growth = exp(sigma * tau);
  Interval out = Interval(static_cast<double>(p) * (p - 1)) * sqr(c2p) * growth;
  if (p > 2) out = out * pow(pow(tau, alpha) * omega_norm + c2p * growth * rho, p - 2);
  return out * pow(tau, one - p_alpha) * beta(one - alpha, one - p_alpha);
}

}  // namespace heatcert
