#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "heatcert/approx.hpp"
#include "heatcert/bounds.hpp"
#include "heatcert/interval.hpp"
#include "heatcert/residual.hpp"

namespace heatcert {

/// How the pointwise error at t_n is assembled from the stored ledger.
enum class EpsilonMode { grouped, naive };

/// Whether the concatenation may change the step size.
enum class StepPolicy { adaptive, fixed };

inline std::string to_string(EpsilonMode m) { return m == EpsilonMode::grouped ? "grouped" : "naive"; }
inline std::string to_string(StepPolicy p) { return p == StepPolicy::adaptive ? "adaptive" : "fixed"; }

/// Quantities about omega on J_i that enter the local inclusion.
struct StepInputs {
  std::size_t index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  Interval tau;
  Interval sigma;
  Interval c_omega;
  Interval delta;
  Interval omega_norm;
};

/// Verified record for one interval J_i = (t_{i-1}, t_i].
struct StepCertificate {
  std::size_t index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  Interval tau;
  Interval sigma;
  Interval delta;
  Interval c_omega;
  Interval omega_norm;
  Interval c2p;
  Interval w;
  Interval l;
  Interval eps_prev;
  Interval rho;
  Interval nu;
  Interval decay;
  Interval epsilon;
  bool verified = false;
  /// Empty when verified; otherwise why the step was rejected.
  std::string reason;
};

/// eps_0 together with nu_i and decay_i = exp(-(lambda_A - sigma_i) tau_i) for every verified step.
struct EpsilonLedger {
  Interval eps0;
  std::vector<Interval> nu;
  std::vector<Interval> decay;

  std::size_t size() const { return nu.size(); }
  void push(const Interval& nu_i, const Interval& decay_i) {
    nu.push_back(nu_i);
    decay.push_back(decay_i);
  }
};

struct VerifyOptions {
  /// rho* = (small root) * (1 + rho_margin).
  double rho_margin = 0.01;
  /// Smallest radius tried; used when the small root vanishes.
  double rho_floor = 1e-12;
  /// Worker cap for assembling one step's constants.
  unsigned threads = 1;
};

/// Bound on ||u(t_n) - omega(t_n)||_{L^2} from the first n ledger entries.
///
/// grouped: every product of decay factors is formed as one interval before it
/// multiplies eps_0 or nu_k. naive: eps_i = decay_i eps_{i-1} + nu_i.
inline Interval pointwise_epsilon(const EpsilonLedger& ledger, EpsilonMode mode, std::size_t n) {
  if (n > ledger.size()) throw std::out_of_range("ledger shorter than requested step count");
  if (mode == EpsilonMode::naive) {
    Interval eps = ledger.eps0;
    for (std::size_t i = 0; i < n; ++i) eps = ledger.decay[i] * eps + ledger.nu[i];
    return eps;
  }
  if (n == 0) return ledger.eps0;
  Interval eps = ledger.nu[n - 1];
  // suffix = decay_n decay_{n-1} ... decay_{k+1}
  Interval suffix(1.0);
  for (std::size_t k = n - 1; k-- > 0;) {
    suffix = suffix * ledger.decay[k + 1];
    eps = eps + suffix * ledger.nu[k];
  }
  suffix = suffix * ledger.decay[0];
  return suffix * ledger.eps0 + eps;
}

inline Interval pointwise_epsilon(const EpsilonLedger& ledger, EpsilonMode mode) {
  return pointwise_epsilon(ledger, mode, ledger.size());
}

/// Left side of the inclusion condition, W (eps + L rho^2 + delta tau / (1 - alpha)).
inline Interval condition_lhs(const Interval& w, const Interval& l, const Interval& eps, const Interval& delta,
                              const Interval& tau, const Interval& alpha, const Interval& rho) {
  return w * (eps + l * sqr(rho) + delta * tau / (Interval(1.0) - alpha));
}

/// sigma_i, C_omega, delta_i and ||omega||_{C(J_i;L^4)} for the interval J_i of omega.
inline StepInputs assemble_step(const ApproxSolution& omega, std::size_t i, const ProblemParams& params,
                                unsigned threads = 1) {
  StepInputs in;
  in.index = i;
  in.t_start = omega.grid().node(i - 1);
  in.t_end = omega.grid().node(i);
  in.tau = Interval(in.t_end) - Interval(in.t_start);
  if (threads > 1) {
    auto delta = std::async(std::launch::async, [&] { return delta_bound(omega, i); });
    in.sigma = sigma_for_interval(omega, i, params);
    in.c_omega = c_omega(omega, i, params);
    in.omega_norm = omega_l2p_norm(omega, i, params);
    in.delta = delta.get();
  } else {
    in.sigma = sigma_for_interval(omega, i, params);
    in.c_omega = c_omega(omega, i, params);
    in.omega_norm = omega_l2p_norm(omega, i, params);
    in.delta = delta_bound(omega, i);
  }
  return in;
}

/// Tries to prove existence and uniqueness of the mild solution in B_{J_i}(omega, rho).
///
/// For p = 2 the condition is W L rho^2 - rho + W (eps + delta tau/(1-alpha)) < 0;
/// the candidate rho* is the small root times (1 + margin), then checked by
/// direct interval substitution.
inline StepCertificate local_inclusion(const Interval& eps_prev, const StepInputs& in, const Interval& c2p,
                                       const ProblemParams& params, const VerifyOptions& opts = {}) {
  StepCertificate cert;
  cert.index = in.index;
  cert.t_start = in.t_start;
  cert.t_end = in.t_end;
  cert.tau = in.tau;
  cert.sigma = in.sigma;
  cert.delta = in.delta;
  cert.c_omega = in.c_omega;
  cert.omega_norm = in.omega_norm;
  cert.c2p = c2p;
  cert.eps_prev = eps_prev;

  const Interval alpha = params.alpha();
  cert.w = w_factor(in.tau, in.c_omega, alpha);
  const Interval l0 = l_omega(Interval(0.0), in.omega_norm, in.sigma, in.tau, c2p, params);

  const double a = (cert.w * l0).hi();
  const double c = condition_lhs(cert.w, Interval(0.0), eps_prev, in.delta, in.tau, alpha, Interval(0.0)).hi();
  const double disc = 1.0 - 4.0 * a * c;
  if (!(disc > 0.0)) {
    cert.l = l0;
    cert.reason = "no real root";
    return cert;
  }
  const double small_root = 2.0 * c / (1.0 + std::sqrt(disc));
  const double rho_star = std::max(small_root * (1.0 + opts.rho_margin), opts.rho_floor);
  cert.rho = Interval(rho_star);
  cert.l = l_omega(cert.rho, in.omega_norm, in.sigma, in.tau, c2p, params);
  const Interval lhs = condition_lhs(cert.w, cert.l, eps_prev, in.delta, in.tau, alpha, cert.rho);
  cert.verified = lhs.hi() < cert.rho.lo();
  if (!cert.verified) cert.reason = "interval check failed";
  return cert;
}

namespace detail {

/// (1 - e^{-x tau}) / x at a point x, which is tau at x = 0.
inline Interval relaxation_integral(double x, const Interval& tau) {
  if (x == 0.0) return tau;
  const Interval xi(x);
  return -expm1(-(xi * tau)) / xi;
}

}  // namespace detail

/// Enclosure of int_{J_i} exp(-(lambda_A - sigma_i)(t_i - s)) ds over the interval of lambda_A - sigma_i.
/// The integrand is decreasing in lambda_A - sigma_i, so the endpoints give the range.
inline Interval relaxation_integral(const Interval& x, const Interval& tau) {
  return {detail::relaxation_integral(x.hi(), tau).lo(), detail::relaxation_integral(x.lo(), tau).hi()};
}

/// decay_i = exp(-(lambda_A - sigma_i) tau_i).
inline Interval decay_factor(const StepCertificate& cert, const ProblemParams& params) {
  return exp(-((params.lambda_a() - cert.sigma) * cert.tau));
}

/// nu_i bounding int_{J_i} ||U_B(t_i, s) h_i(z(s))||_{L^2} ds.
inline Interval nu_bound(const StepCertificate& cert, const ProblemParams& params) {
  const int p = params.p();
  const Interval pi(static_cast<double>(p));
  const Interval alpha = params.alpha();
  const Interval one(1.0);
  const Interval one_minus = one - pi * alpha;
  const Interval x = params.lambda_a() - cert.sigma;

  // K = int_0^1 int_0^1 (tau^alpha ||omega|| + theta eta C rho)^{p-2} d eta theta d theta.
  Interval k(0.5);
  if (p > 2) k = k * pow(pow(cert.tau, alpha) * cert.omega_norm + cert.c2p * cert.rho, p - 2);

  const Interval tail = pow(cert.tau, one_minus) / one_minus;
  const Interval nonneg = exp(pi * cert.sigma * cert.tau) * tail;
  const Interval neg = exp(((pi + one) * cert.sigma - params.lambda_a()) * cert.tau) * tail;
  Interval growth;
  if (x.lo() >= 0.0) growth = nonneg;
  else if (x.hi() < 0.0) growth = neg;
  else growth = hull(nonneg, neg);

  const Interval nonlinear = Interval(static_cast<double>(p) * (p - 1)) * sqr(cert.c2p) * sqr(cert.rho) * k * growth;
  return nonlinear + cert.delta * relaxation_integral(x, cert.tau);
}

/// Configuration of a concatenated verification run.
struct ConcatenationOptions {
  double t_end = 0.25;
  double tau0 = 1e-3;
  /// Upper cap for adaptive growth; values <= 0 mean tau0.
  double tau_max = 0.0;
  Interval eps0;
  EpsilonMode mode = EpsilonMode::grouped;
  StepPolicy policy = StepPolicy::adaptive;
  int max_halvings = 12;
  int grow_after = 5;
  SolverOptions solver;
  VerifyOptions verify;
};

/// Problem, approximate solution and the ordered certificates of one run.
struct VerificationRun {
  ProblemParams params;
  ApproxSolution omega;
  EpsilonMode mode = EpsilonMode::grouped;
  std::vector<StepCertificate> certificates;
  EpsilonLedger ledger;
  double t_end = 0.0;

  /// End of the last verified interval (t_0 if none).
  double last_verified_time() const {
    double t = omega.grid().node(0);
    for (const auto& c : certificates)
      if (c.verified) t = c.t_end;
    return t;
  }
  bool reached_end() const { return last_verified_time() >= t_end; }
};

namespace detail {

/// Runs one step on J_i of omega: local inclusion, then nu and epsilon on success.
inline StepCertificate certify_step(VerificationRun& run, std::size_t i, const Interval& c2p,
                                    const ConcatenationOptions& opts) {
  const Interval eps_prev = run.ledger.size() == 0 ? run.ledger.eps0 : run.certificates.back().epsilon;
  const StepInputs in = assemble_step(run.omega, i, run.params, opts.verify.threads);
  StepCertificate cert = local_inclusion(eps_prev, in, c2p, run.params, opts.verify);
  cert.decay = decay_factor(cert, run.params);
  if (cert.verified) {
    cert.nu = nu_bound(cert, run.params);
    run.ledger.push(cert.nu, cert.decay);
    cert.epsilon = pointwise_epsilon(run.ledger, run.mode);
  }
  return cert;
}

inline ProblemParams checked(const ProblemParams& params, const SineSeries<double>& u0) {
  if (u0.dim() != params.dim() || u0.order() != params.order())
    throw std::invalid_argument("initial data does not match the problem's d and N");
  return params;
}

}  // namespace detail

/// Concatenated verification over a precomputed approximate solution, one certificate per grid interval.
inline VerificationRun concatenate(const ApproxSolution& omega, const ProblemParams& params,
                                   const ConcatenationOptions& opts) {
  VerificationRun run{detail::checked(params, omega.snapshot(0)), omega, opts.mode, {}, {}, omega.grid().nodes().back()};
  run.ledger.eps0 = opts.eps0;
  const Interval c2p = embedding_constant(2 * params.p(), params.alpha(), params);
  for (std::size_t i = 1; i <= omega.intervals(); ++i) {
    StepCertificate cert = detail::certify_step(run, i, c2p, opts);
    const bool ok = cert.verified;
    run.certificates.push_back(std::move(cert));
    if (!ok) break;
  }
  return run;
}

/// Concatenated verification that builds omega step by step from u0.
///
/// A step that fails (Newton breakdown or the inclusion check) is retried with
/// half the step, at most max_halvings times below tau0; after grow_after
/// consecutive successes the step doubles up to tau_max. With the fixed policy
/// the first failure ends the run.
inline VerificationRun concatenate(const SineSeries<double>& u0, const ProblemParams& params,
                                   const ConcatenationOptions& opts) {
  if (!(opts.tau0 > 0.0) || !(opts.t_end > 0.0)) throw std::invalid_argument("tau0 and T must be positive");
  VerificationRun run{detail::checked(params, u0), ApproxSolution(0.0, u0), opts.mode, {}, {}, opts.t_end};
  run.ledger.eps0 = opts.eps0;
  const Interval c2p = embedding_constant(2 * params.p(), params.alpha(), params);
  const double tau_cap = opts.tau_max > 0.0 ? std::max(opts.tau_max, opts.tau0) : opts.tau0;
  const double tau_floor = std::ldexp(opts.tau0, -opts.max_halvings);
  const bool adaptive = opts.policy == StepPolicy::adaptive;

  double tau = opts.tau0;
  int streak = 0;
  while (true) {
    const std::size_t j = run.omega.intervals();
    const double t = run.omega.grid().node(j);
    if (t >= opts.t_end) break;
    double step = tau;
    double t_next = t + step;
    if (t_next >= opts.t_end || opts.t_end - t_next < 1e-3 * step) t_next = opts.t_end;

    StepCertificate cert;
    try {
      StepReport report;
      SineSeries<double> next = cn_step(run.omega.snapshot(j), t_next - t, opts.solver, &report);
      run.omega.append(t_next, std::move(next), report.residual);
      cert = detail::certify_step(run, j + 1, c2p, opts);
    } catch (const StepFailure& e) {
      cert.index = j + 1;
      cert.t_start = t;
      cert.t_end = t_next;
      cert.tau = Interval(t_next) - Interval(t);
      cert.reason = e.what();
    }

    if (cert.verified) {
      run.certificates.push_back(std::move(cert));
      if (adaptive && ++streak >= opts.grow_after) {
        tau = std::min(2.0 * tau, tau_cap);
        streak = 0;
      }
      continue;
    }
    if (run.omega.intervals() > j) run.omega.truncate(j);
    streak = 0;
    if (!adaptive || tau / 2.0 < tau_floor) {
      run.certificates.push_back(std::move(cert));
      break;
    }
    tau /= 2.0;
  }
  return run;
}

/// Result of re-deriving every verified certificate from omega and the parameters.
struct AuditReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Recomputes sigma, C_omega, delta, W, L, nu and the epsilon chain from omega
/// alone and substitutes each stored rho_i into the inclusion condition.
inline AuditReport audit(const VerificationRun& run) {
  AuditReport report;
  const ProblemParams& params = run.params;
  const Interval alpha = params.alpha();
  const Interval c2p = embedding_constant(2 * params.p(), alpha, params);
  EpsilonLedger ledger;
  ledger.eps0 = run.ledger.eps0;
  Interval eps_prev = ledger.eps0;
  for (const auto& cert : run.certificates) {
    if (!cert.verified) continue;
    ++report.checked;
    const std::string tag = "step " + std::to_string(cert.index) + ": ";
    const std::size_t i = cert.index;
    if (i < 1 || i > run.omega.intervals() || run.omega.grid().node(i) != cert.t_end ||
        run.omega.grid().node(i - 1) != cert.t_start) {
      report.failures.push_back(tag + "interval does not match the approximate solution");
      continue;
    }
    const StepInputs in = assemble_step(run.omega, i, params);
    const Interval w = w_factor(in.tau, in.c_omega, alpha);
    const Interval l = l_omega(cert.rho, in.omega_norm, in.sigma, in.tau, c2p, params);
    if (!(cert.rho.lo() > 0.0)) report.failures.push_back(tag + "rho is not positive");
    const Interval lhs = condition_lhs(w, l, eps_prev, in.delta, in.tau, alpha, cert.rho);
    if (!(lhs.hi() < cert.rho.lo())) report.failures.push_back(tag + "inclusion condition does not hold");

    StepCertificate redo = cert;
    redo.tau = in.tau;
    redo.sigma = in.sigma;
    redo.delta = in.delta;
    redo.omega_norm = in.omega_norm;
    redo.c2p = c2p;
    ledger.push(nu_bound(redo, params), decay_factor(redo, params));
    eps_prev = pointwise_epsilon(ledger, run.mode);
    if (!(eps_prev.hi() <= cert.epsilon.hi())) report.failures.push_back(tag + "stored epsilon is below the recomputed bound");
  }
  return report;
}

}  // namespace heatcert
