#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcert/format.hpp"
#include "heatcert/interval.hpp"
#include "heatcert/sine_series.hpp"

namespace heatcert {

/// Newton iteration inside a Crank-Nicolson step did not converge.
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strictly increasing time nodes t_0 < t_1 < ... < t_n.
class TimeGrid {
 public:
  TimeGrid() = default;

  explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("time grid needs at least one node");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("time grid nodes must be strictly increasing");
  }

  /// n equal steps on [t0, t1].
  static TimeGrid uniform(double t0, double t1, int n) {
    if (n < 1 || !(t1 > t0)) throw std::invalid_argument("uniform grid needs n >= 1 and t1 > t0");
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = t0 + (t1 - t0) * i / n;
    t[n] = t1;
    return TimeGrid(std::move(t));
  }

  std::size_t intervals() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }
  double node(std::size_t j) const { return nodes_.at(j); }
  /// tau_i = t_i - t_{i-1}, 1 <= i <= n.
  double tau(std::size_t i) const { return nodes_.at(i) - nodes_.at(i - 1); }
  const std::vector<double>& nodes() const { return nodes_; }

  void push_back(double t) {
    if (!nodes_.empty() && !(t > nodes_.back())) throw std::invalid_argument("time grid nodes must be strictly increasing");
    nodes_.push_back(t);
  }

 private:
  std::vector<double> nodes_;
};

struct SolverOptions {
  double tol = 1e-12;
  int max_iterations = 50;
  /// Drops the u^2 term; used to exercise the linear scheme.
  bool linear = false;
};

/// Outcome of one Newton solve.
struct StepReport {
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

inline double laplace_eigenvalue(const MultiIndex& m, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += static_cast<double>(m[k]) * m[k];
  return std::numbers::pi * std::numbers::pi * s;
}

/// Jacobian of u -> 2^d (u^2, psi_m): entry (m, n) is 2^{d+1} sum_a u_a prod_k T(a_k, n_k, m_k).
inline Eigen::MatrixXd power_jacobian(const SineSeries<double>& u) {
  const int d = u.dim();
  const int n = u.order();
  const std::size_t size = u.size();
  std::vector<double> table(static_cast<std::size_t>(n) * n * n);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c)
        table[((a - 1) * n + (b - 1)) * n + (c - 1)] = triple_sine_integral<double>(a, b, c);
  auto t = [&](int a, int b, int c) { return table[((a - 1) * n + (b - 1)) * n + (c - 1)]; };

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(size, size);
  const double scale = std::ldexp(2.0, d);
  for (std::size_t ia = 0; ia < size; ++ia) {
    if (u[ia] == 0.0) continue;
    const MultiIndex a = u.index(ia);
    for (std::size_t im = 0; im < size; ++im) {
      const MultiIndex m = u.index(im);
      for (std::size_t in = 0; in < size; ++in) {
        const MultiIndex b = u.index(in);
        double v = u[ia];
        for (int k = 0; k < d && v != 0.0; ++k) v *= t(a[k], b[k], m[k]);
        jac(im, in) += scale * v;
      }
    }
  }
  return jac;
}

inline double l2_coefficients(const SineSeries<double>& f) {
  double s = 0.0;
  for (double c : f.coefficients()) s += c * c;
  return std::sqrt(s);
}

/// Crank-Nicolson step with signed step length. In coefficient form it solves
/// F(u) = (1 + tau lambda/2) u - (1 - tau lambda/2) u_prev - tau/2 (P(u) + P(u_prev)) = 0.
inline SineSeries<double> cn_solve(const SineSeries<double>& u_prev, double tau, const SolverOptions& opts,
                                   StepReport* report) {
  const int d = u_prev.dim();
  const int n = u_prev.order();
  const std::size_t size = u_prev.size();
  std::vector<double> lambda(size);
  for (std::size_t i = 0; i < size; ++i) lambda[i] = laplace_eigenvalue(u_prev.index(i), d);

  auto power = [&](const SineSeries<double>& f) {
    return opts.linear ? SineSeries<double>(d, n) : galerkin_power(f, 2, n);
  };
  const SineSeries<double> p_prev = power(u_prev);
  SineSeries<double> rhs(d, n);
  for (std::size_t i = 0; i < size; ++i) rhs[i] = (1.0 - 0.5 * tau * lambda[i]) * u_prev[i] + 0.5 * tau * p_prev[i];

  SineSeries<double> u = u_prev;
  for (int iter = 0;; ++iter) {
    const SineSeries<double> p = power(u);
    Eigen::VectorXd f(size);
    for (std::size_t i = 0; i < size; ++i) f[i] = (1.0 + 0.5 * tau * lambda[i]) * u[i] - 0.5 * tau * p[i] - rhs[i];
    const double res = f.norm();
    if (!std::isfinite(res)) throw StepFailure("Crank-Nicolson iteration diverged");
    if (res <= opts.tol * std::max(1.0, l2_coefficients(u))) {
      if (report) *report = {iter, res};
      return u;
    }
    if (iter == opts.max_iterations)
      throw StepFailure("Newton did not converge in " + std::to_string(opts.max_iterations) +
                        " iterations (residual " + shortest(res) + ")");
    Eigen::MatrixXd jac = opts.linear ? Eigen::MatrixXd::Zero(size, size) : power_jacobian(u);
    jac *= -0.5 * tau;
    for (std::size_t i = 0; i < size; ++i) jac(i, i) += 1.0 + 0.5 * tau * lambda[i];
    const Eigen::VectorXd step = jac.partialPivLu().solve(f);
    for (std::size_t i = 0; i < size; ++i) u[i] -= step[i];
  }
}

}  // namespace detail

/// One Crank-Nicolson Galerkin step of length tau > 0 for u_t = Delta u + u^2,
/// solved by Newton's method started from u_prev.
inline SineSeries<double> cn_step(const SineSeries<double>& u_prev, double tau, const SolverOptions& opts = {},
                                  StepReport* report = nullptr) {
  if (!(tau > 0.0)) throw std::invalid_argument("step length must be positive");
  return detail::cn_solve(u_prev, tau, opts, report);
}

/// omega(t, x) = sum_i u_i(x) l_i(t) with the piecewise-linear Lagrange basis l_i.
class ApproxSolution {
 public:
  ApproxSolution(double t0, SineSeries<double> u0) : grid_(std::vector<double>{t0}) {
    snapshots_.push_back(std::move(u0));
    residuals_.push_back(0.0);
  }

  /// Adds the node (t, u); t must exceed the last node.
  void append(double t, SineSeries<double> u, double residual = 0.0) {
    snapshots_.front().check_compatible(u);
    grid_.push_back(t);
    snapshots_.push_back(std::move(u));
    residuals_.push_back(residual);
  }

  /// Drops every node after index j.
  void truncate(std::size_t j) {
    const std::vector<double> kept(grid_.nodes().begin(), grid_.nodes().begin() + j + 1);
    grid_ = TimeGrid(kept);
    snapshots_.resize(j + 1, snapshots_.front());
    residuals_.resize(j + 1);
  }

  const TimeGrid& grid() const { return grid_; }
  std::size_t intervals() const { return grid_.intervals(); }
  int dim() const { return snapshots_.front().dim(); }
  int order() const { return snapshots_.front().order(); }
  const SineSeries<double>& snapshot(std::size_t j) const { return snapshots_.at(j); }
  /// Discrete Newton residual recorded for node j.
  double solver_residual(std::size_t j) const { return residuals_.at(j); }

  /// omega(t); returns the stored snapshot unchanged at a node.
  SineSeries<double> evaluate(double t) const {
    const auto& t_nodes = grid_.nodes();
    if (t < t_nodes.front() || t > t_nodes.back()) throw std::out_of_range("time outside the approximate solution");
    const auto it = std::lower_bound(t_nodes.begin(), t_nodes.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - t_nodes.begin());
    if (*it == t) return snapshots_[j];
    const double tau = t_nodes[j] - t_nodes[j - 1];
    const double w1 = (t - t_nodes[j - 1]) / tau;
    const double w0 = (t_nodes[j] - t) / tau;
    SineSeries<double> out(dim(), order());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = w0 * snapshots_[j - 1][k] + w1 * snapshots_[j][k];
    return out;
  }

 private:
  TimeGrid grid_;
  std::vector<SineSeries<double>> snapshots_;
  std::vector<double> residuals_;
};

/// Runs the Crank-Nicolson scheme over every step of the grid.
inline ApproxSolution solve(const SineSeries<double>& u0, const TimeGrid& grid, const SolverOptions& opts = {}) {
  ApproxSolution omega(grid.node(0), u0);
  for (std::size_t i = 1; i <= grid.intervals(); ++i) {
    StepReport report;
    SineSeries<double> next = cn_step(omega.snapshot(i - 1), grid.tau(i), opts, &report);
    omega.append(grid.node(i), std::move(next), report.residual);
  }
  return omega;
}

/// d omega / dt on J_i = (t_{i-1}, t_i], i.e. (u_i - u_{i-1}) / tau_i.
inline SineSeries<double> time_derivative(const ApproxSolution& omega, std::size_t i) {
  if (i < 1 || i > omega.intervals()) throw std::out_of_range("interval index outside 1..n");
  SineSeries<double> out = omega.snapshot(i) - omega.snapshot(i - 1);
  out *= 1.0 / omega.grid().tau(i);
  return out;
}

/// Enclosure of the exact difference quotient on J_i.
inline SineSeries<Interval> time_derivative_enclosure(const ApproxSolution& omega, std::size_t i) {
  if (i < 1 || i > omega.intervals()) throw std::out_of_range("interval index outside 1..n");
  const Interval tau = Interval(omega.grid().node(i)) - Interval(omega.grid().node(i - 1));
  SineSeries<Interval> out = to_interval(omega.snapshot(i)) - to_interval(omega.snapshot(i - 1));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = out[k] / tau;
  return out;
}

/// CSV with columns t, m_1..m_d, coefficient; one row per node and mode.
inline void write_snapshots(std::ostream& os, const ApproxSolution& omega) {
  os << 't';
  for (int k = 1; k <= omega.dim(); ++k) os << ",m_" << k;
  os << ",coefficient\n";
  for (std::size_t j = 0; j < omega.grid().nodes().size(); ++j) {
    const auto& u = omega.snapshot(j);
    const std::string t = shortest(omega.grid().node(j));
    for (std::size_t i = 0; i < u.size(); ++i) {
      const MultiIndex m = u.index(i);
      os << t;
      for (int k = 0; k < omega.dim(); ++k) os << ',' << m[k];
      os << ',' << shortest(u[i]) << '\n';
    }
  }
}

}  // namespace heatcert
