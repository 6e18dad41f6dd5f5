#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatcert/bounds.hpp"
#include "oracle.hpp"

using heatcert::ApproxSolution;
using heatcert::Interval;
using heatcert::ProblemParams;
using heatcert::SineSeries;
using oracle::Big;

namespace {

constexpr double kPi = std::numbers::pi;

ProblemParams fujita(double gamma = 7.0, double mu = 70.0, int order = 5) {
  return ProblemParams(2, 2, {3, 8}, mu, gamma, order);
}

ApproxSolution constant_in_time(const SineSeries<double>& u, double tau) {
  ApproxSolution omega(0.0, u);
  omega.append(tau, u);
  return omega;
}

SineSeries<double> random_series(std::mt19937_64& rng, int d, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  SineSeries<double> f(d, n);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = g(rng) / (1.0 + i);
  return f;
}

Interval widen(std::mt19937_64& rng, const Interval& x) {
  std::uniform_real_distribution<double> u(0.0, 0.05);
  return {x.lo() - u(rng) * std::fabs(x.lo()), x.hi() + u(rng) * std::fabs(x.hi())};
}

}  // namespace

TEST(ProblemParams, AdmissibilityWindow) {
  EXPECT_NO_THROW(fujita());
  EXPECT_THROW(ProblemParams(2, 2, {1, 4}, 70, 7, 5), std::invalid_argument);  // alpha = d(p-1)/(4p)
  EXPECT_THROW(ProblemParams(2, 2, {1, 2}, 70, 7, 5), std::invalid_argument);  // alpha = 1/p
  EXPECT_THROW(ProblemParams(2, 2, {3, 8}, 0, 7, 5), std::invalid_argument);
  EXPECT_THROW(ProblemParams(4, 2, {3, 8}, 70, 7, 5), std::invalid_argument);
  EXPECT_THROW(ProblemParams(2, 1, {3, 8}, 70, 7, 5), std::invalid_argument);
  const auto p = fujita();
  EXPECT_TRUE(oracle::encloses(p.lambda_min(), 2 * oracle::pi() * oracle::pi()));
  EXPECT_TRUE(oracle::encloses(p.lambda_a(), 2 * oracle::pi() * oracle::pi() + 70));
}

TEST(Sigma, ZeroSolutionGivesMu) {
  const auto omega = constant_in_time(SineSeries<double>(2, 5), 0.01);
  EXPECT_EQ(heatcert::sigma_for_interval(omega, 1, fujita()), Interval(70.0));
}

TEST(Sigma, ConstantModeAgainstSampling) {
  const auto u = SineSeries<double>::mode(2, 5, {1, 1}, 7.0);
  const auto omega = constant_in_time(u, 0.01);
  const Interval sigma = heatcert::sigma_for_interval(omega, 1, fujita());
  EXPECT_LE(sigma.hi(), 84.0);
  double sampled = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      const double x[2] = {i / 40.0, j / 40.0};
      for (double t : {0.0, 0.005, 0.01})
        sampled = std::max(sampled, std::fabs(heatcert::evaluate(omega.evaluate(t), x)));
    }
  EXPECT_GE(sigma.hi(), 70.0 + 2.0 * sampled);
}

TEST(Sigma, GrowsWithTheSolution) {
  const auto small = constant_in_time(SineSeries<double>::mode(2, 5, {1, 1}, 3.0), 0.01);
  const auto large = constant_in_time(SineSeries<double>::mode(2, 5, {1, 1}, 3.5), 0.01);
  EXPECT_LT(heatcert::sigma_for_interval(small, 1, fujita()).hi(), heatcert::sigma_for_interval(large, 1, fujita()).lo());
}

TEST(COmega, Examples) {
  EXPECT_EQ(heatcert::c_omega(constant_in_time(SineSeries<double>::mode(2, 5, {1, 1}, 7.0), 0.1), 1, fujita()),
            Interval(0.0));
  ApproxSolution omega(0.0, SineSeries<double>(2, 3));
  omega.append(1.0, SineSeries<double>::mode(2, 3, {1, 1}, 1.0));
  const Interval c = heatcert::c_omega(omega, 1, fujita());
  EXPECT_LE(c.hi(), 2.0);
  EXPECT_TRUE(c.contains(2.0));
}

TEST(COmega, TwoPointLipschitzSampling) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double tau = 0.001 + 0.05 * unit(rng);
    ApproxSolution omega(0.0, random_series(rng, 2, 4, 5.0));
    omega.append(tau, random_series(rng, 2, 4, 5.0));
    const double c = heatcert::c_omega(omega, 1, fujita()).hi();
    for (int k = 0; k < 50; ++k) {
      double s = tau * unit(rng), t = tau * unit(rng);
      if (s > t) std::swap(s, t);
      const auto ws = omega.evaluate(s), wt = omega.evaluate(t);
      for (int i = 1; i < 20; ++i)
        for (int j = 1; j < 20; ++j) {
          const double x[2] = {i / 20.0, j / 20.0};
          const double lhs = std::fabs(2.0 * (heatcert::evaluate(wt, x) - heatcert::evaluate(ws, x)));
          ASSERT_LE(lhs, c * (t - s) * (1 + 1e-12) + 1e-13);
        }
    }
  }
}

TEST(OmegaNorm, L4NormBoundsInterpolant) {
  std::mt19937_64 rng(23);
  const auto rule = oracle::composite_gauss(3);
  ApproxSolution omega(0.0, random_series(rng, 2, 3, 4.0));
  omega.append(0.02, random_series(rng, 2, 3, 4.0));
  const double bound = heatcert::omega_l2p_norm(omega, 1, fujita()).hi();
  for (double t : {0.0, 0.005, 0.01, 0.015, 0.02}) {
    const auto w = omega.evaluate(t);
    const double q4 = oracle::integrate_cube(2, rule, [&](const double* x) { return std::pow(heatcert::evaluate(w, {x, 2}), 4); });
    EXPECT_LE(std::pow(q4, 0.25), bound * (1 + 1e-12));
  }
}

TEST(EmbeddingConstant, SquareIntegrableCaseIsShiftedEigenvaluePower) {
  const auto params = fujita();
  const Interval c = heatcert::embedding_constant(2, params.alpha(), params);
  const Big expected = pow(2 * oracle::pi() * oracle::pi() + 70, Big(-0.375));
  EXPECT_TRUE(oracle::encloses(c, expected));
}

TEST(EmbeddingConstant, MatchesGoldenSectionOracle) {
  const auto params = fujita();
  const Interval c = heatcert::embedding_constant(4, params.alpha(), params);
  const Big ref = oracle::embedding_oracle(2, 4, Big(3) / 8, Big(70));
  EXPECT_GE(Big(c.hi()), ref);
  EXPECT_LE(static_cast<double>((Big(c.hi()) - ref) / ref), 1e-6);
  // An interior minimum: large lambda_min relative to mu.
  const ProblemParams wide(3, 2, {7, 16}, 0.5, 1.0, 3);
  const Interval c3 = heatcert::embedding_constant(4, wide.alpha(), wide);
  const Big ref3 = oracle::embedding_oracle(3, 4, Big(7) / 16, Big(0.5));
  EXPECT_GE(Big(c3.hi()), ref3);
  EXPECT_LE(static_cast<double>((Big(c3.hi()) - ref3) / ref3), 1e-6);
}

TEST(EmbeddingConstant, DecreasesWithShift) {
  const Interval c70 = heatcert::embedding_constant(4, fujita().alpha(), fujita());
  const Interval c100 = heatcert::embedding_constant(4, fujita().alpha(), fujita(7.0, 100.0));
  EXPECT_LT(c100.hi(), c70.hi());
  EXPECT_THROW(heatcert::embedding_constant(4, Interval(0.25), fujita()), heatcert::DomainError);
}

TEST(WFactor, Examples) {
  const Interval w = heatcert::w_factor(Interval(0.01), Interval(0.0), Interval(0.5));
  EXPECT_TRUE(oracle::encloses(w, sqrt(Big(1) / (2 * boost::math::constants::e<Big>()))));
  EXPECT_NEAR(w.mid(), 0.4288819, 1e-7);
  const Interval alpha = heatcert::rational(3, 8);
  const Interval lead = heatcert::w_factor(Interval(1e-12), Interval(1e3), alpha);
  const Big base = pow(Big(3) / 8 / boost::math::constants::e<Big>(), Big(3) / 8);
  EXPECT_NEAR(lead.mid(), static_cast<double>(base), 1e-15);
  double prev = 0.0;
  for (double tau : {0.001, 0.01, 0.1, 0.5}) {
    const double cur = heatcert::w_factor(Interval(tau), Interval(50.0), alpha).lo();
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(LOmega, QuadraticCaseMatchesOracle) {
  const auto params = fujita();
  const double sigma = 84.0, tau = 1e-3, c2p = 0.99;
  const Interval l = heatcert::l_omega(Interval(0.1), Interval(3.0), Interval(sigma), Interval(tau), Interval(c2p), params);
  const Big a = Big(3) / 8;
  const Big beta = oracle::gamma(1 - a) * oracle::gamma(1 - 2 * a) / oracle::gamma(2 - 3 * a);
  const Big expected = 2 * Big(c2p) * Big(c2p) * exp(Big(sigma) * Big(tau)) * pow(Big(tau), 1 - 2 * a) * beta;
  EXPECT_TRUE(oracle::encloses(l, expected));
  // rho does not enter when p = 2.
  EXPECT_EQ(l, heatcert::l_omega(Interval(5.0), Interval(3.0), Interval(sigma), Interval(tau), Interval(c2p), params));
  const Interval tiny = heatcert::l_omega(Interval(0.1), Interval(3.0), Interval(sigma), Interval(1e-24), Interval(c2p), params);
  EXPECT_LT(tiny.hi(), 1e-4);
}

TEST(BoundsProperties, FinitePositiveAndInclusionMonotone) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto params = fujita();
  for (int trial = 0; trial < 500; ++trial) {
    const Interval tau(1e-4 + 0.01 * u(rng));
    const Interval c_om(100.0 * u(rng));
    const Interval sigma(70.0 + 30.0 * u(rng));
    const Interval c2p(0.5 + u(rng));
    const Interval norm(5.0 * u(rng));
    const Interval w = heatcert::w_factor(tau, c_om, params.alpha());
    const Interval l = heatcert::l_omega(Interval(0.1), norm, sigma, tau, c2p, params);
    ASSERT_TRUE(std::isfinite(w.hi()) && w.hi() > 0.0);
    ASSERT_TRUE(std::isfinite(l.hi()) && l.hi() > 0.0);
    const Interval tau2 = widen(rng, tau), c_om2 = widen(rng, c_om), sigma2 = widen(rng, sigma), c2p2 = widen(rng, c2p);
    ASSERT_TRUE(heatcert::w_factor(tau2, c_om2, params.alpha()).contains(w));
    ASSERT_TRUE(heatcert::l_omega(Interval(0.1), norm, sigma2, tau2, c2p2, params).contains(l));
  }
}
