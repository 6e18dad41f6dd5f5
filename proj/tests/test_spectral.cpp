#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatcert/sine_series.hpp"
#include "oracle.hpp"

using heatcert::Interval;
using heatcert::MultiIndex;
using heatcert::SineSeries;
using oracle::Big;

namespace {

constexpr double kPi = std::numbers::pi;

SineSeries<double> random_series(std::mt19937_64& rng, int d, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  SineSeries<double> f(d, n);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = g(rng) / (1.0 + i);
  return f;
}

// Samples of f on the tensor quadrature grid, using per-axis sine tables.
std::vector<double> sample_on_grid(const SineSeries<double>& f, const oracle::Rule& rule) {
  const int d = f.dim();
  const std::size_t q = rule.x.size();
  std::vector<std::vector<double>> sines(f.order() + 1, std::vector<double>(q));
  for (int m = 1; m <= f.order(); ++m)
    for (std::size_t i = 0; i < q; ++i) sines[m][i] = std::sin(m * kPi * rule.x[i]);
  const std::size_t total = heatcert::detail::ipow(q, d);
  std::vector<double> values(total, 0.0);
  for (std::size_t p = 0; p < total; ++p) {
    std::array<std::size_t, 3> ix{0, 0, 0};
    std::size_t rem = p;
    for (int k = d - 1; k >= 0; --k) {
      ix[k] = rem % q;
      rem /= q;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const MultiIndex m = f.index(i);
      double v = f[i];
      for (int k = 0; k < d; ++k) v *= sines[m[k]][ix[k]];
      s += v;
    }
    values[p] = s;
  }
  return values;
}

double grid_weight(const oracle::Rule& rule, int d, std::size_t p) {
  const std::size_t q = rule.x.size();
  double w = 1.0;
  for (int k = 0; k < d; ++k) {
    w *= rule.w[p % q];
    p /= q;
  }
  return w;
}

bool close_to_enclosure(const Interval& x, double v, double rel) {
  const double slack = rel * std::max(1.0, std::fabs(v)) + x.width();
  return x.lo() - slack <= v && v <= x.hi() + slack;
}

}  // namespace

TEST(SineSeriesNorms, L2OfBasisAndZero) {
  const auto psi = SineSeries<double>::mode(2, 3, {1, 1}, 1.0);
  EXPECT_TRUE(heatcert::l2_norm(psi).contains(0.5));
  EXPECT_EQ(heatcert::l2_norm(SineSeries<double>(2, 3)), Interval(0.0));
}

TEST(SineSeriesNorms, L2Parseval345) {
  SineSeries<double> f(2, 3);
  f.at({1, 1}) = 3.0;
  f.at({2, 1}) = 4.0;
  EXPECT_TRUE(heatcert::l2_norm(f).contains(2.5));
}

TEST(SineSeriesNorms, LinfBound) {
  EXPECT_EQ(heatcert::linf_bound(SineSeries<double>::mode(2, 5, {1, 1}, 1.0)).hi(), 1.0);
  EXPECT_EQ(heatcert::linf_bound(SineSeries<double>::mode(2, 5, {1, 1}, 7.0)).hi(), 7.0);
  const auto psi = SineSeries<double>::mode(2, 5, {1, 1}, 1.0);
  EXPECT_EQ(heatcert::linf_bound(psi - psi).hi(), 0.0);
}

TEST(SineSeriesNorms, ProductNormClosedForms) {
  const auto psi1 = SineSeries<double>::mode(1, 4, {1}, 1.0);
  EXPECT_TRUE(oracle::encloses(heatcert::product_l2_norm(psi1, psi1), sqrt(Big(3) / 8)));
  const auto psi11 = SineSeries<double>::mode(2, 4, {1, 1}, 1.0);
  EXPECT_TRUE(oracle::encloses(heatcert::product_l2_norm(psi11, psi11), Big(3) / 8));
  EXPECT_EQ(heatcert::product_l2_norm(SineSeries<double>(2, 4), psi11), Interval(0.0));
}

TEST(SineSeriesOps, Laplacian) {
  const auto lap = heatcert::laplacian(SineSeries<double>::mode(2, 3, {1, 1}, 1.0));
  EXPECT_NEAR(lap.at({1, 1}), -2 * kPi * kPi, 1e-13);
  const auto lap21 = heatcert::laplacian(heatcert::to_interval(SineSeries<double>::mode(2, 3, {2, 1}, 1.0)));
  EXPECT_TRUE(oracle::encloses(lap21.at({2, 1}), -5 * oracle::pi() * oracle::pi()));
  const auto zero = heatcert::laplacian(SineSeries<double>(2, 3));
  for (double c : zero.coefficients()) EXPECT_EQ(c, 0.0);
}

TEST(SineSeriesOps, TripleSineIntegralMatchesQuadrature) {
  const auto rule = oracle::composite_gauss(8);
  for (int a = 1; a <= 6; ++a)
    for (int b = 1; b <= 6; ++b)
      for (int c = 1; c <= 12; ++c) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
          const double x = rule.x[i];
          q += rule.w[i] * std::sin(a * kPi * x) * std::sin(b * kPi * x) * std::sin(c * kPi * x);
        }
        const Interval t = heatcert::triple_sine_integral<Interval>(a, b, c);
        EXPECT_TRUE(close_to_enclosure(t, q, 1e-13)) << a << ' ' << b << ' ' << c;
      }
}

TEST(GalerkinPower, OneDimensionalSquareOfFirstMode) {
  const auto psi = heatcert::to_interval(SineSeries<double>::mode(1, 1, {1}, 1.0));
  const auto sq = heatcert::galerkin_power(psi, 2, 3);
  // 2 * int sin^3 = 2 * 4/(3 pi)
  EXPECT_TRUE(oracle::encloses(sq.at({1}), Big(8) / (3 * oracle::pi())));
  EXPECT_EQ(sq.at({2}), Interval(0.0));
  EXPECT_TRUE(oracle::encloses(sq.at({3}), Big(-8) / (15 * oracle::pi())));
  EXPECT_EQ(heatcert::galerkin_power(SineSeries<double>(1, 3), 2, 3)[0], 0.0);
}

TEST(GalerkinPower, TensorCaseFactorsAndMatchesQuadrature) {
  const auto psi = SineSeries<double>::mode(2, 3, {1, 1}, 1.0);
  const auto sq = heatcert::galerkin_power(heatcert::to_interval(psi), 2, 5);
  const auto one_d = heatcert::galerkin_power(heatcert::to_interval(SineSeries<double>::mode(1, 3, {1}, 1.0)), 2, 5);
  const auto rule = oracle::composite_gauss(4);
  for (int m1 = 1; m1 <= 5; ++m1)
    for (int m2 = 1; m2 <= 5; ++m2) {
      const Interval c = sq.at({m1, m2});
      EXPECT_TRUE((one_d.at({m1}) * one_d.at({m2})).contains(c.mid()));
      const double q = 4.0 * oracle::integrate_cube(2, rule, [&](const double* x) {
        const double v = std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
        return v * v * std::sin(m1 * kPi * x[0]) * std::sin(m2 * kPi * x[1]);
      });
      EXPECT_TRUE(close_to_enclosure(c, q, 1e-12)) << m1 << ',' << m2;
    }
}

TEST(GalerkinPower, RejectsOtherExponents) {
  EXPECT_THROW(heatcert::galerkin_power(SineSeries<double>(2, 3), 3, 3), heatcert::UnsupportedExponent);
}

TEST(SineSeriesProperties, Parseval) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    const auto f = random_series(rng, d, 4);
    Big s = 0;
    for (double a : f.coefficients()) s += Big(a) * Big(a);
    const Big expected = sqrt(s / Big(1 << d));
    EXPECT_TRUE(oracle::encloses(heatcert::l2_norm(f), expected));
  }
}

TEST(SineSeriesProperties, ProductNormAndGalerkinMatchQuadrature) {
  std::mt19937_64 rng(2);
  const auto rule = oracle::composite_gauss(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 2;
    const int n = 1 + trial % 5;
    const auto f = random_series(rng, d, n);
    const auto values = sample_on_grid(f, rule);
    double q4 = 0.0;
    for (std::size_t p = 0; p < values.size(); ++p) q4 += grid_weight(rule, d, p) * std::pow(values[p], 4);
    EXPECT_TRUE(close_to_enclosure(heatcert::product_l2_norm(f, f), std::sqrt(q4), 1e-12)) << "trial " << trial;

    const auto sq = heatcert::galerkin_power(heatcert::to_interval(f), 2, n);
    for (std::size_t i = 0; i < sq.size(); ++i) {
      const auto m = sq.index(i);
      double q = 0.0;
      for (std::size_t p = 0; p < values.size(); ++p) {
        std::size_t rem = p;
        double basis = 1.0;
        for (int k = d - 1; k >= 0; --k) {
          basis *= std::sin(m[k] * kPi * rule.x[rem % rule.x.size()]);
          rem /= rule.x.size();
        }
        q += grid_weight(rule, d, p) * values[p] * values[p] * basis;
      }
      EXPECT_TRUE(close_to_enclosure(sq[i], std::ldexp(q, d), 1e-12)) << "trial " << trial << " i " << i;
    }
  }
}

TEST(SineSeriesProperties, LaplacianIsLinearAndDiagonal) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = heatcert::to_interval(random_series(rng, 2, 5));
    const auto g = heatcert::to_interval(random_series(rng, 2, 5));
    const auto lhs = heatcert::laplacian(f + g);
    const auto rhs = heatcert::laplacian(f) + heatcert::laplacian(g);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      EXPECT_TRUE(rhs[i].contains(lhs[i].mid()));
    }
  }
}
