#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "vms/quadrature.hpp"

namespace {

double monomial_integral(int m) { return m % 2 ? 0.0 : 2.0 / (m + 1); }

TEST(GaussLobatto, TwoPoints) {
  const auto r = vms::gauss_lobatto_rule(2);
  ASSERT_EQ(r.size(), 2);
  EXPECT_EQ(r.points[0], -1.0);
  EXPECT_EQ(r.points[1], 1.0);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
  EXPECT_EQ(r.degree_of_precision, 1);
}

TEST(GaussLobatto, ThreePoints) {
  const auto r = vms::gauss_lobatto_rule(3);
  EXPECT_NEAR(r.points[1], 0.0, 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.weights[2], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(vms::integrate(r, [](double x) { return x * x; }, -1.0, 1.0), 2.0 / 3.0, 1e-15);
}

TEST(GaussLobatto, WeightsAndExactnessProperty) {
  for (int n = 2; n <= 20; ++n) {
    const auto r = vms::gauss_lobatto_rule(n);
    EXPECT_EQ(r.degree_of_precision, 2 * n - 3);
    for (double w : r.weights) EXPECT_GT(w, 0.0);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 2.0, 1e-13);
    for (int m = 0; m <= r.degree_of_precision; ++m) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[static_cast<std::size_t>(i)] * std::pow(r.points[static_cast<std::size_t>(i)], m);
      const double exact = monomial_integral(m);
      EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "n=" << n << " m=" << m;
    }
  }
}

TEST(GaussLobatto, NotExactBeyondPrecision) {
  for (int n = 2; n <= 10; ++n) {
    const auto r = vms::gauss_lobatto_rule(n);
    const int m = r.degree_of_precision + 1;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weights[static_cast<std::size_t>(i)] * std::pow(r.points[static_cast<std::size_t>(i)], m);
    EXPECT_GT(std::abs(s - monomial_integral(m)), 1e-6);
  }
}

TEST(GaussLobatto, RejectsTooFewPoints) {
  EXPECT_THROW(vms::gauss_lobatto_rule(1), std::invalid_argument);
  EXPECT_THROW(vms::gauss_lobatto_rule(0), std::invalid_argument);
}

TEST(RuleForPrecision, SpecExamples) {
  EXPECT_EQ(vms::rule_for_precision(25).size(), 14);
  EXPECT_EQ(vms::rule_for_precision(1).size(), 2);
  EXPECT_EQ(vms::rule_for_precision(3).size(), 3);
  EXPECT_EQ(vms::rule_for_precision(vms::kErrorNormPrecision).degree_of_precision, 25);
  for (int dop = 1; dop <= 30; ++dop) {
    const auto r = vms::rule_for_precision(dop);
    EXPECT_GE(r.degree_of_precision, dop);
    EXPECT_LT(r.degree_of_precision - 2, dop);
  }
  EXPECT_THROW(vms::rule_for_precision(0), std::invalid_argument);
}

TEST(Integrate, SpecExamples) {
  const auto r3 = vms::gauss_lobatto_rule(3);
  EXPECT_NEAR(vms::integrate(r3, [](double) { return 1.0; }, 0.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(vms::integrate(r3, [](double x) { return x; }, 0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(vms::integrate(r3, [](double x) { return x * x * x; }, 0.0, 1.0), 0.25, 1e-15);
}

TEST(Integrate, DegenerateIntervalThrows) {
  const auto r = vms::gauss_lobatto_rule(3);
  EXPECT_THROW(vms::integrate(r, [](double) { return 1.0; }, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(vms::integrate(r, [](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
}

}  // namespace
