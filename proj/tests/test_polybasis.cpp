#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vms/polybasis.hpp"
#include "vms/quadrature.hpp"

namespace {

using vms::EdgeBasis;
using vms::NodalBasis;

// Independent recurrence for (1 - x^2) L_p'(x) = p (L_{p-1} - x L_p).
double lobatto_poly(int p, double x) {
  double l0 = 1.0, l1 = x;
  for (int n = 1; n < p; ++n) {
    const double l2 = ((2.0 * n + 1.0) * x * l1 - n * l0) / (n + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return p * (l0 - x * l1);
}

// Interior roots by scanning for sign changes and bisecting.
std::vector<double> bisection_roots(int p) {
  std::vector<double> roots{-1.0};
  const int scan = 20000;
  double xa = -1.0 + 1e-12, fa = lobatto_poly(p, xa);
  for (int i = 1; i <= scan; ++i) {
    const double xb = -1.0 + 2.0 * i / scan - (i == scan ? 1e-12 : 0.0);
    const double fb = lobatto_poly(p, xb);
    if (fa == 0.0) {
      roots.push_back(xa);
    } else if (fa * fb < 0.0) {
      double lo = xa, hi = xb;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lobatto_poly(p, lo) * lobatto_poly(p, mid) <= 0.0 ? hi : lo) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    xa = xb;
    fa = fb;
  }
  roots.push_back(1.0);
  return roots;
}

TEST(GllNodes, DegreeOneIsEndpoints) {
  const auto n = vms::gll_nodes(1);
  ASSERT_EQ(n.size(), 2);
  EXPECT_EQ(n[0], -1.0);
  EXPECT_EQ(n[1], 1.0);
}

TEST(GllNodes, DegreeTwoHasMidpoint) {
  const auto n = vms::gll_nodes(2);
  ASSERT_EQ(n.size(), 3);
  EXPECT_EQ(n[0], -1.0);
  EXPECT_NEAR(n[1], 0.0, 1e-15);
  EXPECT_EQ(n[2], 1.0);
}

TEST(GllNodes, DegreeFourSymmetric) {
  const auto n = vms::gll_nodes(4);
  ASSERT_EQ(n.size(), 5);
  EXPECT_NEAR(n[1], -n[3], 1e-15);
  EXPECT_NEAR(n[3], std::sqrt(3.0 / 7.0), 1e-14);
}

TEST(GllNodes, MatchBisectionOracle) {
  for (int p = 1; p <= 12; ++p) {
    const auto n = vms::gll_nodes(p);
    const auto ref = bisection_roots(p);
    ASSERT_EQ(static_cast<int>(ref.size()), p + 1) << "p=" << p;
    for (int i = 0; i <= p; ++i) EXPECT_NEAR(n[i], ref[static_cast<std::size_t>(i)], 1e-13) << "p=" << p << " i=" << i;
  }
}

TEST(GllNodes, SortedAndSymmetric) {
  for (int p = 1; p <= 16; ++p) {
    const auto n = vms::gll_nodes(p);
    EXPECT_EQ(n[0], -1.0);
    EXPECT_EQ(n[p], 1.0);
    for (int i = 0; i < p; ++i) EXPECT_LT(n[i], n[i + 1]);
    for (int i = 0; i <= p; ++i) EXPECT_NEAR(n[i], -n[p - i], 1e-14);
  }
}

TEST(GllNodes, RejectsNonPositiveDegree) {
  EXPECT_THROW(vms::gll_nodes(0), std::invalid_argument);
  EXPECT_THROW(vms::gll_nodes(-3), std::invalid_argument);
}

TEST(NodalBasis, SpecExamples) {
  const NodalBasis b2(vms::gll_nodes(2));
  EXPECT_EQ(vms::eval_nodal(b2, 1, 0.0), 1.0);
  EXPECT_EQ(vms::eval_nodal(b2, 0, 0.0), 0.0);
  EXPECT_NEAR(vms::eval_nodal_deriv(b2, 1, 0.0), 0.0, 1e-15);
  const NodalBasis b1(vms::gll_nodes(1));
  EXPECT_NEAR(vms::eval_nodal(b1, 1, 0.5), 0.75, 1e-15);
  for (double x : {-1.0, -0.3, 0.2, 1.0}) EXPECT_NEAR(vms::eval_nodal_deriv(b1, 1, x), 0.5, 1e-15);
}

TEST(NodalBasis, KroneckerAtNodes) {
  for (int p = 1; p <= 8; ++p) {
    const NodalBasis b(vms::gll_nodes(p));
    for (int i = 0; i <= p; ++i) {
      for (int j = 0; j <= p; ++j) EXPECT_EQ(b.value(i, b.node_set()[j]), i == j ? 1.0 : 0.0);
    }
  }
}

TEST(NodalBasis, PartitionOfUnityProperty) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int p = 1; p <= 8; ++p) {
    const NodalBasis b(vms::gll_nodes(p));
    for (int t = 0; t < 100; ++t) {
      const double x = u(rng);
      double s = 0.0, ds = 0.0;
      for (int i = 0; i <= p; ++i) {
        s += b.value(i, x);
        ds += b.derivative(i, x);
      }
      EXPECT_NEAR(s, 1.0, 1e-13);
      EXPECT_NEAR(ds, 0.0, 1e-11);
    }
  }
}

TEST(NodalBasis, DerivativeMatchesFiniteDifference) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  for (int p = 1; p <= 8; ++p) {
    const NodalBasis b(vms::gll_nodes(p));
    for (int t = 0; t < 50; ++t) {
      const double x = u(rng);
      const double step = 1e-6;
      for (int i = 0; i <= p; ++i) {
        const double fd = (b.value(i, x + step) - b.value(i, x - step)) / (2 * step);
        EXPECT_NEAR(b.derivative(i, x), fd, 1e-6);
      }
    }
  }
}

TEST(NodalBasis, DifferentiationMatrixConsistent) {
  const NodalBasis b(vms::gll_nodes(5));
  const auto& d = b.differentiation_matrix();
  for (int j = 0; j <= 5; ++j) {
    for (int i = 0; i <= 5; ++i) EXPECT_NEAR(d(j, i), b.derivative(i, b.node_set()[j]), 1e-12);
  }
}

TEST(NodalBasis, IndexOutOfRangeThrows) {
  const NodalBasis b(vms::gll_nodes(2));
  EXPECT_THROW(vms::eval_nodal(b, 3, 0.0), std::invalid_argument);
  EXPECT_THROW(vms::eval_nodal(b, -1, 0.0), std::invalid_argument);
  EXPECT_THROW(vms::eval_nodal_deriv(b, 3, 0.0), std::invalid_argument);
}

TEST(EdgeBasis, SpecExamples) {
  const EdgeBasis e1(vms::gll_nodes(1));
  for (double x : {-1.0, 0.1, 1.0}) EXPECT_NEAR(vms::eval_edge(e1, 1, x), 0.5, 1e-15);
  const auto rule = vms::rule_for_precision(20);
  for (int p = 1; p <= 6; ++p) {
    const EdgeBasis e(vms::gll_nodes(p));
    for (int i = 1; i <= p; ++i) {
      EXPECT_NEAR(vms::integrate(rule, [&](double x) { return vms::eval_edge(e, i, x); }, -1.0, 1.0), 1.0, 1e-12);
    }
  }
  const EdgeBasis e2(vms::gll_nodes(2));
  const auto& n = e2.node_set();
  EXPECT_NEAR(vms::integrate(rule, [&](double x) { return vms::eval_edge(e2, 2, x); }, n[0], n[1]), 0.0, 1e-13);
}

TEST(EdgeBasis, HistopolationIdentityByQuadrature) {
  const auto rule = vms::rule_for_precision(25);
  for (int p = 1; p <= 8; ++p) {
    const EdgeBasis e(vms::gll_nodes(p));
    const auto& n = e.node_set();
    for (int i = 1; i <= p; ++i) {
      double total = 0.0;
      for (int j = 1; j <= p; ++j) {
        const double v = vms::integrate(rule, [&](double x) { return vms::eval_edge(e, i, x); }, n[j - 1], n[j]);
        EXPECT_NEAR(v, i == j ? 1.0 : 0.0, 1e-12) << "p=" << p << " i=" << i << " j=" << j;
        total += v;
      }
      EXPECT_NEAR(total, e.integral(i - 1, -1.0, 1.0), 1e-12);
    }
  }
}

TEST(EdgeBasis, ExactIntegralMatchesQuadrature) {
  const auto rule = vms::rule_for_precision(25);
  const EdgeBasis e(vms::gll_nodes(5));
  for (int j = 0; j < 5; ++j) {
    const double q = vms::integrate(rule, [&](double x) { return e.value(j, x); }, -0.3, 0.7);
    EXPECT_NEAR(e.integral(j, -0.3, 0.7), q, 1e-13);
  }
}

TEST(EdgeBasis, IndexOutOfRangeThrows) {
  const EdgeBasis e(vms::gll_nodes(2));
  EXPECT_THROW(vms::eval_edge(e, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(vms::eval_edge(e, 3, 0.0), std::invalid_argument);
}

}  // namespace
