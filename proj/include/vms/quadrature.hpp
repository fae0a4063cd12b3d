#pragma once

#include <functional>
#include <vector>

namespace vms {

/// Degree of precision used for every error-norm integral.
inline constexpr int kErrorNormPrecision = 25;

struct QuadRule {
  std::vector<double> points;   // on [-1, 1]
  std::vector<double> weights;
  int degree_of_precision = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Lobatto rule, exact through degree 2n - 3.
QuadRule gauss_lobatto_rule(int n_points);

/// Smallest Gauss-Lobatto rule exact through degree `dop`.
QuadRule rule_for_precision(int dop);

/// Affine-mapped quadrature of f over [a, b].
double integrate(const QuadRule& rule, const std::function<double(double)>& f, double a, double b);

}  // namespace vms
