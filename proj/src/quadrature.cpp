#include "vms/quadrature.hpp"

#include <stdexcept>
#include <string>

#include "vms/polybasis.hpp"

namespace vms {

QuadRule gauss_lobatto_rule(int n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("gauss_lobatto_rule: need at least 2 points, got " +
                                std::to_string(n_points));
  }
  const NodeSet nodes(n_points - 1);
  QuadRule rule;
  rule.points.assign(nodes.nodes().begin(), nodes.nodes().end());
  rule.weights.resize(rule.points.size());
  const double n = n_points;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const double l = legendre(n_points - 1, rule.points[i]).first;
    rule.weights[i] = 2.0 / (n * (n - 1.0) * l * l);
  }
  rule.degree_of_precision = 2 * n_points - 3;
  return rule;
}

QuadRule rule_for_precision(int dop) {
  if (dop < 1) throw std::invalid_argument("rule_for_precision: dop must be >= 1");
  // ceil((dop + 3) / 2)
  return gauss_lobatto_rule((dop + 4) / 2);
}

double integrate(const QuadRule& rule, const std::function<double(double)>& f, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("integrate: degenerate interval");
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const double x = a + half * (rule.points[static_cast<std::size_t>(i)] + 1.0);
    sum += rule.weights[static_cast<std::size_t>(i)] * f(x);
  }
  return sum * half;
}

}  // namespace vms
