#include "vms/polybasis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vms {

std::pair<double, double> legendre(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre: negative order");
  if (n == 0) return {1.0, 0.0};
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2 * k - 1) * x * cur - (k - 1) * prev) / k;
    prev = cur;
    cur = next;
  }
  // L'_n from the three-term relation; at the endpoints use the closed form.
  double deriv;
  if (std::abs(1.0 - x * x) < 1e-300) {
    deriv = 0.5 * n * (n + 1) * (x > 0 ? 1.0 : (n % 2 == 0 ? -1.0 : 1.0));
  } else {
    deriv = n * (prev - x * cur) / (1.0 - x * x);
  }
  return {cur, deriv};
}

NodeSet::NodeSet(int degree) : degree_(degree) {
  if (degree < 1) {
    throw std::invalid_argument("gll_nodes: degree must be >= 1, got " + std::to_string(degree));
  }
  const int p = degree;
  nodes_.assign(static_cast<std::size_t>(p + 1), 0.0);
  nodes_.front() = -1.0;
  nodes_.back() = 1.0;

  // Newton on (1 - x^2) L'_p from Chebyshev-Gauss-Lobatto guesses; the left
  // half is computed and mirrored so the set is exactly symmetric.
  for (int i = 1; i <= p / 2; ++i) {
    double x = -std::cos(std::numbers::pi * i / p);
    for (int it = 0; it < 100; ++it) {
      const double lp = legendre(p, x).first;
      const double lpm1 = legendre(p - 1, x).first;
      const double dx = (lpm1 - x * lp) / ((p + 1) * lp);
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes_[static_cast<std::size_t>(i)] = x;
    nodes_[static_cast<std::size_t>(p - i)] = -x;
  }
  if (p % 2 == 0) nodes_[static_cast<std::size_t>(p / 2)] = 0.0;
}

NodeSet gll_nodes(int p) { return NodeSet(p); }

NodalBasis::NodalBasis(NodeSet nodes) : nodes_(std::move(nodes)) {
  const int n = nodes_.size();
  inv_denominators_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double d = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) d *= nodes_[i] - nodes_[j];
    }
    inv_denominators_[static_cast<std::size_t>(i)] = 1.0 / d;
  }
  diff_.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) diff_(j, i) = derivative(i, nodes_[j]);
  }
}

void NodalBasis::check_index(int i) const {
  if (i < 0 || i > degree()) {
    throw std::invalid_argument("nodal basis index " + std::to_string(i) + " out of range [0, " +
                                std::to_string(degree()) + "]");
  }
}

double NodalBasis::value(int i, double x) const {
  check_index(i);
  // Product form: exact Kronecker property at the nodes.
  double v = 1.0;
  for (int j = 0; j < size(); ++j) {
    if (j != i) v *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
  }
  return v;
}

double NodalBasis::derivative(int i, double x) const {
  check_index(i);
  const int n = size();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k == i) continue;
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != i && j != k) prod *= x - nodes_[j];
    }
    sum += prod;
  }
  return sum * inv_denominators_[static_cast<std::size_t>(i)];
}

void NodalBasis::values(double x, std::span<double> out) const {
  for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = value(i, x);
}

void NodalBasis::derivatives(double x, std::span<double> out) const {
  for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = derivative(i, x);
}

EdgeBasis::EdgeBasis(NodeSet nodes) : nodal_(std::move(nodes)) {}

double EdgeBasis::value(int j, double x) const {
  if (j < 0 || j >= size()) {
    throw std::invalid_argument("edge basis index " + std::to_string(j) + " out of range [0, " +
                                std::to_string(size() - 1) + "]");
  }
  double v = 0.0;
  for (int k = 0; k <= j; ++k) v -= nodal_.derivative(k, x);
  return v;
}

void EdgeBasis::values(double x, std::span<double> out) const {
  double acc = 0.0;
  for (int j = 0; j < size(); ++j) {
    acc -= nodal_.derivative(j, x);
    out[static_cast<std::size_t>(j)] = acc;
  }
}

double EdgeBasis::integral(int j, double a, double b) const {
  if (j < 0 || j >= size()) throw std::invalid_argument("edge basis index out of range");
  double v = 0.0;
  for (int k = 0; k <= j; ++k) v -= nodal_.value(k, b) - nodal_.value(k, a);
  return v;
}

double eval_nodal(const NodalBasis& basis, int i, double x) { return basis.value(i, x); }

double eval_nodal_deriv(const NodalBasis& basis, int i, double x) { return basis.derivative(i, x); }

double eval_edge(const EdgeBasis& basis, int i, double x) {
  if (i < 1 || i > basis.size()) {
    throw std::invalid_argument("edge index " + std::to_string(i) + " out of range [1, " +
                                std::to_string(basis.size()) + "]");
  }
  return basis.value(i - 1, x);
}

}  // namespace vms
