#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vms {

/// Value and first derivative of the Legendre polynomial L_n at x.
std::pair<double, double> legendre(int n, double x);

/// Gauss-Lobatto-Legendre points of a degree-p element on [-1, 1].
class NodeSet {
 public:
  explicit NodeSet(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  double operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::span<const double> nodes() const { return nodes_; }

 private:
  int degree_;
  std::vector<double> nodes_;
};

/// Roots of (1 - x^2) L'_p(x), ascending. Throws std::invalid_argument for p < 1.
NodeSet gll_nodes(int p);

/// Lagrange polynomials h_0..h_p through a GLL node set.
class NodalBasis {
 public:
  explicit NodalBasis(NodeSet nodes);

  const NodeSet& node_set() const { return nodes_; }
  int degree() const { return nodes_.degree(); }
  int size() const { return nodes_.size(); }

  double value(int i, double x) const;
  double derivative(int i, double x) const;

  // Fill all p+1 values / derivatives at x.
  void values(double x, std::span<double> out) const;
  void derivatives(double x, std::span<double> out) const;

  /// D(j, i) = h_i'(x_j).
  const Eigen::MatrixXd& differentiation_matrix() const { return diff_; }

 private:
  void check_index(int i) const;

  NodeSet nodes_;
  std::vector<double> inv_denominators_;  // 1 / prod_{j != i} (x_i - x_j)
  Eigen::MatrixXd diff_;
};

/// Edge polynomials e_j(x) = -sum_{k <= j} h_k'(x), j = 0..p-1.
///
/// The j-th edge function integrates to one over the sub-interval
/// [x_j, x_{j+1}] and to zero over every other sub-interval between
/// consecutive GLL nodes. Indices here are zero-based; eval_edge() uses
/// the one-based numbering e_1..e_p.
class EdgeBasis {
 public:
  explicit EdgeBasis(NodeSet nodes);

  const NodeSet& node_set() const { return nodal_.node_set(); }
  int degree() const { return nodal_.degree(); }
  int size() const { return nodal_.degree(); }

  double value(int j, double x) const;
  void values(double x, std::span<double> out) const;

  /// Exact integral of e_j over [a, b] via the telescoping nodal sum.
  double integral(int j, double a, double b) const;

  const NodalBasis& nodal() const { return nodal_; }

 private:
  NodalBasis nodal_;
};

double eval_nodal(const NodalBasis& basis, int i, double x);
double eval_nodal_deriv(const NodalBasis& basis, int i, double x);
/// One-based: i in [1, p].
double eval_edge(const EdgeBasis& basis, int i, double x);

}  // namespace vms
