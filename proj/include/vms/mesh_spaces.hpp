#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vms/polybasis.hpp"
#include "vms/quadrature.hpp"

namespace vms {

using Point = std::array<double, 2>;

/// Uniform tensor mesh of [0, 1]^dim with N elements per axis.
class Mesh {
 public:
  Mesh(int dim, int elements_per_axis);

  int dim() const { return dim_; }
  int elements_per_axis() const { return n_; }
  int element_count() const { return dim_ == 1 ? n_ : n_ * n_; }
  double width() const { return 1.0 / n_; }

  /// Lower-left corner of element e (elements ordered x-fastest).
  Point origin(int e) const;
  /// Element containing x and the reference coordinates of x inside it.
  std::pair<int, Point> locate(const Point& x) const;

  bool operator==(const Mesh& o) const { return dim_ == o.dim_ && n_ == o.n_; }

 private:
  int dim_;
  int n_;
};

enum class SpaceKind { H1Nodal, HdivFlux, L2Volume };

std::string_view to_string(SpaceKind kind);

enum class Factor { Nodal, Edge };

/// One local basis function as a tensor product of 1D factors.
struct LocalDof {
  int component = 0;
  std::array<int, 2> index{0, 0};
  std::array<Factor, 2> factor{Factor::Nodal, Factor::Nodal};
};

/// Local basis values at a set of reference points, already mapped to
/// physical element coordinates. Row = point, column = local dof.
struct Tabulation {
  std::array<Eigen::MatrixXd, 2> value;  // per component
  std::array<Eigen::MatrixXd, 2> grad;   // per direction (H1 only)
  Eigen::MatrixXd div;                   // flux kinds, and H1 in 1D (d/dx)
};

/// Tensor quadrature on one element: reference points and physical weights.
struct ElementQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};

ElementQuadrature element_quadrature(const Mesh& mesh, const QuadRule& rule);

/// Value of an expanded field at one point.
struct FieldValue {
  std::array<double, 2> value{0.0, 0.0};
  std::array<double, 2> grad{0.0, 0.0};
  double div = 0.0;
};

class FunctionSpace {
 public:
  FunctionSpace(Mesh mesh, int degree, SpaceKind kind, bool constrained = false);

  const Mesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  SpaceKind kind() const { return kind_; }
  bool constrained() const { return constrained_; }
  int dof_count() const { return dof_count_; }
  int components() const { return kind_ == SpaceKind::HdivFlux ? mesh_.dim() : 1; }
  /// True for spaces whose derivative pairs with L2_volume (flux in the mixed pair).
  bool has_divergence() const {
    return kind_ == SpaceKind::HdivFlux || (kind_ == SpaceKind::H1Nodal && mesh_.dim() == 1);
  }

  const NodalBasis& nodal() const { return nodal_; }
  const EdgeBasis& edge() const { return edge_; }

  std::span<const LocalDof> local_dofs() const { return local_; }
  int local_count() const { return static_cast<int>(local_.size()); }
  /// Global index of every local dof of element e; -1 for removed boundary dofs.
  std::span<const int> element_dofs(int e) const;

  Tabulation tabulate(std::span<const Point> ref_points) const;

  FieldValue evaluate(const Eigen::VectorXd& coeffs, const Point& x) const;

 private:
  double factor_value(Factor f, int i, double xi) const;
  double factor_deriv(Factor f, int i, double xi) const;

  Mesh mesh_;
  int degree_;
  SpaceKind kind_;
  bool constrained_;
  NodalBasis nodal_;
  EdgeBasis edge_;
  std::vector<LocalDof> local_;
  std::vector<int> dof_map_;  // element-major, local_count() entries per element
  int dof_count_ = 0;
};

FunctionSpace build_space(const Mesh& mesh, int p, SpaceKind kind, bool constrained = false);

/// Coarse space expressed in the coefficients of a nested finer space.
struct Embedding {
  FunctionSpace coarse;
  FunctionSpace fine;
  Eigen::MatrixXd matrix;  // fine.dof_count() x coarse.dof_count()
};

Embedding embedding(const FunctionSpace& coarse, const FunctionSpace& fine);

/// Values of every (first-component) basis function of `space` at x.
Eigen::VectorXd basis_vector(const FunctionSpace& space, const Point& x);

/// Block-diagonal stacking of two embeddings (flux block, then scalar block).
Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace vms
