#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "vms/assembly.hpp"
#include "vms/greens.hpp"
#include "vms/mesh_spaces.hpp"

namespace vms {

enum class Formulation { Direct, Mixed };
enum class SolverKind { Galerkin, Projection, Vms };

std::string_view to_string(Formulation f);
std::string_view to_string(SolverKind s);

using VectorField = std::function<Point(const Point&)>;

/// Closed-form solution of an advection-diffusion problem with the data
/// that produces it.
struct ExactBundle {
  ScalarField phi;
  VectorField grad;
  ScalarField laplacian;
  ScalarField source;
  double peclet = 0.0;
};

struct ProblemSpec {
  int dim = 1;
  Formulation formulation = Formulation::Direct;
  double nu = 0.01;
  int N = 4;
  int p = 1;
  int k = 1;
  /// Velocity is advection * (1, 1); zero gives pure diffusion.
  double advection = 1.0;
  /// Falls back to exact->source when empty.
  ScalarField source;
  std::optional<ExactBundle> exact;

  Velocity velocity() const;
  const ScalarField& effective_source() const;
  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

/// Spaces carrying one discrete solution. The direct form uses a single
/// constrained H1 space; the mixed form stacks (flux, scalar).
struct SolutionSpaces {
  Formulation formulation;
  FunctionSpace primary;
  std::optional<FunctionSpace> scalar;

  Eigen::Index size() const;
  Eigen::Index flux_size() const;
};

SolutionSpaces solution_spaces(const ProblemSpec& spec, int degree);

/// Scalar unknown at x. Direct: value and gradient. Mixed: value only.
FieldValue scalar_value(const SolutionSpaces& s, const Eigen::VectorXd& u, const Point& x);
/// Mixed flux unknown at x (value and divergence). Direct: gradient of the scalar.
FieldValue flux_value(const SolutionSpaces& s, const Eigen::VectorXd& u, const Point& x);

/// Symmetric operator A, advection C and load F on one space pair.
///
/// Direct: A = nu K, C = (v, c . grad u), F = (v, f).
/// Mixed, with q = nu grad phi: A = [[M / nu, D^T], [D, 0]],
/// C = [[0, 0], [-(eta, c . Q) / nu, 0]], F = [0; -(eta, f)].
struct Discretization {
  SolutionSpaces spaces;
  OperatorMatrix symmetric;
  OperatorMatrix advection;
  Eigen::VectorXd load;
};

Discretization discretize(const ProblemSpec& spec, int degree);
/// Symmetric part only, with the diffusion coefficient replaced by kappa.
OperatorMatrix symmetric_operator(const SolutionSpaces& s, double kappa);
/// Embedding of a coarse solution space into a finer one (block diagonal for mixed).
Eigen::MatrixXd embedding_matrix(const SolutionSpaces& coarse, const SolutionSpaces& fine);

struct VmsSolution {
  SolverKind solver;
  ProblemSpec spec;
  SolutionSpaces coarse_spaces;
  Eigen::VectorXd coarse;
  /// Fine-scale coefficients on degree p + k; absent for Galerkin and projection.
  std::optional<SolutionSpaces> fine_spaces;
  Eigen::VectorXd fine;

  FieldValue scalar_at(const Point& x) const { return scalar_value(coarse_spaces, coarse, x); }
  FieldValue flux_at(const Point& x) const { return flux_value(coarse_spaces, coarse, x); }
};

/// S = (I + G' C)^{-1} G'.
///
/// With P = I - E (E^T A E)^{-1} E^T A, S b is the u' of the bordered system
///   [[A + C, A E], [E^T A, 0]] [u'; l] = [b; 0],
/// so S is applied through one LU of size n + n_coarse and never formed
/// unless dense() is called. The bordered matrix is singular exactly when
/// I + G' C is.
class ClosureOperator {
 public:
  ClosureOperator(const FineScaleGreens& gp, const OperatorMatrix& c_fine);

  Eigen::Index size() const { return n_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& b) const;
  Eigen::MatrixXd dense() const;

 private:
  Eigen::Index n_;
  Eigen::Index m_;
  DenseLU bordered_;
};

ClosureOperator build_closure_operator(const FineScaleGreens& gp, const OperatorMatrix& c_fine);

VmsSolution galerkin_solve(const ProblemSpec& spec);
/// Energy projection of the exact solution onto the coarse space; needs spec.exact.
VmsSolution optimal_projection(const ProblemSpec& spec);
/// Throws SingularMatrixError when I + G' C is singular.
VmsSolution vms_solve(const ProblemSpec& spec);

/// Fine-scale field u' = sum u'_j psi_j on the enriched space.
class FineScaleField {
 public:
  explicit FineScaleField(const VmsSolution& sol);

  bool empty() const { return !spaces_.has_value(); }
  FieldValue scalar_at(const Point& x) const;
  FieldValue flux_at(const Point& x) const;

 private:
  std::optional<SolutionSpaces> spaces_;
  Eigen::VectorXd coeffs_;
};

FineScaleField reconstruct_fine_scales(const VmsSolution& sol);

}  // namespace vms
