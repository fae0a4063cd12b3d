#pragma once

#include <optional>

#include <Eigen/Dense>

#include "vms/assembly.hpp"
#include "vms/mesh_spaces.hpp"

namespace vms {

/// Discrete Greens' function g_h(x, s) = psi(x) A^{-1} psi(s)^T of a
/// symmetric operator.
///
/// For the direct form `A` acts on a constrained H1 space and psi is its
/// basis. For the mixed form `A` is the saddle operator [[M, D^T], [D, 0]]
/// on (flux, scalar) and psi is the scalar basis placed in the second block;
/// a unit source enters the divergence row as -psi(s) so that the kernel
/// is the response of -div grad.
class ClassicGreens {
 public:
  ClassicGreens(OperatorMatrix op, FunctionSpace scalar_space, std::optional<FunctionSpace> flux_space = std::nullopt);

  bool mixed() const { return flux_.has_value(); }
  const OperatorMatrix& op() const { return op_; }
  const FunctionSpace& scalar_space() const { return scalar_; }

  /// A^{-1} applied to a dual (load) vector.
  Eigen::VectorXd apply(const Eigen::VectorXd& dual) const;

  /// Scalar-space coefficients of g_h(., s); reuse across many x.
  Eigen::VectorXd source_response(const Point& s) const;
  double evaluate_response(const Eigen::VectorXd& response, const Point& x) const;

 private:
  OperatorMatrix op_;
  FunctionSpace scalar_;
  std::optional<FunctionSpace> flux_;
};

/// Direct form. Throws SingularMatrixError for singular operators.
ClassicGreens classic_greens(const OperatorMatrix& fine_operator, const FunctionSpace& fine_space);
/// Mixed form on a (flux, scalar) pair.
ClassicGreens classic_greens(const OperatorMatrix& saddle, const FunctionSpace& flux, const FunctionSpace& scalar);

double kernel_eval(const ClassicGreens& g, const Point& x, const Point& s);

/// G' = A^{-1} - E (E^T A E)^{-1} E^T for the energy-norm projector onto range(E).
///
/// The dual functionals of that projector are mu_i(w) = a(psi_i, w), i.e. the
/// rows of E^T A, which turns G - G mu^T [mu G mu^T]^{-1} mu G into the
/// two-term form above. G' is applied through factorizations; dense()
/// materializes it.
class FineScaleGreens {
 public:
  FineScaleGreens(OperatorMatrix a_fine, Eigen::MatrixXd e);

  Eigen::Index size() const { return a_.rows(); }
  const OperatorMatrix& fine_operator() const { return a_; }
  const Eigen::MatrixXd& embedding() const { return e_; }
  /// E^T A E.
  const OperatorMatrix& coarse_operator() const { return coarse_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& b) const;
  Eigen::MatrixXd dense() const;

 private:
  OperatorMatrix a_;
  Eigen::MatrixXd e_;
  OperatorMatrix coarse_;
};

FineScaleGreens fine_scale_greens(const OperatorMatrix& a_fine, const Eigen::MatrixXd& e);
FineScaleGreens fine_scale_greens(const OperatorMatrix& a_fine, const Embedding& e);

/// Greens' function of -u'' on [0, 1] with homogeneous Dirichlet ends.
double exact_greens_1d_poisson(double x, double s);
/// Eigenfunction series for -lap u on [0, 1]^2, truncated after n_terms.
double exact_greens_2d_poisson(const Point& x, const Point& s, int n_terms = 100);

}  // namespace vms
