#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "vms/mesh_spaces.hpp"
#include "vms/quadrature.hpp"

namespace vms {

enum class MatrixRole { Mass, Stiffness, Divergence, Advection, Saddle, Coupling };

/// Raised when a factorization meets a zero pivot at working precision.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// LU with partial pivoting; construction fails on numerically singular input.
class DenseLU {
 public:
  explicit DenseLU(const Eigen::MatrixXd& a);

  Eigen::Index size() const { return lu_.rows(); }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Immutable dense operator with a lazily computed, shared LU factorization.
class OperatorMatrix {
 public:
  OperatorMatrix(MatrixRole role, Eigen::MatrixXd entries);

  MatrixRole role() const { return role_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  /// Thread-safe; computed on first use. Throws SingularMatrixError.
  const DenseLU& factorization() const;

 private:
  struct Cache;
  MatrixRole role_;
  Eigen::MatrixXd entries_;
  std::shared_ptr<Cache> cache_;
};

using LoadVector = Eigen::VectorXd;
using Velocity = std::array<double, 2>;
using ScalarField = std::function<double(const Point&)>;

OperatorMatrix mass_matrix(const FunctionSpace& test, const FunctionSpace& trial, double weight = 1.0);
OperatorMatrix stiffness_matrix(const FunctionSpace& space, double kappa = 1.0);
/// Direct form (H1 x H1): (v, c . grad u). Mixed form (L2 x flux): (eta, c . q).
OperatorMatrix advection_matrix(const FunctionSpace& test, const FunctionSpace& trial, const Velocity& c);
OperatorMatrix divergence_matrix(const FunctionSpace& test, const FunctionSpace& trial);
LoadVector load_vector(const FunctionSpace& test, const ScalarField& f, const QuadRule& rule);
/// Pointwise data paired with a basis function's value, gradient and divergence.
struct Integrand {
  std::array<double, 2> value{0.0, 0.0};
  std::array<double, 2> grad{0.0, 0.0};
  double div = 0.0;
};

/// out_a = sum_e int_e [value(psi_a) . d.value + grad(psi_a) . d.grad + div(psi_a) d.div].
Eigen::VectorXd functional_vector(const FunctionSpace& space, const QuadRule& rule,
                                  const std::function<Integrand(const Point&)>& data);

/// [[Mq, D^T], [D, 0]].
OperatorMatrix saddle_matrix(const OperatorMatrix& mq, const OperatorMatrix& d);

Eigen::VectorXd solve_dense(const OperatorMatrix& a, const Eigen::VectorXd& b);
Eigen::MatrixXd solve_dense(const OperatorMatrix& a, const Eigen::MatrixXd& b);

}  // namespace vms
