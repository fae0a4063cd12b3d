#include "vms/greens.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vms {

ClassicGreens::ClassicGreens(OperatorMatrix op, FunctionSpace scalar_space, std::optional<FunctionSpace> flux_space)
    : op_(std::move(op)), scalar_(std::move(scalar_space)), flux_(std::move(flux_space)) {
  const Eigen::Index expected = scalar_.dof_count() + (flux_ ? flux_->dof_count() : 0);
  if (op_.rows() != expected || op_.cols() != expected) {
    throw std::invalid_argument("classic_greens: operator size does not match the space(s)");
  }
  op_.factorization();
}

Eigen::VectorXd ClassicGreens::apply(const Eigen::VectorXd& dual) const { return solve_dense(op_, dual); }

Eigen::VectorXd ClassicGreens::source_response(const Point& s) const {
  const Eigen::VectorXd psi = basis_vector(scalar_, s);
  if (!flux_) return apply(psi);
  const Eigen::Index nq = flux_->dof_count();
  Eigen::VectorXd dual = Eigen::VectorXd::Zero(op_.rows());
  dual.tail(scalar_.dof_count()) = -psi;
  return apply(dual).tail(op_.rows() - nq);
}

double ClassicGreens::evaluate_response(const Eigen::VectorXd& response, const Point& x) const {
  return basis_vector(scalar_, x).dot(response);
}

ClassicGreens classic_greens(const OperatorMatrix& fine_operator, const FunctionSpace& fine_space) {
  return ClassicGreens(fine_operator, fine_space);
}

ClassicGreens classic_greens(const OperatorMatrix& saddle, const FunctionSpace& flux, const FunctionSpace& scalar) {
  return ClassicGreens(saddle, scalar, flux);
}

double kernel_eval(const ClassicGreens& g, const Point& x, const Point& s) {
  return g.evaluate_response(g.source_response(s), x);
}

namespace {

OperatorMatrix galerkin_coarse(const OperatorMatrix& a, const Eigen::MatrixXd& e) {
  if (e.rows() != a.rows()) throw std::invalid_argument("fine_scale_greens: embedding rows != fine size");
  return OperatorMatrix(a.role(), e.transpose() * a.matrix() * e);
}

}  // namespace

FineScaleGreens::FineScaleGreens(OperatorMatrix a_fine, Eigen::MatrixXd e)
    : a_(std::move(a_fine)), e_(std::move(e)), coarse_(galerkin_coarse(a_, e_)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("fine_scale_greens: operator is not square");
  try {
    coarse_.factorization();
  } catch (const SingularMatrixError& err) {
    throw SingularMatrixError(std::string("fine_scale_greens: E^T A E is rank deficient, coarse space is not a valid subspace (") +
                              err.what() + ")");
  }
}

Eigen::VectorXd FineScaleGreens::apply(const Eigen::VectorXd& b) const {
  Eigen::VectorXd out = a_.factorization().solve(b);
  if (e_.cols() > 0) out -= e_ * coarse_.factorization().solve(Eigen::VectorXd(e_.transpose() * b));
  return out;
}

Eigen::MatrixXd FineScaleGreens::apply(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd out = a_.factorization().solve(b);
  if (e_.cols() > 0) out -= e_ * coarse_.factorization().solve(Eigen::MatrixXd(e_.transpose() * b));
  return out;
}

Eigen::MatrixXd FineScaleGreens::dense() const {
  return apply(Eigen::MatrixXd(Eigen::MatrixXd::Identity(size(), size())));
}

FineScaleGreens fine_scale_greens(const OperatorMatrix& a_fine, const Eigen::MatrixXd& e) {
  return FineScaleGreens(a_fine, e);
}

FineScaleGreens fine_scale_greens(const OperatorMatrix& a_fine, const Embedding& e) {
  return FineScaleGreens(a_fine, e.matrix);
}

double exact_greens_1d_poisson(double x, double s) { return x <= s ? (1.0 - s) * x : s * (1.0 - x); }

double exact_greens_2d_poisson(const Point& x, const Point& s, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("exact_greens_2d_poisson: n_terms must be >= 1");
  constexpr double pi = std::numbers::pi;
  // sinh(a) sinh(b) / sinh(c) with a + b <= c, written with non-positive exponents only.
  const auto ratio = [](double a, double b, double c) {
    return std::exp(a + b - c) * (-std::expm1(-2.0 * a)) * (-std::expm1(-2.0 * b)) / (2.0 * -std::expm1(-2.0 * c));
  };
  const double lo = std::min(x[1], s[1]);
  const double hi = std::max(x[1], s[1]);
  double sum = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    const double k = n * pi;
    sum += 2.0 / k * std::sin(k * s[0]) * std::sin(k * x[0]) * ratio(k * (1.0 - hi), k * lo, k);
  }
  return sum;
}

}  // namespace vms
