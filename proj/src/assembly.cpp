#include "vms/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

namespace vms {

DenseLU::DenseLU(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DenseLU: matrix is not square");
  if (a.rows() == 0) return;
  lu_.compute(a);
  const Eigen::VectorXd piv = lu_.matrixLU().diagonal().cwiseAbs();
  const double max_piv = piv.maxCoeff();
  const double min_piv = piv.minCoeff();
  const double tol = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * max_piv;
  if (!std::isfinite(max_piv) || !std::isfinite(min_piv) || !(min_piv > tol)) {
    throw SingularMatrixError("matrix of size " + std::to_string(a.rows()) +
                              " is singular to working precision (pivot ratio " +
                              std::to_string(max_piv > 0 ? min_piv / max_piv : 0.0) + ")");
  }
}

Eigen::VectorXd DenseLU::solve(const Eigen::VectorXd& b) const {
  if (b.size() != size()) throw std::invalid_argument("DenseLU::solve: size mismatch");
  if (size() == 0) return b;
  return lu_.solve(b);
}

Eigen::MatrixXd DenseLU::solve(const Eigen::MatrixXd& b) const {
  if (b.rows() != size()) throw std::invalid_argument("DenseLU::solve: size mismatch");
  if (size() == 0) return b;
  return lu_.solve(b);
}

struct OperatorMatrix::Cache {
  std::once_flag once;
  std::optional<DenseLU> lu;
};

OperatorMatrix::OperatorMatrix(MatrixRole role, Eigen::MatrixXd entries)
    : role_(role), entries_(std::move(entries)), cache_(std::make_shared<Cache>()) {}

const DenseLU& OperatorMatrix::factorization() const {
  std::call_once(cache_->once, [this] { cache_->lu.emplace(entries_); });
  if (!cache_->lu) throw SingularMatrixError("factorization previously failed");
  return *cache_->lu;
}

namespace {

void require_same_mesh(const FunctionSpace& a, const FunctionSpace& b) {
  if (!(a.mesh() == b.mesh())) throw std::invalid_argument("spaces live on different meshes");
}

ElementQuadrature assembly_quadrature(const FunctionSpace& a, const FunctionSpace& b) {
  return element_quadrature(a.mesh(), gauss_lobatto_rule(std::max(a.degree(), b.degree()) + 2));
}

// Add the same local matrix into every element (uniform mesh, constant data).
Eigen::MatrixXd scatter(const FunctionSpace& test, const FunctionSpace& trial, const Eigen::MatrixXd& local) {
  Eigen::MatrixXd global = Eigen::MatrixXd::Zero(test.dof_count(), trial.dof_count());
  for (int e = 0; e < test.mesh().element_count(); ++e) {
    const auto rd = test.element_dofs(e);
    const auto cd = trial.element_dofs(e);
    for (std::size_t a = 0; a < rd.size(); ++a) {
      if (rd[a] < 0) continue;
      for (std::size_t b = 0; b < cd.size(); ++b) {
        if (cd[b] < 0) continue;
        global(rd[a], cd[b]) += local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return global;
}

// sum_q w_q L(q, a) R(q, b)
Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& left, const std::vector<double>& w, const Eigen::MatrixXd& right) {
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  return left.transpose() * wv.asDiagonal() * right;
}

}  // namespace

OperatorMatrix mass_matrix(const FunctionSpace& test, const FunctionSpace& trial, double weight) {
  require_same_mesh(test, trial);
  if (test.components() != trial.components()) {
    throw std::invalid_argument("mass_matrix: spaces have different numbers of components");
  }
  const ElementQuadrature q = assembly_quadrature(test, trial);
  const Tabulation tt = test.tabulate(q.points);
  const Tabulation tr = trial.tabulate(q.points);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(test.local_count(), trial.local_count());
  for (int c = 0; c < test.components(); ++c) {
    local += weighted_product(tt.value[static_cast<std::size_t>(c)], q.weights, tr.value[static_cast<std::size_t>(c)]);
  }
  return OperatorMatrix(MatrixRole::Mass, weight * scatter(test, trial, local));
}

OperatorMatrix stiffness_matrix(const FunctionSpace& space, double kappa) {
  if (space.kind() != SpaceKind::H1Nodal) throw std::invalid_argument("stiffness_matrix needs an H1_nodal space");
  const ElementQuadrature q = assembly_quadrature(space, space);
  const Tabulation t = space.tabulate(q.points);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(space.local_count(), space.local_count());
  for (int d = 0; d < space.mesh().dim(); ++d) {
    local += weighted_product(t.grad[static_cast<std::size_t>(d)], q.weights, t.grad[static_cast<std::size_t>(d)]);
  }
  return OperatorMatrix(MatrixRole::Stiffness, kappa * scatter(space, space, local));
}

OperatorMatrix advection_matrix(const FunctionSpace& test, const FunctionSpace& trial, const Velocity& c) {
  require_same_mesh(test, trial);
  const ElementQuadrature q = assembly_quadrature(test, trial);
  const Tabulation tt = test.tabulate(q.points);
  const Tabulation tr = trial.tabulate(q.points);
  const int dim = test.mesh().dim();
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(test.local_count(), trial.local_count());
  if (test.kind() == SpaceKind::H1Nodal && trial.kind() == SpaceKind::H1Nodal) {
    for (int d = 0; d < dim; ++d) {
      local += c[static_cast<std::size_t>(d)] * weighted_product(tt.value[0], q.weights, tr.grad[static_cast<std::size_t>(d)]);
    }
  } else if (test.kind() == SpaceKind::L2Volume && trial.has_divergence()) {
    for (int d = 0; d < trial.components(); ++d) {
      local += c[static_cast<std::size_t>(d)] * weighted_product(tt.value[0], q.weights, tr.value[static_cast<std::size_t>(d)]);
    }
  } else {
    throw std::invalid_argument("advection_matrix: unsupported pair (" + std::string(to_string(test.kind())) +
                                ", " + std::string(to_string(trial.kind())) + ")");
  }
  return OperatorMatrix(MatrixRole::Advection, scatter(test, trial, local));
}

OperatorMatrix divergence_matrix(const FunctionSpace& test, const FunctionSpace& trial) {
  require_same_mesh(test, trial);
  if (test.kind() != SpaceKind::L2Volume || !trial.has_divergence()) {
    throw std::invalid_argument("divergence_matrix: needs an L2_volume test space and a flux trial space");
  }
  const ElementQuadrature q = assembly_quadrature(test, trial);
  const Tabulation tt = test.tabulate(q.points);
  const Tabulation tr = trial.tabulate(q.points);
  const Eigen::MatrixXd local = weighted_product(tt.value[0], q.weights, tr.div);
  return OperatorMatrix(MatrixRole::Divergence, scatter(test, trial, local));
}

LoadVector load_vector(const FunctionSpace& test, const ScalarField& f, const QuadRule& rule) {
  if (test.components() != 1) throw std::invalid_argument("load_vector: scalar test space required");
  const Mesh& mesh = test.mesh();
  const ElementQuadrature q = element_quadrature(mesh, rule);
  const Tabulation t = test.tabulate(q.points);
  const double h = mesh.width();
  LoadVector out = LoadVector::Zero(test.dof_count());
  Eigen::VectorXd fw(static_cast<Eigen::Index>(q.points.size()));
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Point o = mesh.origin(e);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Point x{o[0] + 0.5 * h * (q.points[k][0] + 1.0),
                    mesh.dim() == 2 ? o[1] + 0.5 * h * (q.points[k][1] + 1.0) : 0.0};
      fw(static_cast<Eigen::Index>(k)) = q.weights[k] * f(x);
    }
    const Eigen::VectorXd local = t.value[0].transpose() * fw;
    const auto dofs = test.element_dofs(e);
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      if (dofs[a] >= 0) out(dofs[a]) += local(static_cast<Eigen::Index>(a));
    }
  }
  return out;
}

Eigen::VectorXd functional_vector(const FunctionSpace& space, const QuadRule& rule,
                                  const std::function<Integrand(const Point&)>& data) {
  const Mesh& mesh = space.mesh();
  const ElementQuadrature q = element_quadrature(mesh, rule);
  const Tabulation t = space.tabulate(q.points);
  const double h = mesh.width();
  const auto nq = static_cast<Eigen::Index>(q.points.size());
  const bool has_grad = space.kind() == SpaceKind::H1Nodal;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  std::array<Eigen::VectorXd, 2> dv, dg;
  Eigen::VectorXd dd(nq);
  for (auto& v : dv) v.resize(nq);
  for (auto& v : dg) v.resize(nq);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Point o = mesh.origin(e);
    for (Eigen::Index k = 0; k < nq; ++k) {
      const Point& r = q.points[static_cast<std::size_t>(k)];
      const Point x{o[0] + 0.5 * h * (r[0] + 1.0), mesh.dim() == 2 ? o[1] + 0.5 * h * (r[1] + 1.0) : 0.0};
      const Integrand d = data(x);
      const double w = q.weights[static_cast<std::size_t>(k)];
      for (std::size_t c = 0; c < 2; ++c) {
        dv[c](k) = w * d.value[c];
        dg[c](k) = w * d.grad[c];
      }
      dd(k) = w * d.div;
    }
    Eigen::VectorXd local = Eigen::VectorXd::Zero(space.local_count());
    for (int c = 0; c < space.components(); ++c) local += t.value[static_cast<std::size_t>(c)].transpose() * dv[static_cast<std::size_t>(c)];
    if (has_grad) {
      for (int d = 0; d < mesh.dim(); ++d) local += t.grad[static_cast<std::size_t>(d)].transpose() * dg[static_cast<std::size_t>(d)];
    }
    if (space.has_divergence()) local += t.div.transpose() * dd;
    const auto dofs = space.element_dofs(e);
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      if (dofs[a] >= 0) out(dofs[a]) += local(static_cast<Eigen::Index>(a));
    }
  }
  return out;
}

OperatorMatrix saddle_matrix(const OperatorMatrix& mq, const OperatorMatrix& d) {
  if (mq.rows() != mq.cols() || d.cols() != mq.cols()) {
    throw std::invalid_argument("saddle_matrix: block dimensions do not conform");
  }
  const Eigen::Index n = mq.rows();
  const Eigen::Index m = d.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + m, n + m);
  a.topLeftCorner(n, n) = mq.matrix();
  a.topRightCorner(n, m) = d.matrix().transpose();
  a.bottomLeftCorner(m, n) = d.matrix();
  return OperatorMatrix(MatrixRole::Saddle, std::move(a));
}

Eigen::VectorXd solve_dense(const OperatorMatrix& a, const Eigen::VectorXd& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_dense: matrix is not square");
  return a.factorization().solve(b);
}

Eigen::MatrixXd solve_dense(const OperatorMatrix& a, const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_dense: matrix is not square");
  return a.factorization().solve(b);
}

}  // namespace vms
