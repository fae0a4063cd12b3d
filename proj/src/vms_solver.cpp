#include "vms/vms_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vms/quadrature.hpp"

namespace vms {

std::string_view to_string(Formulation f) { return f == Formulation::Direct ? "direct" : "mixed"; }

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Galerkin: return "galerkin";
    case SolverKind::Projection: return "projection";
    case SolverKind::Vms: return "vms";
  }
  return "?";
}

Velocity ProblemSpec::velocity() const { return dim == 1 ? Velocity{advection, 0.0} : Velocity{advection, advection}; }

const ScalarField& ProblemSpec::effective_source() const {
  if (source) return source;
  if (exact && exact->source) return exact->source;
  throw std::invalid_argument("problem has no source term");
}

void ProblemSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (!(nu > 0.0) || !std::isfinite(nu) || !std::isfinite(1.0 / nu)) {
    throw std::invalid_argument("nu must be a positive finite number");
  }
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (p < 1) throw std::invalid_argument("p must be at least 1");
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  if (!std::isfinite(advection)) throw std::invalid_argument("advection speed must be finite");
  (void)effective_source();
}

Eigen::Index SolutionSpaces::size() const { return primary.dof_count() + (scalar ? scalar->dof_count() : 0); }

Eigen::Index SolutionSpaces::flux_size() const { return formulation == Formulation::Mixed ? primary.dof_count() : 0; }

SolutionSpaces solution_spaces(const ProblemSpec& spec, int degree) {
  const Mesh mesh(spec.dim, spec.N);
  if (spec.formulation == Formulation::Direct) {
    return {Formulation::Direct, FunctionSpace(mesh, degree, SpaceKind::H1Nodal, true), std::nullopt};
  }
  const SpaceKind flux = spec.dim == 1 ? SpaceKind::H1Nodal : SpaceKind::HdivFlux;
  return {Formulation::Mixed, FunctionSpace(mesh, degree, flux), FunctionSpace(mesh, degree, SpaceKind::L2Volume)};
}

FieldValue scalar_value(const SolutionSpaces& s, const Eigen::VectorXd& u, const Point& x) {
  if (u.size() != s.size()) throw std::invalid_argument("scalar_value: coefficient length mismatch");
  if (s.formulation == Formulation::Direct) return s.primary.evaluate(u, x);
  return s.scalar->evaluate(u.tail(s.scalar->dof_count()), x);
}

FieldValue flux_value(const SolutionSpaces& s, const Eigen::VectorXd& u, const Point& x) {
  if (u.size() != s.size()) throw std::invalid_argument("flux_value: coefficient length mismatch");
  if (s.formulation == Formulation::Direct) {
    const FieldValue v = s.primary.evaluate(u, x);
    FieldValue out;
    out.value = v.grad;
    return out;
  }
  return s.primary.evaluate(u.head(s.primary.dof_count()), x);
}

OperatorMatrix symmetric_operator(const SolutionSpaces& s, double kappa) {
  if (s.formulation == Formulation::Direct) return stiffness_matrix(s.primary, kappa);
  const OperatorMatrix mq = mass_matrix(s.primary, s.primary, 1.0 / kappa);
  const OperatorMatrix d = divergence_matrix(*s.scalar, s.primary);
  return saddle_matrix(mq, d);
}

Discretization discretize(const ProblemSpec& spec, int degree) {
  spec.validate();
  SolutionSpaces spaces = solution_spaces(spec, degree);
  const QuadRule rule = rule_for_precision(kErrorNormPrecision);
  const ScalarField& f = spec.effective_source();
  const Velocity c = spec.velocity();
  if (spec.formulation == Formulation::Direct) {
    OperatorMatrix a = stiffness_matrix(spaces.primary, spec.nu);
    OperatorMatrix adv = advection_matrix(spaces.primary, spaces.primary, c);
    Eigen::VectorXd load = load_vector(spaces.primary, f, rule);
    return {std::move(spaces), std::move(a), std::move(adv), std::move(load)};
  }
  const FunctionSpace& flux = spaces.primary;
  const FunctionSpace& scalar = *spaces.scalar;
  const Eigen::Index nq = flux.dof_count();
  const Eigen::Index ns = scalar.dof_count();
  OperatorMatrix a = symmetric_operator(spaces, spec.nu);
  Eigen::MatrixXd cfull = Eigen::MatrixXd::Zero(nq + ns, nq + ns);
  cfull.bottomLeftCorner(ns, nq) = -advection_matrix(scalar, flux, c).matrix() / spec.nu;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(nq + ns);
  load.tail(ns) = -load_vector(scalar, f, rule);
  return {std::move(spaces), std::move(a), OperatorMatrix(MatrixRole::Coupling, std::move(cfull)), std::move(load)};
}

Eigen::MatrixXd embedding_matrix(const SolutionSpaces& coarse, const SolutionSpaces& fine) {
  if (coarse.formulation != fine.formulation) throw std::invalid_argument("embedding_matrix: formulation mismatch");
  const Eigen::MatrixXd ep = embedding(coarse.primary, fine.primary).matrix;
  if (coarse.formulation == Formulation::Direct) return ep;
  return block_diagonal(ep, embedding(*coarse.scalar, *fine.scalar).matrix);
}

ClosureOperator::ClosureOperator(const FineScaleGreens& gp, const OperatorMatrix& c_fine)
    : n_(gp.size()),
      m_(gp.embedding().cols()),
      bordered_([&] {
        const Eigen::MatrixXd& a = gp.fine_operator().matrix();
        const Eigen::MatrixXd& e = gp.embedding();
        if (c_fine.rows() != n_ || c_fine.cols() != n_) {
          throw std::invalid_argument("build_closure_operator: advection operator does not match the fine space");
        }
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_ + m_, n_ + m_);
        k.topLeftCorner(n_, n_) = a + c_fine.matrix();
        k.topRightCorner(n_, m_).noalias() = a * e;
        k.bottomLeftCorner(m_, n_) = k.topRightCorner(n_, m_).transpose();
        try {
          return DenseLU(k);
        } catch (const SingularMatrixError& err) {
          throw SingularMatrixError(std::string("I + G'C is singular; the fine space does not resolve this problem (") +
                                    err.what() + ")");
        }
      }()) {}

Eigen::VectorXd ClosureOperator::apply(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw std::invalid_argument("ClosureOperator::apply: size mismatch");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_ + m_);
  rhs.head(n_) = b;
  return bordered_.solve(rhs).head(n_);
}

Eigen::MatrixXd ClosureOperator::apply(const Eigen::MatrixXd& b) const {
  if (b.rows() != n_) throw std::invalid_argument("ClosureOperator::apply: size mismatch");
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_ + m_, b.cols());
  rhs.topRows(n_) = b;
  return bordered_.solve(rhs).topRows(n_);
}

Eigen::MatrixXd ClosureOperator::dense() const { return apply(Eigen::MatrixXd(Eigen::MatrixXd::Identity(n_, n_))); }

ClosureOperator build_closure_operator(const FineScaleGreens& gp, const OperatorMatrix& c_fine) {
  return ClosureOperator(gp, c_fine);
}

namespace {

std::string describe(const ProblemSpec& spec) {
  std::ostringstream os;
  os << "dim=" << spec.dim << " form=" << to_string(spec.formulation) << " nu=" << spec.nu << " N=" << spec.N
     << " p=" << spec.p << " k=" << spec.k;
  return os.str();
}

VmsSolution coarse_only(SolverKind kind, const ProblemSpec& spec, SolutionSpaces spaces, Eigen::VectorXd u) {
  return VmsSolution{kind, spec, std::move(spaces), std::move(u), std::nullopt, Eigen::VectorXd()};
}

}  // namespace

VmsSolution galerkin_solve(const ProblemSpec& spec) {
  Discretization d = discretize(spec, spec.p);
  const OperatorMatrix total(MatrixRole::Coupling, d.symmetric.matrix() + d.advection.matrix());
  try {
    Eigen::VectorXd u = solve_dense(total, d.load);
    return coarse_only(SolverKind::Galerkin, spec, std::move(d.spaces), std::move(u));
  } catch (const SingularMatrixError& err) {
    throw SingularMatrixError("galerkin_solve (" + describe(spec) + "): " + err.what());
  }
}

VmsSolution optimal_projection(const ProblemSpec& spec) {
  if (!spec.exact) throw std::invalid_argument("optimal_projection needs an exact solution bundle");
  spec.validate();
  SolutionSpaces spaces = solution_spaces(spec, spec.p);
  const OperatorMatrix a = symmetric_operator(spaces, spec.nu);
  const QuadRule rule = rule_for_precision(kErrorNormPrecision);
  const ExactBundle& ex = *spec.exact;
  Eigen::VectorXd rhs;
  if (spec.formulation == Formulation::Direct) {
    const double nu = spec.nu;
    rhs = functional_vector(spaces.primary, rule, [&](const Point& x) {
      Integrand d;
      const Point g = ex.grad(x);
      d.grad = {nu * g[0], nu * g[1]};
      return d;
    });
  } else {
    if (!ex.laplacian) throw std::invalid_argument("optimal_projection: mixed form needs the exact Laplacian");
    const Eigen::Index nq = spaces.primary.dof_count();
    const Eigen::Index ns = spaces.scalar->dof_count();
    rhs.resize(nq + ns);
    // (Q, q / nu) + (div Q, phi) with q / nu = grad phi
    rhs.head(nq) = functional_vector(spaces.primary, rule, [&](const Point& x) {
      Integrand d;
      d.value = ex.grad(x);
      d.div = ex.phi(x);
      return d;
    });
    // (eta, div q) with div q = nu lap phi
    rhs.tail(ns) = load_vector(*spaces.scalar, [&](const Point& x) { return spec.nu * ex.laplacian(x); }, rule);
  }
  Eigen::VectorXd u = solve_dense(a, rhs);
  return coarse_only(SolverKind::Projection, spec, std::move(spaces), std::move(u));
}

VmsSolution vms_solve(const ProblemSpec& spec) {
  spec.validate();
  if (spec.k == 0) {
    VmsSolution g = galerkin_solve(spec);
    g.solver = SolverKind::Vms;
    return g;
  }
  try {
    SolutionSpaces coarse = solution_spaces(spec, spec.p);
    Discretization fine = discretize(spec, spec.p + spec.k);
    const Eigen::MatrixXd e = embedding_matrix(coarse, fine.spaces);
    const FineScaleGreens gp(std::move(fine.symmetric), e);
    const OperatorMatrix c = std::move(fine.advection);
    const Eigen::VectorXd& f = fine.load;

    Eigen::MatrixXd rhs_block(gp.size(), e.cols() + 1);
    rhs_block.leftCols(e.cols()).noalias() = c.matrix() * e;
    rhs_block.col(e.cols()) = f;
    Eigen::MatrixXd s_block;
    {
      const ClosureOperator s = build_closure_operator(gp, c);
      s_block = s.apply(rhs_block);
    }
    const Eigen::MatrixXd ect = e.transpose() * c.matrix();
    const auto sce = s_block.leftCols(e.cols());
    const auto sf = s_block.col(e.cols());

    Eigen::MatrixXd total = gp.coarse_operator().matrix() + e.transpose() * rhs_block.leftCols(e.cols());
    total.noalias() -= ect * sce;
    const Eigen::VectorXd rhs = e.transpose() * f - ect * sf;
    Eigen::VectorXd ubar = DenseLU(total).solve(rhs);
    Eigen::VectorXd uprime = sf - sce * ubar;
    return VmsSolution{SolverKind::Vms, spec, std::move(coarse), std::move(ubar), std::move(fine.spaces), std::move(uprime)};
  } catch (const SingularMatrixError& err) {
    throw SingularMatrixError("vms_solve (" + describe(spec) + "): " + err.what());
  }
}

FineScaleField::FineScaleField(const VmsSolution& sol) : spaces_(sol.fine_spaces), coeffs_(sol.fine) {
  if (spaces_ && coeffs_.size() != spaces_->size()) throw std::invalid_argument("fine-scale vector does not match its space");
}

FieldValue FineScaleField::scalar_at(const Point& x) const {
  if (!spaces_) return {};
  return scalar_value(*spaces_, coeffs_, x);
}

FieldValue FineScaleField::flux_at(const Point& x) const {
  if (!spaces_) return {};
  return flux_value(*spaces_, coeffs_, x);
}

FineScaleField reconstruct_fine_scales(const VmsSolution& sol) { return FineScaleField(sol); }

}  // namespace vms
