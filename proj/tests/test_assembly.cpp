#include <gtest/gtest.h>

#include <random>

#include "vms/assembly.hpp"

namespace {

using vms::FunctionSpace;
using vms::Mesh;
using vms::SpaceKind;

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

const FunctionSpace& unit_p1() {
  static const FunctionSpace s(Mesh(1, 1), 1, SpaceKind::H1Nodal);
  return s;
}

TEST(MassMatrix, SpecExamples) {
  Eigen::Matrix2d expect;
  expect << 1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3;
  const auto m = vms::mass_matrix(unit_p1(), unit_p1());
  EXPECT_EQ(m.role(), vms::MatrixRole::Mass);
  EXPECT_LT(max_abs(m.matrix() - expect), 1e-15);
  EXPECT_LT(max_abs(vms::mass_matrix(unit_p1(), unit_p1(), 2.0).matrix() - 2.0 * expect), 1e-15);
  const FunctionSpace l2(Mesh(1, 1), 1, SpaceKind::L2Volume);
  const auto ml = vms::mass_matrix(l2, l2).matrix();
  ASSERT_EQ(ml.rows(), 1);
  EXPECT_NEAR(ml(0, 0), 1.0, 1e-15);
}

TEST(MassMatrix, SymmetricPositiveDefinite) {
  for (auto kind : {SpaceKind::H1Nodal, SpaceKind::HdivFlux, SpaceKind::L2Volume}) {
    const FunctionSpace s(Mesh(2, 3), 3, kind);
    const Eigen::MatrixXd m = vms::mass_matrix(s, s).matrix();
    EXPECT_LT(max_abs(m - m.transpose()), 1e-12 * max_abs(m));
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    EXPECT_EQ(llt.info(), Eigen::Success);
  }
}

TEST(MassMatrix, IncompatibleSpacesThrow) {
  const FunctionSpace a(Mesh(1, 2), 1, SpaceKind::H1Nodal);
  const FunctionSpace b(Mesh(1, 3), 1, SpaceKind::H1Nodal);
  EXPECT_THROW(vms::mass_matrix(a, b), std::invalid_argument);
  const FunctionSpace q(Mesh(2, 2), 1, SpaceKind::HdivFlux);
  const FunctionSpace l(Mesh(2, 2), 1, SpaceKind::L2Volume);
  EXPECT_THROW(vms::mass_matrix(q, l), std::invalid_argument);
}

TEST(StiffnessMatrix, SpecExamples) {
  Eigen::Matrix2d expect;
  expect << 1, -1, -1, 1;
  EXPECT_LT(max_abs(vms::stiffness_matrix(unit_p1()).matrix() - expect), 1e-14);
  EXPECT_LT(max_abs(vms::stiffness_matrix(unit_p1(), 0.01).matrix() - 0.01 * expect), 1e-16);
  const FunctionSpace s(Mesh(2, 3), 3, SpaceKind::H1Nodal);
  const Eigen::MatrixXd k = vms::stiffness_matrix(s).matrix();
  EXPECT_LT(k.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(vms::stiffness_matrix(FunctionSpace(Mesh(1, 2), 1, SpaceKind::L2Volume)), std::invalid_argument);
}

TEST(StiffnessMatrix, ConstrainedIsSpd) {
  for (int dim : {1, 2}) {
    const FunctionSpace s(Mesh(dim, 3), 3, SpaceKind::H1Nodal, true);
    const Eigen::MatrixXd k = vms::stiffness_matrix(s).matrix();
    EXPECT_LT(max_abs(k - k.transpose()), 1e-12 * max_abs(k));
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(k).info(), Eigen::Success);
  }
}

TEST(AdvectionMatrix, SpecExamples) {
  Eigen::Matrix2d expect;
  expect << -0.5, 0.5, -0.5, 0.5;
  EXPECT_LT(max_abs(vms::advection_matrix(unit_p1(), unit_p1(), {1.0, 0.0}).matrix() - expect), 1e-15);
  EXPECT_EQ(max_abs(vms::advection_matrix(unit_p1(), unit_p1(), {0.0, 0.0}).matrix()), 0.0);
}

TEST(AdvectionMatrix, SkewOnConstrainedSpaces) {
  for (int dim : {1, 2}) {
    for (int p : {1, 2, 4}) {
      const FunctionSpace s(Mesh(dim, 3), p, SpaceKind::H1Nodal, true);
      const Eigen::MatrixXd c = vms::advection_matrix(s, s, {1.0, 1.0}).matrix();
      EXPECT_LT(max_abs(c + c.transpose()) / max_abs(c), 1e-12);
    }
  }
}

TEST(AdvectionMatrix, MixedPairingHasNoDerivative) {
  // (eta, c . q) with q = constant (1, 0) projected into the flux space.
  const Mesh mesh(2, 2);
  const FunctionSpace q(mesh, 2, SpaceKind::HdivFlux);
  const FunctionSpace l(mesh, 2, SpaceKind::L2Volume);
  const auto rule = vms::rule_for_precision(10);
  const Eigen::VectorXd rhs = vms::functional_vector(q, rule, [](const vms::Point&) {
    vms::Integrand d;
    d.value = {1.0, 0.0};
    return d;
  });
  const Eigen::VectorXd c = vms::solve_dense(vms::mass_matrix(q, q), rhs);
  const Eigen::VectorXd got = vms::advection_matrix(l, q, {2.0, 5.0}).matrix() * c;
  const Eigen::VectorXd want = vms::load_vector(l, [](const vms::Point&) { return 2.0; }, rule);
  EXPECT_LT(max_abs(got - want), 1e-12);
  EXPECT_THROW(vms::advection_matrix(q, l, {1.0, 1.0}), std::invalid_argument);
}

TEST(DivergenceMatrix, SpecExamples) {
  const FunctionSpace l(Mesh(1, 1), 1, SpaceKind::L2Volume);
  const Eigen::MatrixXd d = vms::divergence_matrix(l, unit_p1()).matrix();
  ASSERT_EQ(d.rows(), 1);
  ASSERT_EQ(d.cols(), 2);
  EXPECT_NEAR(d(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(d(0, 1), 1.0, 1e-15);

  const Mesh mesh(2, 4);
  const FunctionSpace q(mesh, 2, SpaceKind::HdivFlux);
  const FunctionSpace l2(mesh, 2, SpaceKind::L2Volume);
  const Eigen::MatrixXd d2 = vms::divergence_matrix(l2, q).matrix();
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(d2).rank(), 64);

  const Eigen::VectorXd rhs = vms::functional_vector(q, vms::rule_for_precision(10), [](const vms::Point&) {
    vms::Integrand v;
    v.value = {0.7, -1.3};
    return v;
  });
  const Eigen::VectorXd constant = vms::solve_dense(vms::mass_matrix(q, q), rhs);
  EXPECT_LT(max_abs(d2 * constant), 1e-12);
  EXPECT_THROW(vms::divergence_matrix(q, l2), std::invalid_argument);
}

TEST(LoadVector, SpecExamples) {
  const auto rule = vms::rule_for_precision(vms::kErrorNormPrecision);
  const Eigen::VectorXd f1 = vms::load_vector(unit_p1(), [](const vms::Point&) { return 1.0; }, rule);
  EXPECT_NEAR(f1(0), 0.5, 1e-15);
  EXPECT_NEAR(f1(1), 0.5, 1e-15);
  EXPECT_EQ(max_abs(vms::load_vector(unit_p1(), [](const vms::Point&) { return 0.0; }, rule)), 0.0);
  // Edge degrees of freedom are integrals over physical cells: each
  // element of width 1/2 carries one basis function of unit integral.
  const FunctionSpace l2(Mesh(1, 2), 1, SpaceKind::L2Volume);
  const Eigen::VectorXd fl = vms::load_vector(l2, [](const vms::Point&) { return 1.0; }, rule);
  ASSERT_EQ(fl.size(), 2);
  EXPECT_NEAR(fl(0), 1.0, 1e-14);
  EXPECT_NEAR(fl(1), 1.0, 1e-14);
  EXPECT_THROW(vms::load_vector(FunctionSpace(Mesh(2, 1), 1, SpaceKind::HdivFlux), [](const vms::Point&) { return 1.0; }, rule),
               std::invalid_argument);
}

TEST(SaddleMatrix, SymmetricAndNonsingular) {
  for (int dim : {1, 2}) {
    for (int n = 1; n <= 4; ++n) {
      for (int p = 1; p <= 3; ++p) {
        const Mesh mesh(dim, n);
        const FunctionSpace q(mesh, p, dim == 1 ? SpaceKind::H1Nodal : SpaceKind::HdivFlux);
        const FunctionSpace l(mesh, p, SpaceKind::L2Volume);
        const auto a = vms::saddle_matrix(vms::mass_matrix(q, q), vms::divergence_matrix(l, q));
        EXPECT_EQ(a.role(), vms::MatrixRole::Saddle);
        EXPECT_LT(max_abs(a.matrix() - a.matrix().transpose()), 1e-12 * max_abs(a.matrix()));
        EXPECT_NO_THROW(a.factorization());
      }
    }
  }
}

TEST(SaddleMatrix, ZeroDivergenceIsSingular) {
  const FunctionSpace q(Mesh(1, 2), 1, SpaceKind::H1Nodal);
  const auto mq = vms::mass_matrix(q, q);
  const vms::OperatorMatrix zero(vms::MatrixRole::Divergence, Eigen::MatrixXd::Zero(2, 3));
  const auto a = vms::saddle_matrix(mq, zero);
  EXPECT_THROW(a.factorization(), vms::SingularMatrixError);
  const vms::OperatorMatrix bad(vms::MatrixRole::Divergence, Eigen::MatrixXd::Zero(2, 4));
  EXPECT_THROW(vms::saddle_matrix(mq, bad), std::invalid_argument);
}

TEST(SolveDense, SpecExamples) {
  const vms::OperatorMatrix eye(vms::MatrixRole::Coupling, Eigen::MatrixXd::Identity(3, 3));
  const Eigen::Vector3d b(1, -2, 3);
  EXPECT_LT(max_abs(vms::solve_dense(eye, Eigen::VectorXd(b)) - b), 1e-16);
  Eigen::MatrixXd d(2, 2);
  d << 2, 0, 0, 4;
  const Eigen::VectorXd x = vms::solve_dense(vms::OperatorMatrix(vms::MatrixRole::Coupling, d), Eigen::VectorXd(Eigen::Vector2d(2, 8)));
  EXPECT_NEAR(x(0), 1.0, 1e-15);
  EXPECT_NEAR(x(1), 2.0, 1e-15);
}

TEST(SolveDense, RandomSpdResidual) {
  std::srand(3);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Random(50, 50);
  const Eigen::MatrixXd a = r * r.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(50);
  const vms::OperatorMatrix op(vms::MatrixRole::Coupling, a);
  const Eigen::VectorXd x = vms::solve_dense(op, b);
  EXPECT_LT((a * x - b).norm() / b.norm(), 1e-11);
  const Eigen::MatrixXd bs = Eigen::MatrixXd::Random(50, 4);
  EXPECT_LT((a * vms::solve_dense(op, bs) - bs).norm() / bs.norm(), 1e-11);
}

TEST(SolveDense, SingularThrows) {
  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 2, 4;
  EXPECT_THROW(vms::solve_dense(vms::OperatorMatrix(vms::MatrixRole::Coupling, s), Eigen::VectorXd(Eigen::Vector2d(1, 1))),
               vms::SingularMatrixError);
  // the unconstrained Laplacian has constants in its kernel
  const FunctionSpace free(Mesh(1, 3), 2, SpaceKind::H1Nodal);
  EXPECT_THROW(vms::stiffness_matrix(free).factorization(), vms::SingularMatrixError);
}

TEST(GalerkinNesting, CoarseEqualsProjectedFine) {
  for (int dim : {1, 2}) {
    const Mesh mesh(dim, 3);
    for (bool constrained : {false, true}) {
      const FunctionSpace c(mesh, 2, SpaceKind::H1Nodal, constrained);
      const FunctionSpace f(mesh, 4, SpaceKind::H1Nodal, constrained);
      const Eigen::MatrixXd e = vms::embedding(c, f).matrix;
      const Eigen::MatrixXd kc = vms::stiffness_matrix(c).matrix();
      const Eigen::MatrixXd kf = e.transpose() * vms::stiffness_matrix(f).matrix() * e;
      EXPECT_LT(max_abs(kc - kf), 1e-11 * max_abs(kc));
      const Eigen::MatrixXd mc = vms::mass_matrix(c, c).matrix();
      EXPECT_LT(max_abs(mc - e.transpose() * vms::mass_matrix(f, f).matrix() * e), 1e-11 * max_abs(mc));
    }
    if (dim == 2) {
      const FunctionSpace qc(mesh, 2, SpaceKind::HdivFlux), qf(mesh, 3, SpaceKind::HdivFlux);
      const FunctionSpace lc(mesh, 2, SpaceKind::L2Volume), lf(mesh, 3, SpaceKind::L2Volume);
      const Eigen::MatrixXd eq = vms::embedding(qc, qf).matrix, el = vms::embedding(lc, lf).matrix;
      const Eigen::MatrixXd dc = vms::divergence_matrix(lc, qc).matrix();
      EXPECT_LT(max_abs(dc - el.transpose() * vms::divergence_matrix(lf, qf).matrix() * eq), 1e-11 * max_abs(dc));
    }
  }
}

TEST(FunctionalVector, ReducesToLoadVector) {
  const FunctionSpace s(Mesh(2, 3), 2, SpaceKind::L2Volume);
  const auto rule = vms::rule_for_precision(12);
  auto f = [](const vms::Point& x) { return std::sin(3 * x[0]) + x[1] * x[1]; };
  const Eigen::VectorXd a = vms::load_vector(s, f, rule);
  const Eigen::VectorXd b = vms::functional_vector(s, rule, [&](const vms::Point& x) {
    vms::Integrand d;
    d.value[0] = f(x);
    return d;
  });
  EXPECT_LT(max_abs(a - b), 1e-14);
}

}  // namespace
