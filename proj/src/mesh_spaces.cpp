#include "vms/mesh_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vms {

Mesh::Mesh(int dim, int elements_per_axis) : dim_(dim), n_(elements_per_axis) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("mesh dimension must be 1 or 2");
  if (elements_per_axis < 1) throw std::invalid_argument("mesh needs at least one element per axis");
}

Point Mesh::origin(int e) const {
  const double h = width();
  if (dim_ == 1) return {e * h, 0.0};
  return {(e % n_) * h, (e / n_) * h};
}

std::pair<int, Point> Mesh::locate(const Point& x) const {
  const double h = width();
  Point ref{0.0, 0.0};
  std::array<int, 2> idx{0, 0};
  for (int d = 0; d < dim_; ++d) {
    int i = static_cast<int>(std::floor(x[static_cast<std::size_t>(d)] / h));
    i = std::clamp(i, 0, n_ - 1);
    idx[static_cast<std::size_t>(d)] = i;
    ref[static_cast<std::size_t>(d)] = 2.0 * (x[static_cast<std::size_t>(d)] - i * h) / h - 1.0;
  }
  const int e = dim_ == 1 ? idx[0] : idx[1] * n_ + idx[0];
  return {e, ref};
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::H1Nodal: return "H1_nodal";
    case SpaceKind::HdivFlux: return "Hdiv_flux";
    case SpaceKind::L2Volume: return "L2_volume";
  }
  return "?";
}

ElementQuadrature element_quadrature(const Mesh& mesh, const QuadRule& rule) {
  ElementQuadrature q;
  const double jac = 0.5 * mesh.width();
  const int n = rule.size();
  if (mesh.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      q.points.push_back({rule.points[static_cast<std::size_t>(i)], 0.0});
      q.weights.push_back(rule.weights[static_cast<std::size_t>(i)] * jac);
    }
  } else {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        q.points.push_back({rule.points[static_cast<std::size_t>(i)], rule.points[static_cast<std::size_t>(j)]});
        q.weights.push_back(rule.weights[static_cast<std::size_t>(i)] *
                            rule.weights[static_cast<std::size_t>(j)] * jac * jac);
      }
    }
  }
  return q;
}

namespace {

// Global numbering of continuous nodal indices along one axis.
int constrained_index(int g, int n_nodes) {
  if (g == 0 || g == n_nodes - 1) return -1;
  return g - 1;
}

}  // namespace

FunctionSpace::FunctionSpace(Mesh mesh, int degree, SpaceKind kind, bool constrained)
    : mesh_(mesh),
      degree_(degree),
      kind_(kind),
      constrained_(constrained),
      nodal_(NodeSet(degree)),
      edge_(NodeSet(degree)) {
  if (kind == SpaceKind::HdivFlux && mesh.dim() == 1) {
    throw std::invalid_argument("Hdiv_flux is a 2D space; 1D mixed problems use H1_nodal for the flux");
  }
  if (constrained && kind != SpaceKind::H1Nodal) {
    throw std::invalid_argument("strong Dirichlet constraint only applies to H1_nodal spaces");
  }
  const int p = degree;
  const int n = mesh.elements_per_axis();
  const int np = n * p;  // global sub-intervals per axis
  const int dim = mesh.dim();

  switch (kind) {
    case SpaceKind::H1Nodal:
      if (dim == 1) {
        for (int i = 0; i <= p; ++i) local_.push_back({0, {i, 0}, {Factor::Nodal, Factor::Nodal}});
      } else {
        for (int iy = 0; iy <= p; ++iy)
          for (int ix = 0; ix <= p; ++ix) local_.push_back({0, {ix, iy}, {Factor::Nodal, Factor::Nodal}});
      }
      break;
    case SpaceKind::L2Volume:
      if (dim == 1) {
        for (int j = 0; j < p; ++j) local_.push_back({0, {j, 0}, {Factor::Edge, Factor::Nodal}});
      } else {
        for (int jy = 0; jy < p; ++jy)
          for (int jx = 0; jx < p; ++jx) local_.push_back({0, {jx, jy}, {Factor::Edge, Factor::Edge}});
      }
      break;
    case SpaceKind::HdivFlux:
      for (int jy = 0; jy < p; ++jy)
        for (int ix = 0; ix <= p; ++ix) local_.push_back({0, {ix, jy}, {Factor::Nodal, Factor::Edge}});
      for (int iy = 0; iy <= p; ++iy)
        for (int jx = 0; jx < p; ++jx) local_.push_back({1, {jx, iy}, {Factor::Edge, Factor::Nodal}});
      break;
  }

  const int ne = mesh.element_count();
  dof_map_.resize(static_cast<std::size_t>(ne) * local_.size());
  for (int e = 0; e < ne; ++e) {
    const int ex = dim == 1 ? e : e % n;
    const int ey = dim == 1 ? 0 : e / n;
    for (std::size_t a = 0; a < local_.size(); ++a) {
      const LocalDof& d = local_[a];
      const int gx = ex * p + d.index[0];
      const int gy = ey * p + d.index[1];
      int g = 0;
      switch (kind) {
        case SpaceKind::H1Nodal:
          if (dim == 1) {
            g = constrained ? constrained_index(gx, np + 1) : gx;
          } else if (constrained) {
            const int cx = constrained_index(gx, np + 1);
            const int cy = constrained_index(gy, np + 1);
            g = (cx < 0 || cy < 0) ? -1 : cy * (np - 1) + cx;
          } else {
            g = gy * (np + 1) + gx;
          }
          break;
        case SpaceKind::L2Volume:
          g = dim == 1 ? gx : e * p * p + d.index[1] * p + d.index[0];
          break;
        case SpaceKind::HdivFlux:
          g = d.component == 0 ? gy * (np + 1) + gx : (np + 1) * np + gy * np + gx;
          break;
      }
      dof_map_[static_cast<std::size_t>(e) * local_.size() + a] = g;
    }
  }

  switch (kind) {
    case SpaceKind::H1Nodal:
      dof_count_ = constrained ? (dim == 1 ? np - 1 : (np - 1) * (np - 1))
                               : (dim == 1 ? np + 1 : (np + 1) * (np + 1));
      break;
    case SpaceKind::L2Volume: dof_count_ = dim == 1 ? np : np * np; break;
    case SpaceKind::HdivFlux: dof_count_ = 2 * (np + 1) * np; break;
  }
}

std::span<const int> FunctionSpace::element_dofs(int e) const {
  return std::span<const int>(dof_map_).subspan(static_cast<std::size_t>(e) * local_.size(), local_.size());
}

double FunctionSpace::factor_value(Factor f, int i, double xi) const {
  if (f == Factor::Nodal) return nodal_.value(i, xi);
  return edge_.value(i, xi) * 2.0 / mesh_.width();
}

double FunctionSpace::factor_deriv(Factor f, int i, double xi) const {
  // Only nodal factors are ever differentiated.
  if (f != Factor::Nodal) return 0.0;
  return nodal_.derivative(i, xi) * 2.0 / mesh_.width();
}

Tabulation FunctionSpace::tabulate(std::span<const Point> ref_points) const {
  const auto nq = static_cast<Eigen::Index>(ref_points.size());
  const auto nl = static_cast<Eigen::Index>(local_.size());
  const int dim = mesh_.dim();
  Tabulation t;
  for (int c = 0; c < components(); ++c) t.value[static_cast<std::size_t>(c)] = Eigen::MatrixXd::Zero(nq, nl);
  const bool want_grad = kind_ == SpaceKind::H1Nodal;
  if (want_grad) {
    for (int d = 0; d < dim; ++d) t.grad[static_cast<std::size_t>(d)] = Eigen::MatrixXd::Zero(nq, nl);
  }
  if (has_divergence()) t.div = Eigen::MatrixXd::Zero(nq, nl);

  for (Eigen::Index q = 0; q < nq; ++q) {
    const Point& xi = ref_points[static_cast<std::size_t>(q)];
    for (Eigen::Index a = 0; a < nl; ++a) {
      const LocalDof& d = local_[static_cast<std::size_t>(a)];
      std::array<double, 2> f{1.0, 1.0};
      std::array<double, 2> df{0.0, 0.0};
      for (int ax = 0; ax < dim; ++ax) {
        const auto s = static_cast<std::size_t>(ax);
        f[s] = factor_value(d.factor[s], d.index[s], xi[s]);
        if (want_grad || d.component == ax) df[s] = factor_deriv(d.factor[s], d.index[s], xi[s]);
      }
      const double v = f[0] * f[1];
      t.value[static_cast<std::size_t>(d.component)](q, a) = v;
      if (want_grad) {
        t.grad[0](q, a) = df[0] * f[1];
        if (dim == 2) t.grad[1](q, a) = f[0] * df[1];
      }
      if (has_divergence()) {
        t.div(q, a) = d.component == 0 ? df[0] * f[1] : f[0] * df[1];
      }
    }
  }
  return t;
}

FieldValue FunctionSpace::evaluate(const Eigen::VectorXd& coeffs, const Point& x) const {
  if (coeffs.size() != dof_count_) throw std::invalid_argument("evaluate: coefficient length mismatch");
  const auto [e, ref] = mesh_.locate(x);
  const Point pts[1] = {ref};
  const Tabulation t = tabulate(pts);
  const auto dofs = element_dofs(e);
  FieldValue out;
  for (std::size_t a = 0; a < dofs.size(); ++a) {
    const int g = dofs[a];
    if (g < 0) continue;
    const double c = coeffs(g);
    const auto ai = static_cast<Eigen::Index>(a);
    for (int comp = 0; comp < components(); ++comp) out.value[static_cast<std::size_t>(comp)] += c * t.value[static_cast<std::size_t>(comp)](0, ai);
    if (kind_ == SpaceKind::H1Nodal) {
      for (int d = 0; d < mesh_.dim(); ++d) out.grad[static_cast<std::size_t>(d)] += c * t.grad[static_cast<std::size_t>(d)](0, ai);
    }
    if (has_divergence()) out.div += c * t.div(0, ai);
  }
  return out;
}

FunctionSpace build_space(const Mesh& mesh, int p, SpaceKind kind, bool constrained) {
  return FunctionSpace(mesh, p, kind, constrained);
}

Embedding embedding(const FunctionSpace& coarse, const FunctionSpace& fine) {
  if (!(coarse.mesh() == fine.mesh())) throw std::invalid_argument("embedding: spaces live on different meshes");
  if (coarse.kind() != fine.kind() || coarse.constrained() != fine.constrained()) {
    throw std::invalid_argument("embedding: spaces are of different kinds");
  }
  if (fine.degree() < coarse.degree()) throw std::invalid_argument("embedding: fine degree below coarse degree");

  // 1D transfer: nodal factors by interpolation at fine GLL nodes, edge
  // factors by integration over fine sub-intervals.
  const int pc = coarse.degree();
  const int pf = fine.degree();
  const NodeSet& xf = fine.nodal().node_set();
  Eigen::MatrixXd t_nodal(pf + 1, pc + 1);
  Eigen::MatrixXd t_edge(pf, pc);
  for (int a = 0; a <= pf; ++a)
    for (int b = 0; b <= pc; ++b) t_nodal(a, b) = coarse.nodal().value(b, xf[a]);
  for (int a = 0; a < pf; ++a)
    for (int b = 0; b < pc; ++b) t_edge(a, b) = coarse.edge().integral(b, xf[a], xf[a + 1]);

  Eigen::MatrixXd e_mat = Eigen::MatrixXd::Zero(fine.dof_count(), coarse.dof_count());
  const auto fl = fine.local_dofs();
  const auto cl = coarse.local_dofs();
  const int dim = coarse.mesh().dim();
  for (int e = 0; e < coarse.mesh().element_count(); ++e) {
    const auto fd = fine.element_dofs(e);
    const auto cd = coarse.element_dofs(e);
    for (std::size_t a = 0; a < fl.size(); ++a) {
      if (fd[a] < 0) continue;
      for (std::size_t b = 0; b < cl.size(); ++b) {
        if (cd[b] < 0 || fl[a].component != cl[b].component) continue;
        double v = 1.0;
        for (int ax = 0; ax < dim; ++ax) {
          const auto s = static_cast<std::size_t>(ax);
          v *= fl[a].factor[s] == Factor::Nodal ? t_nodal(fl[a].index[s], cl[b].index[s])
                                                : t_edge(fl[a].index[s], cl[b].index[s]);
        }
        // Shared interface dofs receive the same value from every element.
        e_mat(fd[a], cd[b]) = v;
      }
    }
  }
  return Embedding{coarse, fine, std::move(e_mat)};
}

Eigen::VectorXd basis_vector(const FunctionSpace& space, const Point& x) {
  const auto [e, ref] = space.mesh().locate(x);
  const Point pts[1] = {ref};
  const Tabulation t = space.tabulate(pts);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  const auto dofs = space.element_dofs(e);
  for (std::size_t a = 0; a < dofs.size(); ++a) {
    if (dofs[a] >= 0) out(dofs[a]) = t.value[0](0, static_cast<Eigen::Index>(a));
  }
  return out;
}

Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace vms
