#include "vms/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vms/quadrature.hpp"

namespace vms {

LayerProfile layer_profile(double t, double alpha) {
  // (e^{a(t-1)} - e^{-a}) / (1 - e^{-a}) with non-positive exponents only
  const double den = -std::expm1(-alpha);
  const double et = std::exp(alpha * (t - 1.0));
  const double ea = std::exp(-alpha);
  return {t - (et - ea) / den, 1.0 - alpha * et / den, -alpha * alpha * et / den};
}

ExactBundle exact_1d(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("exact_1d: nu must be positive");
  const double a = 1.0 / nu;
  ExactBundle b;
  b.phi = [a](const Point& x) { return layer_profile(x[0], a).value; };
  b.grad = [a](const Point& x) { return Point{layer_profile(x[0], a).d1, 0.0}; };
  b.laplacian = [a](const Point& x) { return layer_profile(x[0], a).d2; };
  b.source = [](const Point&) { return 1.0; };
  b.peclet = a;
  return b;
}

ExactBundle exact_2d(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("exact_2d: nu must be positive");
  const double a = 1.0 / nu;
  ExactBundle b;
  b.phi = [a](const Point& x) { return layer_profile(x[0], a).value * layer_profile(x[1], a).value; };
  b.grad = [a](const Point& x) {
    const LayerProfile gx = layer_profile(x[0], a);
    const LayerProfile gy = layer_profile(x[1], a);
    return Point{gx.d1 * gy.value, gx.value * gy.d1};
  };
  b.laplacian = [a](const Point& x) {
    const LayerProfile gx = layer_profile(x[0], a);
    const LayerProfile gy = layer_profile(x[1], a);
    return gx.d2 * gy.value + gx.value * gy.d2;
  };
  b.source = [a, nu](const Point& x) {
    const LayerProfile gx = layer_profile(x[0], a);
    const LayerProfile gy = layer_profile(x[1], a);
    return gx.d1 * gy.value + gx.value * gy.d1 - nu * (gx.d2 * gy.value + gx.value * gy.d2);
  };
  b.peclet = a;
  return b;
}

ExactBundle exact_poisson_1d(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("exact_poisson_1d: nu must be positive");
  ExactBundle b;
  b.phi = [nu](const Point& x) { return x[0] * (1.0 - x[0]) / (2.0 * nu); };
  b.grad = [nu](const Point& x) { return Point{(1.0 - 2.0 * x[0]) / (2.0 * nu), 0.0}; };
  b.laplacian = [nu](const Point&) { return -1.0 / nu; };
  b.source = [](const Point&) { return 1.0; };
  return b;
}

ExactBundle exact_poisson_2d(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("exact_poisson_2d: nu must be positive");
  using std::numbers::pi;
  ExactBundle b;
  b.phi = [](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  b.grad = [](const Point& x) {
    return Point{pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1])};
  };
  b.laplacian = [](const Point& x) { return -2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  b.source = [nu](const Point& x) { return 2.0 * pi * pi * nu * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  return b;
}

namespace {

// One discrete field tabulated at the error quadrature points of every element.
class Sampled {
 public:
  Sampled(const FunctionSpace& space, Eigen::VectorXd coeffs, std::span<const Point> ref)
      : space_(&space), coeffs_(std::move(coeffs)), tab_(space.tabulate(ref)) {}

  FieldValue at(int e, Eigen::Index q) const {
    FieldValue out;
    const auto dofs = space_->element_dofs(e);
    const bool h1 = space_->kind() == SpaceKind::H1Nodal;
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      if (dofs[a] < 0) continue;
      const double c = coeffs_(dofs[a]);
      const auto ai = static_cast<Eigen::Index>(a);
      for (int comp = 0; comp < space_->components(); ++comp) {
        out.value[static_cast<std::size_t>(comp)] += c * tab_.value[static_cast<std::size_t>(comp)](q, ai);
      }
      if (h1) {
        for (int d = 0; d < space_->mesh().dim(); ++d) {
          out.grad[static_cast<std::size_t>(d)] += c * tab_.grad[static_cast<std::size_t>(d)](q, ai);
        }
      }
      if (space_->has_divergence()) out.div += c * tab_.div(q, ai);
    }
    return out;
  }

 private:
  const FunctionSpace* space_;
  Eigen::VectorXd coeffs_;
  Tabulation tab_;
};

// Scalar (value + grad) and flux (value + div) views of a solution vector.
struct SampledSolution {
  std::optional<Sampled> scalar;
  std::optional<Sampled> flux;
};

SampledSolution sample(const SolutionSpaces& s, const Eigen::VectorXd& u, std::span<const Point> ref) {
  SampledSolution out;
  if (s.formulation == Formulation::Direct) {
    out.scalar.emplace(s.primary, u, ref);
  } else {
    const Eigen::Index nq = s.primary.dof_count();
    out.flux.emplace(s.primary, u.head(nq), ref);
    out.scalar.emplace(*s.scalar, u.tail(u.size() - nq), ref);
  }
  return out;
}

void require(const VmsSolution& sol, const VmsSolution& projection, Formulation form) {
  if (sol.spec.formulation != form || projection.spec.formulation != form) {
    throw std::invalid_argument("error norm: formulation mismatch");
  }
  if (projection.solver != SolverKind::Projection) throw std::invalid_argument("error norm: reference is not a projection");
  if (!(sol.coarse_spaces.primary.mesh() == projection.coarse_spaces.primary.mesh()) ||
      sol.spec.p != projection.spec.p) {
    throw std::invalid_argument("error norm: solution and projection live on different coarse spaces");
  }
}

template <class F>
void for_each_point(const Mesh& mesh, const ElementQuadrature& q, F&& f) {
  const double h = mesh.width();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Point o = mesh.origin(e);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Point& r = q.points[k];
      const Point x{o[0] + 0.5 * h * (r[0] + 1.0), mesh.dim() == 2 ? o[1] + 0.5 * h * (r[1] + 1.0) : 0.0};
      f(e, static_cast<Eigen::Index>(k), x, q.weights[k]);
    }
  }
}

double sq(double v) { return v * v; }

}  // namespace

ErrorReport error_direct(const VmsSolution& sol, const ExactBundle& bundle, const VmsSolution& projection) {
  require(sol, projection, Formulation::Direct);
  const Mesh& mesh = sol.coarse_spaces.primary.mesh();
  const ElementQuadrature q = element_quadrature(mesh, rule_for_precision(kErrorNormPrecision));
  const SampledSolution bar = sample(sol.coarse_spaces, sol.coarse, q.points);
  const SampledSolution proj = sample(projection.coarse_spaces, projection.coarse, q.points);
  std::optional<SampledSolution> fine;
  if (sol.fine_spaces) fine = sample(*sol.fine_spaces, sol.fine, q.points);
  const int dim = mesh.dim();
  double ex = 0.0, pr = 0.0, fs = 0.0;
  for_each_point(mesh, q, [&](int e, Eigen::Index k, const Point& x, double w) {
    const double phi = bundle.phi(x);
    const Point g = bundle.grad(x);
    const FieldValue b = bar.scalar->at(e, k);
    const FieldValue pv = proj.scalar->at(e, k);
    const FieldValue fv = fine ? fine->scalar->at(e, k) : FieldValue{};
    double se = sq(b.value[0] - phi), sp = sq(b.value[0] - pv.value[0]), sf = sq(fv.value[0] - (phi - pv.value[0]));
    for (std::size_t d = 0; d < static_cast<std::size_t>(dim); ++d) {
      se += sq(b.grad[d] - g[d]);
      sp += sq(b.grad[d] - pv.grad[d]);
      sf += sq(fv.grad[d] - (g[d] - pv.grad[d]));
    }
    ex += w * se;
    pr += w * sp;
    fs += w * sf;
  });
  return {std::sqrt(ex), std::sqrt(pr), std::sqrt(fs), "H1"};
}

ErrorReport error_mixed(const VmsSolution& sol, const ExactBundle& bundle, const VmsSolution& projection) {
  require(sol, projection, Formulation::Mixed);
  const Mesh& mesh = sol.coarse_spaces.primary.mesh();
  const ElementQuadrature q = element_quadrature(mesh, rule_for_precision(kErrorNormPrecision));
  const SampledSolution bar = sample(sol.coarse_spaces, sol.coarse, q.points);
  const SampledSolution proj = sample(projection.coarse_spaces, projection.coarse, q.points);
  std::optional<SampledSolution> fine;
  if (sol.fine_spaces) fine = sample(*sol.fine_spaces, sol.fine, q.points);
  const ScalarField& f = sol.spec.effective_source();
  const Velocity c = sol.spec.velocity();
  const double inv_nu = 1.0 / sol.spec.nu;
  const int dim = mesh.dim();
  double ex = 0.0, pr = 0.0, fs = 0.0;
  for_each_point(mesh, q, [&](int e, Eigen::Index k, const Point& x, double w) {
    const double phi = bundle.phi(x);
    const Point g = bundle.grad(x);
    const FieldValue bs = bar.scalar->at(e, k), bq = bar.flux->at(e, k);
    const FieldValue ps = proj.scalar->at(e, k), pq = proj.flux->at(e, k);
    const FieldValue fsv = fine ? fine->scalar->at(e, k) : FieldValue{};
    const FieldValue fq = fine ? fine->flux->at(e, k) : FieldValue{};
    double cg = 0.0;
    for (std::size_t d = 0; d < static_cast<std::size_t>(dim); ++d) cg += c[d] * g[d];
    // nu div(q_bar / nu) against c . grad phi - f
    const double se = sq(bq.div - (cg - f(x)));
    double sp = sq(bs.value[0] - ps.value[0]);
    double sf = sq(fsv.value[0] - (phi - ps.value[0]));
    for (std::size_t d = 0; d < static_cast<std::size_t>(dim); ++d) {
      sp += sq(inv_nu * (bq.value[d] - pq.value[d]));
      sf += sq(inv_nu * fq.value[d] - (g[d] - inv_nu * pq.value[d]));
    }
    ex += w * se;
    pr += w * sp;
    fs += w * sf;
  });
  return {std::sqrt(ex), std::sqrt(pr), std::sqrt(fs), "Hdiv-seminorm/L2"};
}

ErrorReport error_report(const VmsSolution& sol, const ExactBundle& bundle, const VmsSolution& projection) {
  return sol.spec.formulation == Formulation::Direct ? error_direct(sol, bundle, projection)
                                                     : error_mixed(sol, bundle, projection);
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::H: return "h";
    case Axis::P: return "p";
    case Axis::K: return "k";
  }
  return "?";
}

Axis parse_axis(std::string_view s) {
  if (s == "h") return Axis::H;
  if (s == "p") return Axis::P;
  if (s == "k") return Axis::K;
  throw std::invalid_argument("unknown axis '" + std::string(s) + "'");
}

std::optional<double> ConvergenceRecord::rate(std::string_view series) const {
  for (const auto& [name, r] : rates) {
    if (name == series) return r;
  }
  return std::nullopt;
}

std::optional<double> fit_rate(Axis axis, const std::vector<int>& grid, const std::vector<double>& errors) {
  if (grid.size() != errors.size()) throw std::invalid_argument("fit_rate: grid and error lengths differ");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::isfinite(errors[i]) && errors[i] > 0.0) {
      const double xv = axis == Axis::H ? std::log(1.0 / grid[i]) : static_cast<double>(grid[i]);
      pts.emplace_back(xv, std::log(errors[i]));
    }
  }
  if (pts.size() < 3) return std::nullopt;
  if (axis == Axis::H) {
    std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.first > b.first; });
    pts.erase(pts.begin(), pts.end() - 3);
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [xv, yv] : pts) {
    mx += xv;
    my += yv;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [xv, yv] : pts) {
    sxy += (xv - mx) * (yv - my);
    sxx += (xv - mx) * (xv - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  return axis == Axis::H ? slope : -slope;
}

std::vector<double> series_values(const ConvergenceRecord& rec, std::string_view series) {
  std::vector<double> out;
  out.reserve(rec.points.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& pt : rec.points) {
    if (!pt.ok) {
      out.push_back(nan);
    } else if (series == "galerkin") {
      out.push_back(pt.galerkin.e_exact);
    } else if (series == "projection") {
      out.push_back(pt.projection.e_exact);
    } else if (series == "vms") {
      out.push_back(pt.vms.e_exact);
    } else if (series == "vms_vs_projection") {
      out.push_back(pt.vms.e_projection);
    } else if (series == "fine_scales") {
      out.push_back(pt.vms.e_fine);
    } else {
      throw std::invalid_argument("unknown series '" + std::string(series) + "'");
    }
  }
  return out;
}

ConvergenceRecord convergence_sweep(Axis axis, const std::vector<int>& grid, const ProblemSpec& tmpl) {
  if (grid.size() < 3) throw std::invalid_argument("convergence_sweep needs at least three grid points");
  if (!tmpl.exact) throw std::invalid_argument("convergence_sweep needs an exact solution bundle");
  std::vector<int> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  ConvergenceRecord rec;
  rec.axis = axis;
  for (int v : sorted) {
    ConvergencePoint pt;
    pt.value = v;
    ProblemSpec spec = tmpl;
    (axis == Axis::H ? spec.N : axis == Axis::P ? spec.p : spec.k) = v;
    try {
      const VmsSolution proj = optimal_projection(spec);
      pt.projection = error_report(proj, *spec.exact, proj);
      pt.galerkin = error_report(galerkin_solve(spec), *spec.exact, proj);
      pt.vms = error_report(vms_solve(spec), *spec.exact, proj);
      pt.ok = true;
    } catch (const std::exception& err) {
      pt.failure = err.what();
    }
    rec.points.push_back(std::move(pt));
  }
  for (const char* series : {"galerkin", "projection", "vms", "vms_vs_projection", "fine_scales"}) {
    if (auto r = fit_rate(axis, sorted, series_values(rec, series))) rec.rates.emplace_back(series, *r);
  }
  return rec;
}

OrthoTable orthogonality_table(Formulation form, const std::vector<int>& p_list, const std::vector<int>& k_list,
                               const ProblemSpec& tmpl) {
  OrthoTable t;
  t.formulation = form;
  t.p = p_list;
  t.k = k_list;
  const auto np = static_cast<Eigen::Index>(p_list.size());
  const auto nk = static_cast<Eigen::Index>(k_list.size());
  t.values = Eigen::MatrixXd::Zero(np, nk);
  if (form == Formulation::Mixed) t.div_values = Eigen::MatrixXd::Zero(np, nk);
  auto signed_max = [](const Eigen::VectorXd& v) {
    if (v.size() == 0) return 0.0;
    Eigen::Index i = 0;
    v.cwiseAbs().maxCoeff(&i);
    return v(i);
  };
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = 0; j < nk; ++j) {
      ProblemSpec spec = tmpl;
      spec.formulation = form;
      spec.p = p_list[static_cast<std::size_t>(i)];
      spec.k = k_list[static_cast<std::size_t>(j)];
      if (spec.k == 0) continue;  // no fine scales
      const VmsSolution sol = vms_solve(spec);
      const SolutionSpaces& fine = *sol.fine_spaces;
      const Eigen::MatrixXd e = embedding_matrix(sol.coarse_spaces, fine);
      const double kappa = form == Formulation::Direct ? 1.0 : spec.nu;
      const Eigen::VectorXd r = e.transpose() * (symmetric_operator(fine, kappa).matrix() * sol.fine);
      if (form == Formulation::Direct) {
        t.values(i, j) = signed_max(r);
      } else {
        const Eigen::Index nq = sol.coarse_spaces.flux_size();
        t.values(i, j) = signed_max(r.head(nq));
        t.div_values(i, j) = signed_max(r.tail(r.size() - nq));
      }
    }
  }
  return t;
}

}  // namespace vms
