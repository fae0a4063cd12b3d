#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vms/vms_solver.hpp"

namespace vms {

/// c = 1, f = 1 boundary-layer solution on [0, 1], alpha = 1 / nu.
ExactBundle exact_1d(double nu);
/// g(x) g(y) with the 1D profile g; source derived for c = (1, 1).
ExactBundle exact_2d(double nu);
/// Pure diffusion references (advection switched off): x (1 - x) / (2 nu) with f = 1,
/// and sin(pi x) sin(pi y) with f = 2 pi^2 nu sin sin.
ExactBundle exact_poisson_1d(double nu);
ExactBundle exact_poisson_2d(double nu);

/// 1D profile used by exact_1d / exact_2d and its first two derivatives.
struct LayerProfile {
  double value;
  double d1;
  double d2;
};
LayerProfile layer_profile(double t, double alpha);

struct ErrorReport {
  double e_exact = 0.0;
  double e_projection = 0.0;
  double e_fine = 0.0;
  std::string norm;
};

/// Full H1 norms of phi_bar - phi, phi_bar - P phi and phi'_k - (phi - P phi).
ErrorReport error_direct(const VmsSolution& sol, const ExactBundle& bundle, const VmsSolution& projection);
/// e_exact = || div q_bar - (c . grad phi - f) ||; the other two are L2 norms over
/// (phi, q / nu) pairs. Fluxes are compared as gradients, q / nu.
ErrorReport error_mixed(const VmsSolution& sol, const ExactBundle& bundle, const VmsSolution& projection);
ErrorReport error_report(const VmsSolution& sol, const ExactBundle& bundle, const VmsSolution& projection);

enum class Axis { H, P, K };

std::string_view to_string(Axis a);
Axis parse_axis(std::string_view s);

struct ConvergencePoint {
  int value = 0;
  bool ok = false;
  std::string failure;
  ErrorReport galerkin;
  ErrorReport projection;
  ErrorReport vms;
};

struct ConvergenceRecord {
  Axis axis = Axis::H;
  std::vector<ConvergencePoint> points;
  /// (series, rate); series without three usable points are omitted.
  std::vector<std::pair<std::string, double>> rates;

  std::optional<double> rate(std::string_view series) const;
};

/// h: least-squares slope of log e against log h over the last three points,
/// reported as a positive order. p, k: -d(ln e)/d(axis) over all points.
/// Empty when fewer than three positive finite errors remain.
std::optional<double> fit_rate(Axis axis, const std::vector<int>& grid, const std::vector<double>& errors);

/// Runs Galerkin, projection and VMS at every grid value. The template needs an
/// exact bundle. Solver failures are recorded per point.
ConvergenceRecord convergence_sweep(Axis axis, const std::vector<int>& grid, const ProblemSpec& tmpl);

/// Named error series of a record: galerkin, projection, vms, vms_vs_projection, fine_scales.
std::vector<double> series_values(const ConvergenceRecord& rec, std::string_view series);

struct OrthoTable {
  Formulation formulation = Formulation::Direct;
  std::vector<int> p;
  std::vector<int> k;
  /// direct: (grad v, grad phi'); mixed: (v, q' / nu) + (div v, phi').
  Eigen::MatrixXd values;
  /// mixed only: (eta, div q').
  Eigen::MatrixXd div_values;
};

/// Signed entry of largest magnitude of each inner-product family over all
/// coarse test functions, evaluated with assembled fine-space matrices.
OrthoTable orthogonality_table(Formulation form, const std::vector<int>& p_list, const std::vector<int>& k_list,
                               const ProblemSpec& tmpl);

}  // namespace vms
