#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vms/analysis.hpp"
#include "vms/vms_solver.hpp"

namespace vms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitSolverFailure = 3;

struct RunConfig {
  std::string command;
  int dim = 1;
  Formulation formulation = Formulation::Direct;
  double nu = 0.01;
  int N = 4;
  int p = 2;
  std::vector<int> k{1};
  bool k_given = false;
  Axis axis = Axis::H;
  std::vector<int> grid;
  std::string out = ".";
};

/// Throws std::invalid_argument on out-of-range values.
void validate(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& err);
int cmd_converge(const RunConfig& cfg, std::ostream& err);
int cmd_greens(const RunConfig& cfg, std::ostream& err);
int cmd_ortho(const RunConfig& cfg, std::ostream& err);

/// Parses argv (program name first) and dispatches; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Full-precision CSV number: 17 significant digits, '.' separator.
std::string format_number(double v);

}  // namespace vms::cli
