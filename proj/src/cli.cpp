#include "vms/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vms/greens.hpp"

namespace vms::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

namespace {

constexpr int kSamples = 200;

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) buf_ << ',';
      buf_ << cells[i];
    }
    buf_ << '\n';
  }

  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_number(v));
    row(s);
  }

  void write(const fs::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << buf_.str();
    if (!f) throw std::runtime_error("failed writing " + path.string());
  }

 private:
  std::ostringstream buf_;
};

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

double sample_coord(int i) { return static_cast<double>(i) / (kSamples - 1); }

ProblemSpec base_spec(const RunConfig& cfg) {
  ProblemSpec spec;
  spec.dim = cfg.dim;
  spec.formulation = cfg.formulation;
  spec.nu = cfg.nu;
  spec.N = cfg.N;
  spec.p = cfg.p;
  spec.k = cfg.k.front();
  spec.exact = cfg.dim == 1 ? exact_1d(cfg.nu) : exact_2d(cfg.nu);
  return spec;
}

int single_k(const RunConfig& cfg) {
  if (cfg.k.size() != 1) throw std::invalid_argument("this command takes a single --k value");
  return cfg.k.front();
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.dim != 1 && cfg.dim != 2) throw std::invalid_argument("--dim must be 1 or 2");
  if (!(cfg.nu > 0.0) || !std::isfinite(cfg.nu)) throw std::invalid_argument("--nu must be positive and finite");
  if (cfg.N < 1) throw std::invalid_argument("--N must be at least 1");
  if (cfg.p < 1) throw std::invalid_argument("--p must be at least 1");
  if (cfg.k.empty()) throw std::invalid_argument("--k needs at least one value");
  for (int k : cfg.k) {
    if (k < 0) throw std::invalid_argument("--k values must be non-negative");
  }
}

int cmd_solve(const RunConfig& cfg, std::ostream& /*err*/) {
  validate(cfg);
  ProblemSpec spec = base_spec(cfg);
  spec.k = single_k(cfg);
  const ExactBundle& ex = *spec.exact;
  const VmsSolution proj = optimal_projection(spec);
  const VmsSolution gal = galerkin_solve(spec);
  const VmsSolution vms = vms_solve(spec);
  const FineScaleField fine = reconstruct_fine_scales(vms);

  std::vector<std::string> header{"x"};
  if (cfg.dim == 2) header.emplace_back("y");
  for (const char* c : {"phi_exact", "phi_projection", "phi_galerkin", "phi_vms", "phi_prime_exact", "phi_prime_computed"}) {
    header.emplace_back(c);
  }
  Csv csv(header);
  auto emit = [&](const Point& x) {
    const double phi = ex.phi(x);
    const double pphi = proj.scalar_at(x).value[0];
    std::vector<double> row{x[0]};
    if (cfg.dim == 2) row.push_back(x[1]);
    row.insert(row.end(), {phi, pphi, gal.scalar_at(x).value[0], vms.scalar_at(x).value[0], phi - pphi,
                           fine.scalar_at(x).value[0]});
    csv.row(row);
  };
  if (cfg.dim == 1) {
    for (int i = 0; i < kSamples; ++i) emit({sample_coord(i), 0.0});
  } else {
    for (int j = 0; j < kSamples; ++j) {
      for (int i = 0; i < kSamples; ++i) emit({sample_coord(i), sample_coord(j)});
    }
  }
  csv.write(prepare_out(cfg) / "solution.csv");
  return kExitOk;
}

int cmd_converge(const RunConfig& cfg, std::ostream& err) {
  validate(cfg);
  if (cfg.grid.size() < 3) throw std::invalid_argument("--grid needs at least three values");
  ProblemSpec spec = base_spec(cfg);
  if (cfg.axis != Axis::K) spec.k = single_k(cfg);
  for (int v : cfg.grid) {
    if (v < (cfg.axis == Axis::K ? 0 : 1)) throw std::invalid_argument("--grid value out of range");
  }
  const ConvergenceRecord rec = convergence_sweep(cfg.axis, cfg.grid, spec);

  Csv conv({"axis_value", "err_galerkin", "err_projection", "err_vms", "err_vms_vs_projection", "err_fine_scales"});
  int ok = 0;
  for (const auto& pt : rec.points) {
    std::vector<std::string> row{std::to_string(pt.value)};
    if (pt.ok) {
      ++ok;
      for (double v : {pt.galerkin.e_exact, pt.projection.e_exact, pt.vms.e_exact, pt.vms.e_projection, pt.vms.e_fine}) {
        row.push_back(format_number(v));
      }
    } else {
      row.insert(row.end(), 5, "");
      err << "point " << to_string(cfg.axis) << "=" << pt.value << " failed: " << pt.failure << '\n';
    }
    conv.row(row);
  }
  Csv rates({"series", "rate"});
  for (const auto& [name, r] : rec.rates) rates.row(std::vector<std::string>{name, format_number(r)});
  const fs::path dir = prepare_out(cfg);
  conv.write(dir / "convergence.csv");
  rates.write(dir / "rates.csv");
  return ok >= 3 ? kExitOk : kExitSolverFailure;
}

int cmd_greens(const RunConfig& cfg, std::ostream& /*err*/) {
  validate(cfg);
  ProblemSpec spec = base_spec(cfg);
  const SolutionSpaces spaces = solution_spaces(spec, cfg.p);
  const OperatorMatrix a = symmetric_operator(spaces, 1.0);
  const ClassicGreens g = cfg.formulation == Formulation::Direct ? classic_greens(a, spaces.primary)
                                                                 : classic_greens(a, spaces.primary, *spaces.scalar);
  if (cfg.dim == 1) {
    if (cfg.N < 2) throw std::invalid_argument("1D greens needs N >= 2 for an interior element boundary source");
    std::vector<double> sources;
    for (double target : {0.25, 0.5, 0.75}) {
      const int node = std::clamp(static_cast<int>(std::lround(target * cfg.N)), 1, cfg.N - 1);
      const double s = static_cast<double>(node) / cfg.N;
      if (std::find(sources.begin(), sources.end(), s) == sources.end()) sources.push_back(s);
    }
    Csv csv({"s", "x", "g_h", "g_exact", "abs_diff"});
    for (double s : sources) {
      const Eigen::VectorXd resp = g.source_response({s, 0.0});
      for (int i = 0; i < kSamples; ++i) {
        const double x = sample_coord(i);
        const double gh = g.evaluate_response(resp, {x, 0.0});
        const double ge = exact_greens_1d_poisson(x, s);
        csv.row(std::vector<double>{s, x, gh, ge, std::abs(gh - ge)});
      }
    }
    csv.write(prepare_out(cfg) / "greens.csv");
    return kExitOk;
  }
  Csv csv({"s1", "s2", "x", "y", "g_h", "g_exact", "abs_diff"});
  for (const Point s : {Point{0.125, 0.125}, Point{0.625, 0.375}, Point{0.875, 0.875}}) {
    const Eigen::VectorXd resp = g.source_response(s);
    for (int j = 0; j < kSamples; ++j) {
      for (int i = 0; i < kSamples; ++i) {
        const Point x{sample_coord(i), sample_coord(j)};
        const double gh = g.evaluate_response(resp, x);
        const double ge = exact_greens_2d_poisson(x, s);
        csv.row(std::vector<double>{s[0], s[1], x[0], x[1], gh, ge, std::abs(gh - ge)});
      }
    }
  }
  csv.write(prepare_out(cfg) / "greens.csv");
  return kExitOk;
}

int cmd_ortho(const RunConfig& cfg, std::ostream& /*err*/) {
  validate(cfg);
  const std::vector<int> p_list = cfg.grid.empty() ? std::vector<int>{1, 2, 4} : cfg.grid;
  const std::vector<int> k_list = cfg.k_given ? cfg.k : std::vector<int>{1, 2, 3, 4};
  for (int p : p_list) {
    if (p < 1) throw std::invalid_argument("--grid (p values) must be at least 1");
  }
  ProblemSpec spec = base_spec(cfg);
  const OrthoTable t = orthogonality_table(cfg.formulation, p_list, k_list, spec);
  auto table = [&](const Eigen::MatrixXd& m) {
    std::vector<std::string> header{"p"};
    for (int k : k_list) header.push_back("k" + std::to_string(k));
    Csv csv(header);
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      std::vector<std::string> row{std::to_string(p_list[i])};
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_number(m(static_cast<Eigen::Index>(i), j)));
      csv.row(row);
    }
    return csv;
  };
  const Csv main_table = table(t.values);
  const fs::path dir = prepare_out(cfg);
  main_table.write(dir / "ortho.csv");
  if (cfg.formulation == Formulation::Mixed) table(t.div_values).write(dir / "ortho_div.csv");
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational multiscale solver for steady advection-diffusion"};
  app.fallthrough();
  app.require_subcommand(1);
  app.allow_config_extras(false);

  RunConfig cfg;
  std::string form = "direct";
  std::string axis = "h";
  app.set_config("--config", "", "Key-value config file mirroring the flags");
  app.add_option("--dim", cfg.dim, "Spatial dimension")->check(CLI::IsMember({1, 2}));
  app.add_option("--form", form, "Formulation")->check(CLI::IsMember({"direct", "mixed"}));
  app.add_option("--nu", cfg.nu, "Diffusion coefficient");
  app.add_option("--N", cfg.N, "Elements per axis");
  app.add_option("--p", cfg.p, "Coarse polynomial degree");
  auto* kopt = app.add_option("--k", cfg.k, "Fine degree increment(s)")->delimiter(',');
  app.add_option("--axis", axis, "Sweep axis")->check(CLI::IsMember({"h", "p", "k"}));
  app.add_option("--grid", cfg.grid, "Sweep values (ortho: p values)")->delimiter(',');
  app.add_option("--out", cfg.out, "Output directory");

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&);
  };
  const Command commands[] = {
      {"solve", "Galerkin, projection and VMS solutions sampled on a grid", cmd_solve},
      {"converge", "Convergence sweep along one axis", cmd_converge},
      {"greens", "Discrete and exact Greens' kernels", cmd_greens},
      {"ortho", "Fine-scale orthogonality tables", cmd_ortho},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }
  cfg.formulation = form == "mixed" ? Formulation::Mixed : Formulation::Direct;
  cfg.axis = parse_axis(axis);
  cfg.k_given = kopt->count() > 0;

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    cfg.command = c.name;
    try {
      return c.fn(cfg, err);
    } catch (const std::invalid_argument& e) {
      err << "invalid configuration: " << e.what() << '\n';
      return kExitInvalidConfig;
    } catch (const std::exception& e) {
      err << "solver failure: " << e.what() << '\n';
      return kExitSolverFailure;
    }
  }
  return kExitInvalidConfig;
}

}  // namespace vms::cli
