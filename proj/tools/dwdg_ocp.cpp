// Command line driver: refinement sweeps over (gamma, N) emitting CSV or
// Markdown tables, and single solves printing errors and iteration counts.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dwdg/dwdg.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

// "inf" for no bounds, otherwise "lo,hi" where either end may be +-inf
dwdg::BoxBounds parse_bounds(const std::string& s) {
  if (s == "inf") return dwdg::BoxBounds::unbounded();
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--bounds expects 'lo,hi' or 'inf'");
  const std::string lo = s.substr(0, comma);
  const std::string hi = s.substr(comma + 1);
  dwdg::BoxBounds b;
  if (lo != "-inf" && lo != "inf") b.lower = std::stod(lo);
  if (hi != "inf") b.upper = std::stod(hi);
  if (b.lower && b.upper && !(*b.lower < *b.upper))
    throw CLI::ValidationError("--bounds requires lo < hi");
  return b;
}

struct CommonOptions {
  int example = 1;
  int control_degree = 0;
  double beta = -1.0;  // <0: keep the example's value
  std::string bounds;
  double tol = 1e-10;
};

dwdg::ExampleSpec configure_example(const CommonOptions& opt) {
  dwdg::ExampleSpec ex = dwdg::make_example(opt.example);
  const bool rebuild = opt.beta > 0.0 || !opt.bounds.empty();
  if (opt.beta > 0.0) ex.beta = opt.beta;
  if (!opt.bounds.empty()) ex.bounds = parse_bounds(opt.bounds);
  if (rebuild) {
    // overriding beta or the bounds invalidates the manufactured identities;
    // keep the state/adjoint/desired state and rebuild the control and the
    // state source so that the projection form and the state equation hold
    const dwdg::BoxBounds bounds = ex.bounds;
    const double beta = ex.beta;
    const dwdg::ScalarField adjoint = ex.exact_adjoint;
    const dwdg::ScalarField laplace_rhs = dwdg::make_example(1).exact_control;
    ex.exact_control = [bounds, beta, adjoint](double x, double y) {
      return bounds.clamp(-adjoint(x, y) / beta);
    };
    const dwdg::ScalarField control = ex.exact_control;
    ex.state_source = [laplace_rhs, control](double x, double y) {
      return laplace_rhs(x, y) - control(x, y);
    };
  }
  return ex;
}

int run_command(const CommonOptions& opt, const std::vector<double>& gammas,
                const std::vector<int>& levels, const std::string& format,
                const std::string& out_path) {
  const dwdg::ExampleSpec ex = configure_example(opt);
  const double defect = dwdg::example_consistency_defect(ex);
  if (defect > 1e-10) {
    std::cerr << "example self-check failed, defect " << defect << "\n";
    return 2;
  }
  std::vector<dwdg::ConvergenceRecord> records;
  try {
    records = dwdg::run_sweep(ex, opt.control_degree, gammas, levels, opt.tol);
  } catch (const dwdg::SweepError& err) {
    std::cerr << err.what() << "\n";
    return 1;
  }
  const std::string text = dwdg::emit_table(
      records, format == "csv" ? dwdg::TableFormat::csv : dwdg::TableFormat::markdown);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open " << out_path << "\n";
      return 1;
    }
    out << text;
  }
  return 0;
}

int solve_command(const CommonOptions& opt, double gamma, int level) {
  const dwdg::ExampleSpec ex = configure_example(opt);
  const double defect = dwdg::example_consistency_defect(ex);
  if (defect > 1e-10) {
    std::cerr << "example self-check failed, defect " << defect << "\n";
    return 2;
  }
  const dwdg::Mesh mesh = dwdg::build_crisscross(level);
  const dwdg::AssembledForms forms = dwdg::assemble_forms(mesh, gamma);
  const dwdg::OcpConfig cfg = dwdg::make_config(ex, opt.control_degree, gamma, opt.tol);
  const dwdg::OcpSolution sol = dwdg::pdas_solve(mesh, cfg, forms);
  const dwdg::AnalyticFunction exact_y{ex.exact_state, ex.exact_state_grad};
  const dwdg::AnalyticFunction exact_p{ex.exact_adjoint, ex.exact_adjoint_grad};
  std::cout << "example " << ex.id << "  k=" << opt.control_degree << "  gamma=" << gamma
            << "  N=" << level << "  h=1/" << 2 * level << "\n"
            << "  state energy error   "
            << dwdg::error_energy(mesh, exact_y, sol.state, forms.lifting, forms.penalty)
            << "\n"
            << "  adjoint energy error "
            << dwdg::error_energy(mesh, exact_p, sol.adjoint, forms.lifting, forms.penalty)
            << "\n"
            << "  control L2 error     "
            << dwdg::error_l2(mesh, ex.exact_control, sol.control) << "\n"
            << "  pdas iterations      " << sol.iterations << "\n"
            << "  kkt residual         " << sol.residual << "\n";
  return sol.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-wind DG solver for the box-constrained elliptic optimal "
               "control problem on the unit square"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string gamma_list = "0";
  std::string level_list = "1,2,4,8,16,32,64";
  std::string format = "csv";
  std::string out_path;
  double gamma_single = 0.0;
  int level_single = 4;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--example", opt.example, "example problem id")
        ->check(CLI::IsMember({1, 2}))
        ->required();
    cmd->add_option("--control-degree", opt.control_degree, "control space degree k")
        ->check(CLI::IsMember({0, 1}));
    cmd->add_option("--beta", opt.beta, "regularization weight (default: example's)");
    cmd->add_option("--bounds", opt.bounds, "control bounds 'lo,hi' or 'inf'");
    cmd->add_option("--tol", opt.tol, "PDAS convergence tolerance");
  };

  CLI::App* run = app.add_subcommand("run", "refinement sweep, emits a table");
  add_common(run);
  run->add_option("--gamma", gamma_list, "comma list of penalty parameters");
  run->add_option("--levels", level_list, "comma list of N (cells per side)");
  run->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "md"}));
  run->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* solve = app.add_subcommand("solve", "single run, prints errors");
  add_common(solve);
  solve->add_option("--gamma", gamma_single, "penalty parameter");
  solve->add_option("--level", level_single, "N (cells per side)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run))
      return run_command(opt, parse_double_list(gamma_list), parse_int_list(level_list),
                         format, out_path);
    return solve_command(opt, gamma_single, level_single);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
