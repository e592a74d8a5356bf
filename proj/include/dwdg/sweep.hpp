// Refinement sweeps over (gamma, N), per-level error/rate records, and the
// CSV / Markdown table emitters.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dwdg/examples.hpp"

namespace dwdg {

struct ConvergenceRecord {
  int example = 1;
  int k = 0;
  double gamma = 0.0;
  int n = 1;
  double h = 0.5;
  int dof_state = 0;
  int dof_control = 0;
  double err_y_energy = 0.0;
  double err_p_energy = 0.0;
  double err_u_l2 = 0.0;
  std::optional<double> rate_y;
  std::optional<double> rate_p;
  std::optional<double> rate_u;
  int pdas_iters = 0;
  bool converged = true;
};

struct SweepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// captured per-level solutions, for self-consistency checks
struct SweepSolution {
  double gamma = 0.0;
  int n = 1;
  OcpSolution solution;
};

// One record per (gamma, N), gammas outer, levels inner. Levels must be
// strictly increasing powers-of-two multiples so that h halves row to row.
inline std::vector<ConvergenceRecord> run_sweep(const ExampleSpec& ex, int k,
                                                const std::vector<double>& gammas,
                                                const std::vector<int>& levels,
                                                double tol = 1e-10,
                                                std::vector<SweepSolution>* capture = nullptr) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1] || levels[i] % levels[i - 1] != 0)
      throw std::invalid_argument("run_sweep: levels must be increasing multiples");
    const int ratio = levels[i] / levels[i - 1];
    if ((ratio & (ratio - 1)) != 0)
      throw std::invalid_argument("run_sweep: level ratios must be powers of two");
  }
  std::vector<ConvergenceRecord> records;
  const AnalyticFunction exact_y{ex.exact_state, ex.exact_state_grad};
  const AnalyticFunction exact_p{ex.exact_adjoint, ex.exact_adjoint_grad};
  for (double gamma : gammas) {
    double prev_y = 0.0, prev_p = 0.0, prev_u = 0.0;
    int prev_n = 0;
    bool have_prev = false;
    for (int n : levels) {
      const Mesh mesh = build_crisscross(n);
      const AssembledForms forms = assemble_forms(mesh, gamma);
      const OcpConfig cfg = make_config(ex, k, gamma, tol);
      const OcpSolution sol = pdas_solve(mesh, cfg, forms);
      if (!sol.converged) {
        std::ostringstream msg;
        msg << "run_sweep: PDAS did not converge at gamma = " << gamma << ", N = " << n
            << " (residual " << sol.residual << ")";
        throw SweepError(msg.str());
      }
      ConvergenceRecord r;
      r.example = ex.id;
      r.k = k;
      r.gamma = gamma;
      r.n = n;
      r.h = mesh.mesh_size();
      r.dof_state = 3 * mesh.num_triangles();
      r.dof_control = (k == 0 ? 1 : 3) * mesh.num_triangles();
      r.err_y_energy = error_energy(mesh, exact_y, sol.state, forms.lifting, forms.penalty);
      r.err_p_energy = error_energy(mesh, exact_p, sol.adjoint, forms.lifting, forms.penalty);
      r.err_u_l2 = error_l2(mesh, ex.exact_control, sol.control);
      r.pdas_iters = sol.iterations;
      r.converged = sol.converged;
      if (have_prev) {
        // per-halving order; the denominator is 1 for the default sequence
        const double steps = std::log2(static_cast<double>(n) / prev_n);
        r.rate_y = std::log2(prev_y / r.err_y_energy) / steps;
        r.rate_p = std::log2(prev_p / r.err_p_energy) / steps;
        r.rate_u = std::log2(prev_u / r.err_u_l2) / steps;
      }
      prev_y = r.err_y_energy;
      prev_p = r.err_p_energy;
      prev_u = r.err_u_l2;
      prev_n = n;
      have_prev = true;
      if (capture) capture->push_back({gamma, n, sol});
      records.push_back(r);
    }
  }
  return records;
}

namespace detail {

inline std::string sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

inline std::string rate2(const std::optional<double>& r) {
  if (!r) return "--";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *r);
  return buf;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

inline std::string emit_csv(const std::vector<ConvergenceRecord>& records) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::ostringstream out;
  out << "example,k,gamma,N,h,dof_state,dof_control,err_y_energy,rate_y,"
         "err_p_energy,rate_p,err_u_l2,rate_u,pdas_iters\n";
  for (const ConvergenceRecord& r : records) {
    out << r.example << ',' << r.k << ',' << detail::num(r.gamma) << ',' << r.n << ','
        << detail::num(r.h) << ',' << r.dof_state << ',' << r.dof_control << ','
        << detail::sci3(r.err_y_energy) << ',' << detail::rate2(r.rate_y) << ','
        << detail::sci3(r.err_p_energy) << ',' << detail::rate2(r.rate_p) << ','
        << detail::sci3(r.err_u_l2) << ',' << detail::rate2(r.rate_u) << ','
        << r.pdas_iters << '\n';
  }
  return out.str();
}

// Markdown tables mirroring the per-gamma column grouping: one table per
// error quantity, rows by level, an (error, rate) column pair per gamma.
inline std::string emit_markdown(const std::vector<ConvergenceRecord>& records) {
  if (records.empty()) throw std::invalid_argument("emit_markdown: no records");
  std::vector<double> gammas;
  std::vector<int> levels;
  for (const ConvergenceRecord& r : records) {
    if (std::find(gammas.begin(), gammas.end(), r.gamma) == gammas.end())
      gammas.push_back(r.gamma);
    if (std::find(levels.begin(), levels.end(), r.n) == levels.end())
      levels.push_back(r.n);
  }
  const auto find = [&](double g, int n) -> const ConvergenceRecord* {
    for (const ConvergenceRecord& r : records)
      if (r.gamma == g && r.n == n) return &r;
    return nullptr;
  };
  std::ostringstream out;
  struct Quantity {
    const char* title;
    double ConvergenceRecord::*err;
    std::optional<double> ConvergenceRecord::*rate;
    bool control_dof;
  };
  const Quantity quantities[] = {
      {"State energy error", &ConvergenceRecord::err_y_energy, &ConvergenceRecord::rate_y, false},
      {"Adjoint energy error", &ConvergenceRecord::err_p_energy, &ConvergenceRecord::rate_p, false},
      {"Control L2 error", &ConvergenceRecord::err_u_l2, &ConvergenceRecord::rate_u, true},
  };
  out << "Example " << records.front().example << ", control degree k = "
      << records.front().k << "\n";
  for (const Quantity& qt : quantities) {
    out << "\n### " << qt.title << "\n\n";
    out << "| h | DOF |";
    for (double g : gammas) out << " err (g=" << detail::num(g) << ") | rate |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < gammas.size(); ++i) out << "---|---|";
    out << "\n";
    for (int n : levels) {
      const ConvergenceRecord* first = find(gammas.front(), n);
      if (!first) continue;
      out << "| 1/" << 2 * n << " | " << (qt.control_dof ? first->dof_control : first->dof_state)
          << " |";
      for (double g : gammas) {
        const ConvergenceRecord* r = find(g, n);
        out << ' ' << detail::sci3(r->*(qt.err)) << " | " << detail::rate2(r->*(qt.rate))
            << " |";
      }
      out << "\n";
    }
  }
  return out.str();
}

enum class TableFormat { csv, markdown };

inline std::string emit_table(const std::vector<ConvergenceRecord>& records,
                              TableFormat format) {
  return format == TableFormat::csv ? emit_csv(records) : emit_markdown(records);
}

}  // namespace dwdg
