/// \file crfem_cli.cpp
/// \brief Command-line front end: refinement studies, mesh-quality tables,
/// single solves with VTK output and the discrete Sobolev probe.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "crfem/analysis.hpp"
#include "crfem/mesh.hpp"
#include "crfem/solver.hpp"
#include "crfem/study_config.hpp"
#include "crfem/vtk.hpp"

namespace {

using namespace crfem;

/// Raw flag values; unset optionals leave the configuration untouched.
struct Flags {
  std::string config_path;
  std::optional<std::string> example;
  std::optional<std::string> mesh;
  std::optional<double> eps;
  std::optional<std::string> n;
  std::optional<double> nu;
  std::optional<int> threads;
  std::optional<std::string> init;
  std::optional<double> end_tol;
  std::optional<int> max_iters;
  std::optional<int> quad_degree_load;
  std::optional<std::size_t> gmres_restart;
  std::optional<double> gmres_rtol;
  std::optional<std::string> error_rule;
  std::optional<std::string> csv;
  std::optional<std::string> table;
  std::optional<std::string> vtk;
  std::string format = "table";
  int samples = 32;
  double sobolev_p = 4.0;
  unsigned long long seed = 1;
};

void add_mesh_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "Study configuration file");
  cmd->add_option("--mesh", f.mesh, "Mesh family: mesh1 (graded in x2) or mesh2 (cosine)");
  cmd->add_option("--eps", f.eps, "Grading exponent of mesh1 (>= 1)");
  cmd->add_option("--n", f.n, "Comma-separated ascending list of divisions, e.g. 4,8,16");
  cmd->add_option("--format", f.format, "Standard output format")->check(CLI::IsMember({"table", "csv"}));
}

void add_solver_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--example", f.example, "Problem: 1, 2 or custom");
  cmd->add_option("--nu", f.nu, "Viscosity override");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores; capped by CRFEM_MAX_THREADS)");
  cmd->add_option("--init", f.init, "Picard start: exact, stokes or zero");
  cmd->add_option("--end-tol", f.end_tol, "Picard relative increment tolerance");
  cmd->add_option("--max-iters", f.max_iters, "Maximum Picard iterations");
  cmd->add_option("--quad-degree-load", f.quad_degree_load, "Quadrature degree of the load");
  cmd->add_option("--gmres-restart", f.gmres_restart, "GMRES restart length");
  cmd->add_option("--gmres-rtol", f.gmres_rtol, "GMRES relative residual tolerance");
  cmd->add_option("--error-rule", f.error_rule,
                  "Error quadrature: nodal (reference-table rules, default) or exact (degree 12)");
}

StudyConfig build_config(const Flags& f) {
  StudyConfig c;
  bool have_n = false;
  if (!f.config_path.empty()) {
    c = load_config(f.config_path);
    have_n = true;
  }
  if (f.example) c.example = *f.example;
  if (f.mesh) c.mesh.kind = *f.mesh;
  if (f.eps) c.mesh.eps = *f.eps;
  if (f.n) {
    c.n_list = parse_n_list(*f.n);
    have_n = true;
  }
  if (!have_n) throw std::invalid_argument("--n (or a config file) is required");
  if (f.nu) c.nu_override = *f.nu;
  if (f.threads) c.threads = *f.threads;
  if (f.init) c.solver.init = parse_picard_init(*f.init);
  if (f.end_tol) c.solver.end_tol = *f.end_tol;
  if (f.max_iters) c.solver.max_iters = *f.max_iters;
  if (f.quad_degree_load) c.solver.quad_degree_load = *f.quad_degree_load;
  if (f.gmres_restart) c.solver.gmres.restart = *f.gmres_restart;
  if (f.gmres_rtol) c.solver.gmres.rtol = *f.gmres_rtol;
  if (f.error_rule) c.error_rule = parse_error_rule(*f.error_rule);
  if (f.csv) c.output.csv = *f.csv;
  if (f.table) c.output.table = *f.table;
  if (f.vtk) c.output.vtk = *f.vtk;
  validate_config(c);
  return c;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

int run_study_command(const Flags& f) {
  const StudyConfig c = build_config(f);
  const StudyReport report =
      run_study(c.problem(), c.mesh, c.n_list, c.solver, resolve_thread_count(c.threads), c.error_rule);
  if (f.format == "csv") {
    write_study_csv(std::cout, report);
  } else {
    write_study_table(std::cout, report);
  }
  write_file(c.output.csv, [&](std::ostream& out) { write_study_csv(out, report); });
  write_file(c.output.table, [&](std::ostream& out) { write_study_table(out, report); });
  for (const auto& row : report.rows) {
    if (!row.error.empty()) std::cerr << "N=" << row.N << ": " << row.error << '\n';
    else if (!row.converged) std::cerr << "N=" << row.N << ": Picard iteration did not converge\n";
  }
  return report.ok() ? 0 : 1;
}

int run_mesh_report(const Flags& f) {
  const StudyConfig c = build_config(f);
  std::vector<MeshQualityReport> quality;
  for (int n : c.n_list) quality.push_back(quality_report(generate_graded_mesh(n, c.mesh.grading())));
  std::cout << c.mesh.label() << '\n';
  if (f.format == "csv") {
    write_quality_csv(std::cout, c.n_list, quality);
  } else {
    write_quality_table(std::cout, c.n_list, quality);
  }
  write_file(c.output.csv, [&](std::ostream& out) { write_quality_csv(out, c.n_list, quality); });
  write_file(c.output.table, [&](std::ostream& out) { write_quality_table(out, c.n_list, quality); });
  return 0;
}

int run_solve_once(const Flags& f) {
  const StudyConfig c = build_config(f);
  if (c.n_list.size() != 1) throw std::invalid_argument("solve-once takes a single --n value");
  const ExactProblem problem = c.problem();
  const Triangulation tri = generate_graded_mesh(c.n_list.front(), c.mesh.grading());
  const SolveResult sol = picard_solve(problem, tri, c.solver);
  std::printf("example      %s\n", problem.name.c_str());
  std::printf("mesh         %s, N=%d\n", c.mesh.label().c_str(), c.n_list.front());
  std::printf("h            %.5e\n", tri.h());
  std::printf("#Np          %zu\n", quality_report(tri).num_dofs);
  std::printf("iterations   %d (%s)\n", sol.iterations, sol.converged ? "converged" : "not converged");
  std::printf("gmres iters  %zu\n", sol.linear_iterations);
  if (problem.has_exact) {
    std::printf("Err(V_h)     %.5e\n", error_velocity_h1(sol.u_h, problem, tri, c.error_rule));
    std::printf("Err(L2)      %.5e\n", error_velocity_l2(sol.u_h, problem, tri, c.error_rule));
    std::printf("Err(Q_h)     %.5e\n", error_pressure(sol.p_h, problem, tri, c.error_rule));
  }
  if (!c.output.vtk.empty()) {
    export_vtk(c.output.vtk, tri, &sol.u_h, &sol.p_h);
    std::printf("vtk          %s\n", c.output.vtk.c_str());
  }
  return sol.converged ? 0 : 1;
}

int run_sobolev_probe(const Flags& f) {
  const StudyConfig c = build_config(f);
  if (f.samples < 1) throw std::invalid_argument("--samples must be positive");
  std::printf("%5s  %12s  %12s\n", "N", "DisSov", "probe");
  for (int n : c.n_list) {
    const Triangulation tri = generate_graded_mesh(n, c.mesh.grading());
    const double probe = discrete_sobolev_probe(tri, f.sobolev_p, f.samples, f.seed);
    std::printf("%5d  %12.5e  %12.5e\n", n, quality_report(tri, f.sobolev_p).dis_sov, probe);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted Crouzeix-Raviart solver for the rotational Navier-Stokes equations"};
  app.require_subcommand(1);
  Flags flags;

  auto* study = app.add_subcommand("study", "Run a mesh-refinement study and print errors and rates");
  add_mesh_flags(study, flags);
  add_solver_flags(study, flags);
  study->add_option("--csv", flags.csv, "Also write the CSV report to this file");
  study->add_option("--table", flags.table, "Also write the aligned table to this file");

  auto* mesh_report = app.add_subcommand("mesh-report", "Print mesh-quality metrics for each N");
  add_mesh_flags(mesh_report, flags);
  mesh_report->add_option("--csv", flags.csv, "Also write the CSV table to this file");
  mesh_report->add_option("--table", flags.table, "Also write the aligned table to this file");

  auto* solve_once = app.add_subcommand("solve-once", "Solve on one mesh and report errors");
  add_mesh_flags(solve_once, flags);
  add_solver_flags(solve_once, flags);
  solve_once->add_option("--vtk", flags.vtk, "Write the solution as legacy VTK");

  auto* probe = app.add_subcommand("sobolev-probe", "Estimate the discrete Sobolev constant on each mesh");
  add_mesh_flags(probe, flags);
  probe->add_option("--samples", flags.samples, "Random samples per mesh");
  probe->add_option("--p", flags.sobolev_p, "Lebesgue exponent");
  probe->add_option("--seed", flags.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (study->parsed()) return run_study_command(flags);
    if (mesh_report->parsed()) return run_mesh_report(flags);
    if (solve_once->parsed()) return run_solve_once(flags);
    if (probe->parsed()) return run_sobolev_probe(flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
