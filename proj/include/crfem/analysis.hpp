#pragma once

/// \file analysis.hpp
/// \brief Error norms against exact solutions, convergence rates, the
/// discrete Sobolev probe and mesh-refinement studies.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crfem/interpolation.hpp"
#include "crfem/mesh.hpp"
#include "crfem/problem.hpp"
#include "crfem/solver.hpp"

namespace crfem {

inline constexpr int kErrorQuadratureDegree = 12;

/// Quadrature used for the error integrals.
enum class ErrorRule {
  /// Degree kErrorQuadratureDegree for every integral (near-exact norms).
  Exact,
  /// Velocity integrals on the vertices, edge midpoints and centroid (degree
  /// 3); pressure integrals on the edge midpoints, which equals the exact L2
  /// distance between p_h and the CR interpolant of p. This is the rule that
  /// reproduces the published reference tables.
  Nodal,
};

std::string to_string(ErrorRule rule);
/// Accepts "exact" or "nodal". Throws std::invalid_argument otherwise.
ErrorRule parse_error_rule(const std::string& text);

/// |u - u_h|_{H^1(T_h)} / |u|_{H^1}, broken seminorm. Throws std::domain_error
/// if the exact seminorm vanishes.
double error_velocity_h1(const CrFunction& u_h, const ExactProblem& problem, const Triangulation& tri,
                         ErrorRule rule = ErrorRule::Exact);
/// |u - u_h|_{L^2} / |u|_{L^2}.
double error_velocity_l2(const CrFunction& u_h, const ExactProblem& problem, const Triangulation& tri,
                         ErrorRule rule = ErrorRule::Exact);
/// |p - p_h|_{L^2} / |p|_{L^2} with both pressures shifted to zero mean.
double error_pressure(const P0Function& p_h, const ExactProblem& problem, const Triangulation& tri,
                      ErrorRule rule = ErrorRule::Exact);

/// log(e_coarse / e_fine) / log 2. Throws std::invalid_argument unless both
/// errors are positive.
double convergence_rate(double e_coarse, double e_fine);

/// |phi_h|_{L^p} / |phi_h|_{H^1(T_h)} for a scalar CR function, or nothing when
/// the broken seminorm vanishes.
std::optional<double> sobolev_ratio(const Triangulation& tri, const CrFunction& phi_h, double p = 4.0);

/// Largest sobolev_ratio over `samples` random CR interpolants of smooth
/// fields sum_{k,l<=3} c_kl sin(k pi x1) sin(l pi x2) (zero boundary DOFs),
/// an empirical lower bound for the discrete Sobolev constant.
double discrete_sobolev_probe(const Triangulation& tri, double p = 4.0, int samples = 32, std::uint64_t seed = 1);

/// Mesh family of a study: "mesh1" (power-law grading in x2 with exponent
/// eps) or "mesh2" (cosine grading on both axes).
struct MeshFamily {
  std::string kind = "mesh1";
  double eps = 1.0;

  Grading grading() const;
  std::string label() const;
};

/// Throws std::invalid_argument on an unknown kind or eps < 1.
MeshFamily make_mesh_family(const std::string& kind, double eps = 1.0);

struct ConvergenceRow {
  int N = 0;
  double h = 0.0;
  double err_vh = 0.0;
  std::optional<double> rate_vh;
  double err_l2 = 0.0;
  std::optional<double> rate_l2;
  double err_qh = 0.0;
  std::optional<double> rate_qh;
  int picard_iters = 0;
  bool converged = false;
  std::size_t dofs = 0;
  /// Non-empty if the solve for this row failed; the error fields are then NaN.
  std::string error;
};

struct StudyMetadata {
  std::string example;
  std::string mesh;
  double eps = 1.0;
  double nu = 0.0;
  int quad_degree_load = 14;
  double end_tol = 0.0;
  std::size_t gmres_restart = 0;
  double gmres_rtol = 0.0;
  ErrorRule error_rule = ErrorRule::Nodal;
};

struct StudyReport {
  std::vector<ConvergenceRow> rows;
  std::vector<MeshQualityReport> quality;
  StudyMetadata metadata;

  bool ok() const;
};

/// Solves `problem` on family meshes for each N (ascending), computes errors,
/// rates and mesh quality. Rows are solved on up to `threads` workers; the
/// report does not depend on the thread count.
StudyReport run_study(const ExactProblem& problem, const MeshFamily& mesh, const std::vector<int>& n_list,
                      const PicardConfig& config = {}, int threads = 1, ErrorRule error_rule = ErrorRule::Nodal);

}  // namespace crfem
