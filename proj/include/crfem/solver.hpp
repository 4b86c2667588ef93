#pragma once

/// \file solver.hpp
/// \brief Stokes solve and Picard iteration for the lifted CR discretisation.

#include <optional>
#include <string>
#include <vector>

#include "crfem/assembly.hpp"
#include "crfem/interpolation.hpp"
#include "crfem/linalg.hpp"
#include "crfem/mesh.hpp"
#include "crfem/problem.hpp"

namespace crfem {

enum class PicardInit { ExactInterpolant, Stokes, Zero };

std::string to_string(PicardInit init);
/// Accepts "exact", "stokes" or "zero". Throws std::invalid_argument otherwise.
PicardInit parse_picard_init(const std::string& text);

struct PicardConfig {
  double end_tol = 1e-10;
  int max_iters = 100;
  /// Unset means ExactInterpolant when the problem has an exact solution and
  /// Stokes otherwise.
  std::optional<PicardInit> init;
  int quad_degree_load = 14;
  GmresOptions gmres;
};

struct SolveResult {
  CrFunction u_h;
  /// Cell values with zero area-weighted mean.
  P0Function p_h;
  int iterations = 0;
  /// Increment |du|_A + |dp|_mass after each Picard step.
  std::vector<double> history;
  bool converged = false;
  /// Krylov iterations summed over all linear solves.
  std::size_t linear_iterations = 0;
};

/// Subtracts the area-weighted mean so that sum_T |T| p_T = 0.
P0Function normalize_pressure(const P0Function& p_h, const Triangulation& tri);

/// Solves the Stokes system nu A u + B^T p = lifted load, B u = 0 with the
/// Dirichlet data of `problem`. Throws std::runtime_error if GMRES fails.
SolveResult solve_stokes(const ExactProblem& problem, const Triangulation& tri, const PicardConfig& config = {});

/// Picard iteration with the rotational convection frozen at the previous
/// iterate, stopped when
///   |u^{n+1} - u^n|_A + |p^{n+1} - p^n| <= end_tol (|u^n|_A + |p^n|).
/// Non-convergence within max_iters returns the last iterate with
/// converged = false. Throws std::runtime_error if a linear solve fails.
SolveResult picard_solve(const ExactProblem& problem, const Triangulation& tri, const PicardConfig& config = {});

/// Energy seminorm (v^T A v)^{1/2} of a full velocity vector.
double energy_norm(const CsrMatrix& A, std::span<const double> v);
/// Mass-weighted norm (sum_T |T| p_T^2)^{1/2}.
double pressure_norm(const Triangulation& tri, std::span<const double> p);

}  // namespace crfem
