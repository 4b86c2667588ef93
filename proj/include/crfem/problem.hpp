#pragma once

/// \file problem.hpp
/// \brief Manufactured solutions of the rotational Navier-Stokes problem
/// -nu Lap u + (curl u) x u + grad p = f, div u = 0, u = g on the boundary.

#include <functional>
#include <string>

#include "crfem/interpolation.hpp"
#include "crfem/mesh.hpp"

namespace crfem {

using MatrixField = std::function<Mat2(Point2)>;

/// Problem data with an optional exact solution. When `has_exact` is false
/// only nu, f and g are meaningful.
struct ExactProblem {
  std::string name;
  double nu = 1.0;
  bool has_exact = true;
  VectorField u;
  /// Entry (a,b) = d u_a / d x_b.
  MatrixField grad_u;
  /// Componentwise Laplacian of u.
  VectorField lap_u;
  ScalarField p;
  VectorField f;
  /// Dirichlet data, the trace of u for manufactured problems.
  VectorField g;
};

/// Stream function 64 x1^2 (x1-1)^2 x2^2 (x2-1)^2, nu = 0.1, steep pressure
/// gradient 1e5 (1-x2)^3 added to the Bernoulli pressure.
ExactProblem example1();

/// Rigid rotation about (1/2, 1/2) with the same steep pressure, nu = 1. The
/// load is a pure gradient.
ExactProblem example2();

/// Smooth trigonometric solution u = curl(sin^2(pi x1) sin^2(pi x2) / pi),
/// p = cos(pi x1) cos(pi x2), with configurable viscosity (default 1).
ExactProblem custom_example(double nu = 1.0);

/// Same exact solution at viscosity `nu`, with the load adjusted by
/// -(nu - nu_old) Lap u. Throws std::invalid_argument if nu <= 0 or the
/// problem has no exact Laplacian.
ExactProblem with_viscosity(const ExactProblem& problem, double nu);

/// Looks up "1", "2", "example1", "example2" or "custom". Throws
/// std::invalid_argument otherwise.
ExactProblem make_example(const std::string& id);

struct MomentumCheck {
  Vec2 residual;
  /// Sum of the magnitudes of the individual terms, a scale for `residual`.
  double scale = 0.0;
};

/// Momentum residual -nu Lap u + (curl u) x u + grad p - f at x, with the
/// derivatives of u and p taken by fourth-order central differences of step
/// `step`.
MomentumCheck momentum_residual_fd(const ExactProblem& problem, Point2 x, double step = 1e-3);

}  // namespace crfem
