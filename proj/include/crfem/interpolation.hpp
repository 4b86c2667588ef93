#pragma once

/// \file interpolation.hpp
/// \brief Discrete function containers and the projection / interpolation
/// operators between smooth fields, P0, CR and RT0 spaces.

#include <functional>
#include <vector>

#include "crfem/mesh.hpp"

namespace crfem {

using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Vec2(Point2)>;

/// Piecewise-constant scalar, one value per cell.
struct P0Function {
  std::vector<double> values;
};

/// Piecewise-constant vector, one value per cell.
struct P0VectorFunction {
  std::vector<Vec2> values;
};

/// Crouzeix-Raviart function with one facet-mean DOF per facet and component.
/// DOFs are stored component-major: dofs[c * num_facets + f].
struct CrFunction {
  int components = 1;
  std::size_t num_facets = 0;
  std::vector<double> dofs;

  CrFunction() = default;
  CrFunction(int ncomp, std::size_t nfacets) : components(ncomp), num_facets(nfacets), dofs(ncomp * nfacets, 0.0) {}

  double& operator()(int c, int f) { return dofs[c * num_facets + f]; }
  double operator()(int c, int f) const { return dofs[c * num_facets + f]; }
};

/// RT0 function given by its flux through each facet, measured along the
/// mesh's fixed facet normal.
struct Rt0Function {
  std::vector<double> flux;
};

// --- evaluation -----------------------------------------------------------

/// Value of component `c` of a CR function restricted to `cell` at x.
double cr_value(const Triangulation& tri, const CrFunction& v, int cell, int c, Point2 x);
Vec2 cr_vector_value(const Triangulation& tri, const CrFunction& v, int cell, Point2 x);
/// Constant gradient of component `c` on `cell`.
Vec2 cr_gradient(const Triangulation& tri, const CrFunction& v, int cell, int c);
/// Broken gradient of a vector CR function on `cell`; entry (a,b) = d v_a / d x_b.
Mat2 cr_jacobian(const Triangulation& tri, const CrFunction& v, int cell);
/// Broken divergence per cell, computed as the sum of outward facet fluxes
/// divided by |T|.
P0Function broken_divergence(const Triangulation& tri, const CrFunction& v);
/// Broken curl dv2/dx1 - dv1/dx2 per cell.
P0Function broken_curl(const Triangulation& tri, const CrFunction& v);

Vec2 rt0_value(const Triangulation& tri, const Rt0Function& v, int cell, Point2 x);
double rt0_divergence(const Triangulation& tri, const Rt0Function& v, int cell);
P0Function rt0_divergence(const Triangulation& tri, const Rt0Function& v);

// --- operators ------------------------------------------------------------

/// Cell means (1/|T|) int_T f, using a triangle rule of `degree`.
P0Function project_p0(const ScalarField& f, const Triangulation& tri, int degree = 12);
P0VectorFunction project_p0(const VectorField& f, const Triangulation& tri, int degree = 12);

/// Facet means of v on every facet.
CrFunction interpolate_cr(const ScalarField& v, const Triangulation& tri);
CrFunction interpolate_cr(const VectorField& v, const Triangulation& tri);

/// Facet fluxes int_F v . n_F ds.
Rt0Function interpolate_rt0(const VectorField& v, const Triangulation& tri);

/// Flux of the trace of a vector CR function from one incident cell through a
/// facet along n_F, |F| (v_F . n_F). Both incident cells give the same value.
double cr_facet_flux(const Triangulation& tri, const CrFunction& v, int facet, int cell);

/// RT0 interpolant of a vector CR function. Fluxes come from the trace of the
/// lower-indexed incident cell.
Rt0Function lift_cr_to_rt0(const CrFunction& v, const Triangulation& tri);

}  // namespace crfem
