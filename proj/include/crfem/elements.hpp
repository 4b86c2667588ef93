#pragma once

/// \file elements.hpp
/// \brief Local Crouzeix-Raviart and lowest-order Raviart-Thomas shape
/// functions on a physical triangle.
///
/// Local index i always refers to vertex p_i and to the facet F_i opposite it.
/// All functions take the cell geometry computed by the mesh and are pure.

#include <array>

#include "crfem/mesh.hpp"

namespace crfem {

/// Barycentric coordinates of x; they sum to one and lambda_i(p_j) = delta_ij.
std::array<double, 3> barycentric(const CellGeometry& cell, Point2 x);

/// CR basis theta_i = 1 - 2 lambda_i, equal to one on the midpoint of F_i and
/// zero on the other two midpoints.
double cr_eval(const CellGeometry& cell, int i, Point2 x);
/// Constant gradient -2 grad(lambda_i).
Vec2 cr_grad(const CellGeometry& cell, int i);

/// RT0 basis dual to the outward flux through F_i:
///   theta_i(x) = sign / (2|T|) (x - p_i),
/// where `sign` flips the orientation to a globally fixed facet normal.
Vec2 rt0_eval(const CellGeometry& cell, int i, Point2 x, double sign = 1.0);
/// Constant divergence sign / |T|.
double rt0_div(const CellGeometry& cell, int i, double sign = 1.0);

/// Affine-in-x field `scale * (x - anchor)` restricted to a cell; the form
/// every RT0 basis function takes on its cell.
struct Rt0Local {
  double scale = 0.0;
  Point2 anchor{};

  Vec2 operator()(Point2 x) const { return scale * (x - anchor); }
  double divergence() const { return 2.0 * scale; }
};

inline Rt0Local rt0_local(const CellGeometry& cell, int i, double sign = 1.0) {
  return {sign / (2.0 * cell.area), cell.vertices[i]};
}

/// Physical point of a barycentric triple.
inline Point2 map_to_cell(const CellGeometry& cell, const std::array<double, 3>& lambda) {
  return lambda[0] * cell.vertices[0] + lambda[1] * cell.vertices[1] + lambda[2] * cell.vertices[2];
}

}  // namespace crfem
