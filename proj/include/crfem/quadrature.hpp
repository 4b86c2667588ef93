#pragma once

#include <array>
#include <vector>

namespace crfem {

/// Quadrature on a triangle in barycentric form. Weights sum to one; the
/// caller scales by |T|.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Rule exact for all bivariate polynomials of total degree <= `degree`.
/// Supported degrees are 1..kMaxQuadratureDegree; anything else throws
/// std::invalid_argument. Rules are built once and shared.
const QuadratureRule& quadrature_rule(int degree);

/// Seven-point rule on the vertices, edge midpoints and centroid with weights
/// 1/20, 2/15 and 9/20; exact to degree 3.
const QuadratureRule& vertex_midpoint_centroid_rule();

/// Three-point rule on the edge midpoints with equal weights; exact to degree 2.
const QuadratureRule& edge_midpoint_rule();

/// Gauss-Legendre rule on [0,1] with weights summing to one.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// `n`-point Gauss-Legendre rule (exact to degree 2n-1), n in 1..64.
SegmentRule gauss_legendre(int n);

/// Edge rule used by all facet functionals (degree 9).
const SegmentRule& edge_rule();

}  // namespace crfem
