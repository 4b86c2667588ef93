#include "crfem/elements.hpp"

namespace crfem {

std::array<double, 3> barycentric(const CellGeometry& cell, Point2 x) {
  // lambda_i is affine with gradient grad_barycentric[i] and vanishes on F_i.
  std::array<double, 3> lambda{};
  for (int i = 0; i < 3; ++i) {
    const Point2 on_facet = cell.vertices[(i + 1) % 3];
    lambda[i] = dot(cell.grad_barycentric[i], x - on_facet);
  }
  return lambda;
}

double cr_eval(const CellGeometry& cell, int i, Point2 x) {
  return 1.0 - 2.0 * barycentric(cell, x)[i];
}

Vec2 cr_grad(const CellGeometry& cell, int i) { return -2.0 * cell.grad_barycentric[i]; }

Vec2 rt0_eval(const CellGeometry& cell, int i, Point2 x, double sign) {
  return rt0_local(cell, i, sign)(x);
}

double rt0_div(const CellGeometry& cell, int i, double sign) { return sign / cell.area; }

}  // namespace crfem
