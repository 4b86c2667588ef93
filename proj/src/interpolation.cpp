#include "crfem/interpolation.hpp"

#include <stdexcept>

#include "crfem/elements.hpp"
#include "crfem/quadrature.hpp"

namespace crfem {

namespace {

void check_cr(const Triangulation& tri, const CrFunction& v, int components) {
  if (v.num_facets != tri.num_facets() || v.components != components ||
      v.dofs.size() != components * tri.num_facets()) {
    throw std::invalid_argument("CR function does not match the triangulation");
  }
}

void check_rt0(const Triangulation& tri, const Rt0Function& v) {
  if (v.flux.size() != tri.num_facets()) {
    throw std::invalid_argument("RT0 function does not match the triangulation");
  }
}

template <typename Value, typename Field>
Value facet_mean(const Triangulation& tri, const Field& f, int facet) {
  const auto& verts = tri.facets()[facet];
  const Point2 a = tri.vertices()[verts[0]];
  const Point2 b = tri.vertices()[verts[1]];
  const auto& rule = edge_rule();
  Value sum{};
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double t = rule.points[q];
    sum += rule.weights[q] * f((1.0 - t) * a + t * b);
  }
  return sum;
}

}  // namespace

double cr_value(const Triangulation& tri, const CrFunction& v, int cell, int c, Point2 x) {
  const auto& g = tri.geometry(cell);
  const auto lambda = barycentric(g, x);
  const auto& facets = tri.cell_facets(cell);
  double value = 0.0;
  for (int i = 0; i < 3; ++i) value += v(c, facets[i]) * (1.0 - 2.0 * lambda[i]);
  return value;
}

Vec2 cr_vector_value(const Triangulation& tri, const CrFunction& v, int cell, Point2 x) {
  return {cr_value(tri, v, cell, 0, x), cr_value(tri, v, cell, 1, x)};
}

Vec2 cr_gradient(const Triangulation& tri, const CrFunction& v, int cell, int c) {
  const auto& g = tri.geometry(cell);
  const auto& facets = tri.cell_facets(cell);
  Vec2 grad{};
  for (int i = 0; i < 3; ++i) grad += v(c, facets[i]) * cr_grad(g, i);
  return grad;
}

Mat2 cr_jacobian(const Triangulation& tri, const CrFunction& v, int cell) {
  const Vec2 g0 = cr_gradient(tri, v, cell, 0);
  const Vec2 g1 = cr_gradient(tri, v, cell, 1);
  return Mat2{{{g0.x1, g0.x2}, {g1.x1, g1.x2}}};
}

P0Function broken_divergence(const Triangulation& tri, const CrFunction& v) {
  check_cr(tri, v, 2);
  P0Function div{std::vector<double>(tri.num_cells())};
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const int cell = static_cast<int>(c);
    const auto& g = tri.geometry(cell);
    const auto& facets = tri.cell_facets(cell);
    // Divergence theorem: the outward fluxes of the linear field over |T|.
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += cr_facet_flux(tri, v, facets[i], cell) * (tri.facet_sign(cell, i) / g.area);
    div.values[c] = sum;
  }
  return div;
}

P0Function broken_curl(const Triangulation& tri, const CrFunction& v) {
  check_cr(tri, v, 2);
  P0Function curl{std::vector<double>(tri.num_cells())};
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const Mat2 J = cr_jacobian(tri, v, static_cast<int>(c));
    curl.values[c] = J[1][0] - J[0][1];
  }
  return curl;
}

Vec2 rt0_value(const Triangulation& tri, const Rt0Function& v, int cell, Point2 x) {
  const auto& g = tri.geometry(cell);
  const auto& facets = tri.cell_facets(cell);
  Vec2 value{};
  for (int i = 0; i < 3; ++i) value += v.flux[facets[i]] * rt0_eval(g, i, x, tri.facet_sign(cell, i));
  return value;
}

double rt0_divergence(const Triangulation& tri, const Rt0Function& v, int cell) {
  const auto& g = tri.geometry(cell);
  const auto& facets = tri.cell_facets(cell);
  double div = 0.0;
  for (int i = 0; i < 3; ++i) div += v.flux[facets[i]] * rt0_div(g, i, tri.facet_sign(cell, i));
  return div;
}

P0Function rt0_divergence(const Triangulation& tri, const Rt0Function& v) {
  check_rt0(tri, v);
  P0Function div{std::vector<double>(tri.num_cells())};
  for (std::size_t c = 0; c < tri.num_cells(); ++c) div.values[c] = rt0_divergence(tri, v, static_cast<int>(c));
  return div;
}

P0Function project_p0(const ScalarField& f, const Triangulation& tri, int degree) {
  const auto& rule = quadrature_rule(degree);
  P0Function out{std::vector<double>(tri.num_cells())};
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const auto& g = tri.geometry(static_cast<int>(c));
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) sum += rule.weights[q] * f(map_to_cell(g, rule.points[q]));
    out.values[c] = sum;
  }
  return out;
}

P0VectorFunction project_p0(const VectorField& f, const Triangulation& tri, int degree) {
  const auto& rule = quadrature_rule(degree);
  P0VectorFunction out{std::vector<Vec2>(tri.num_cells())};
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const auto& g = tri.geometry(static_cast<int>(c));
    Vec2 sum{};
    for (std::size_t q = 0; q < rule.weights.size(); ++q) sum += rule.weights[q] * f(map_to_cell(g, rule.points[q]));
    out.values[c] = sum;
  }
  return out;
}

CrFunction interpolate_cr(const ScalarField& v, const Triangulation& tri) {
  CrFunction out(1, tri.num_facets());
  for (std::size_t f = 0; f < tri.num_facets(); ++f) out(0, static_cast<int>(f)) = facet_mean<double>(tri, v, static_cast<int>(f));
  return out;
}

CrFunction interpolate_cr(const VectorField& v, const Triangulation& tri) {
  CrFunction out(2, tri.num_facets());
  for (std::size_t f = 0; f < tri.num_facets(); ++f) {
    const Vec2 mean = facet_mean<Vec2>(tri, v, static_cast<int>(f));
    out(0, static_cast<int>(f)) = mean.x1;
    out(1, static_cast<int>(f)) = mean.x2;
  }
  return out;
}

Rt0Function interpolate_rt0(const VectorField& v, const Triangulation& tri) {
  Rt0Function out{std::vector<double>(tri.num_facets())};
  for (std::size_t f = 0; f < tri.num_facets(); ++f) {
    const int fi = static_cast<int>(f);
    const Vec2 n = tri.facet_normal(fi);
    out.flux[f] = tri.facet_length(fi) * facet_mean<double>(tri, [&](Point2 x) { return dot(v(x), n); }, fi);
  }
  return out;
}

double cr_facet_flux(const Triangulation& tri, const CrFunction& v, int facet, int cell) {
  check_cr(tri, v, 2);
  const auto& fc = tri.facet_cells(facet);
  if (cell != fc[0] && cell != fc[1]) throw std::invalid_argument("cr_facet_flux: cell is not incident to facet");
  // The trace is linear with mean value equal to the facet DOF.
  const Vec2 n = tri.facet_normal(facet);
  return tri.facet_length(facet) * (v(0, facet) * n.x1 + v(1, facet) * n.x2);
}

Rt0Function lift_cr_to_rt0(const CrFunction& v, const Triangulation& tri) {
  check_cr(tri, v, 2);
  Rt0Function out{std::vector<double>(tri.num_facets())};
  for (std::size_t f = 0; f < tri.num_facets(); ++f) {
    const int fi = static_cast<int>(f);
    out.flux[f] = cr_facet_flux(tri, v, fi, tri.facet_cells(fi)[0]);
  }
  return out;
}

}  // namespace crfem
