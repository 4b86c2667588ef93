#pragma once

/// \file mesh.hpp
/// \brief Conforming triangulations of the unit square, graded mesh families
/// and the geometric quality measures used for anisotropic elements.

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace crfem {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x1, s * a.x2}; }
  constexpr Vec2& operator+=(Vec2 b) {
    x1 += b.x1;
    x2 += b.x2;
    return *this;
  }
  constexpr double operator[](int c) const { return c == 0 ? x1 : x2; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Point2 = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
/// z-component of the 3D cross product of (a,0) and (b,0).
constexpr double cross(Vec2 a, Vec2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }

/// Row-major 2x2 matrix; entry (a,b) of a velocity gradient is du_a/dx_b.
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Derived geometric data of one triangle.
///
/// The vertex labels p1, p2, p3 follow the anisotropic convention: p2p3 is the
/// longest edge, h1 = |p1 - p2| >= h2 = |p1 - p3|.
struct CellGeometry {
  std::array<Point2, 3> vertices{};  ///< in mesh (counterclockwise) order
  double area = 0.0;
  double diameter = 0.0;                      ///< h_T, the longest edge
  std::array<double, 3> edge_lengths_sorted{};  ///< |L1| <= |L2| <= |L3|
  double h1 = 0.0;
  double h2 = 0.0;
  double H = 0.0;  ///< h1 h2 h_T / |T|
  std::array<Vec2, 3> grad_barycentric{};
  /// Outward unit normal of the edge opposite vertex i.
  std::array<Vec2, 3> outward_normals{};
  /// Length of the edge opposite vertex i.
  std::array<double, 3> facet_lengths{};

  Point2 centroid() const {
    return (1.0 / 3.0) * (vertices[0] + vertices[1] + vertices[2]);
  }
};

/// Geometry of an arbitrary triangle given by three points. Throws
/// std::invalid_argument if the triangle is degenerate. Clockwise input is
/// accepted; area is always positive.
CellGeometry triangle_geometry(const std::array<Point2, 3>& vertices);

class Triangulation {
 public:
  static constexpr int kNone = -1;

  /// Builds facets and adjacency. Cells must be counterclockwise with positive
  /// area; an edge shared by more than two cells is rejected.
  Triangulation(std::vector<Point2> vertices, std::vector<std::array<int, 3>> cells);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_facets() const { return facets_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<std::array<int, 2>>& facets() const { return facets_; }
  const std::vector<int>& boundary_facets() const { return boundary_facets_; }

  /// Incident cells of a facet; the second entry is kNone on the boundary.
  /// The first entry is always the lower-indexed cell.
  const std::array<int, 2>& facet_cells(int f) const { return facet_cells_[f]; }
  bool is_boundary(int f) const { return facet_cells_[f][1] == kNone; }

  /// Fixed unit normal n_F: outward for the lower-indexed incident cell, and
  /// hence outward from the domain on boundary facets.
  Vec2 facet_normal(int f) const { return facet_normals_[f]; }
  double facet_length(int f) const { return facet_lengths_[f]; }
  Point2 facet_midpoint(int f) const {
    return 0.5 * (vertices_[facets_[f][0]] + vertices_[facets_[f][1]]);
  }

  /// Local facet i of cell c is the edge opposite local vertex i.
  const std::array<int, 3>& cell_facets(int c) const { return cell_facets_[c]; }
  /// +1 if n_F agrees with the outward normal of cell c on local facet i.
  double facet_sign(int c, int i) const { return cell_facet_signs_[c][i]; }

  const CellGeometry& geometry(int c) const { return geometry_[c]; }
  std::array<Point2, 3> cell_vertices(int c) const;

  /// Maximum cell diameter.
  double h() const { return h_; }

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> facets_;
  std::vector<std::array<int, 2>> facet_cells_;
  std::vector<Vec2> facet_normals_;
  std::vector<double> facet_lengths_;
  std::vector<int> boundary_facets_;
  std::vector<std::array<int, 3>> cell_facets_;
  std::vector<std::array<double, 3>> cell_facet_signs_;
  std::vector<CellGeometry> geometry_;
  double h_ = 0.0;
};

// Grid-point distributions along one axis of the unit square.
namespace grading {
struct Uniform {};
/// x2^i = (i/N)^eps, with x1 uniform.
struct PowerLaw {
  double eps = 1.0;
};
/// (1 - cos(i pi / N)) / 2 on both axes.
struct Cosine {};
}  // namespace grading

using Grading = std::variant<grading::Uniform, grading::PowerLaw, grading::Cosine>;

/// Tensor grid points (x1 grid, x2 grid) of a graded family.
std::pair<std::vector<double>, std::vector<double>> grid_coordinates(int n, const Grading& g);

/// N x N graded grid, every rectangle cut along its lower-left to upper-right
/// diagonal. Throws std::invalid_argument for N < 1 or eps < 1.
Triangulation generate_graded_mesh(int n, const Grading& g);

const CellGeometry& cell_geometry(const Triangulation& tri, int cell);

struct MeshQualityReport {
  double min_angle_metric = 0.0;  ///< max_T |L3|^2 / |T|
  double max_angle_metric = 0.0;  ///< max_T |L1||L2| / |T|
  double dis_sov = 0.0;           ///< max_T |T|^(1/p - 1/2) h_T
  double semi_regularity = 0.0;   ///< max_T H_T / h_T
  std::size_t num_dofs = 0;       ///< 2 #facets + #cells, boundary included
};

MeshQualityReport quality_report(const Triangulation& tri, double sobolev_exponent = 4.0);

/// Plain-text mesh: "num_vertices num_cells", then one "x1 x2" line per vertex,
/// then one "a b c" line per cell (zero-based vertex ids).
void write_mesh(std::ostream& out, const Triangulation& tri);
Triangulation read_mesh(std::istream& in);

}  // namespace crfem
