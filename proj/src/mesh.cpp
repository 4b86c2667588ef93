#include "crfem/mesh.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace crfem {

CellGeometry triangle_geometry(const std::array<Point2, 3>& v) {
  CellGeometry g;
  g.vertices = v;
  const double signed_area = 0.5 * cross(v[1] - v[0], v[2] - v[0]);
  const double scale = std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
  if (!(std::abs(signed_area) > 1e-14 * scale * scale)) {
    throw std::invalid_argument("triangle_geometry: degenerate cell (zero area)");
  }
  g.area = std::abs(signed_area);
  const double orientation = signed_area > 0.0 ? 1.0 : -1.0;

  for (int i = 0; i < 3; ++i) {
    const Point2 a = v[(i + 1) % 3];
    const Point2 b = v[(i + 2) % 3];
    const Vec2 t = b - a;
    const double len = norm(t);
    g.facet_lengths[i] = len;
    g.outward_normals[i] = (orientation / len) * Vec2{t.x2, -t.x1};
    g.grad_barycentric[i] = (-len / (2.0 * g.area)) * g.outward_normals[i];
  }

  g.edge_lengths_sorted = g.facet_lengths;
  std::sort(g.edge_lengths_sorted.begin(), g.edge_lengths_sorted.end());
  g.diameter = g.edge_lengths_sorted[2];
  // p1 sits opposite the longest edge, so the two edges meeting at p1 are the
  // two shorter ones.
  g.h1 = g.edge_lengths_sorted[1];
  g.h2 = g.edge_lengths_sorted[0];
  g.H = g.h1 * g.h2 / g.area * g.diameter;
  return g;
}

Triangulation::Triangulation(std::vector<Point2> vertices, std::vector<std::array<int, 3>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x1) || !std::isfinite(v.x2)) {
      throw std::invalid_argument("Triangulation: non-finite vertex coordinate");
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  geometry_.reserve(cells_.size());
  cell_facets_.resize(cells_.size());
  cell_facet_signs_.resize(cells_.size());

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    for (int id : cell) {
      if (id < 0 || id >= nv) throw std::invalid_argument("Triangulation: vertex id out of range");
    }
    const auto verts = cell_vertices(static_cast<int>(c));
    if (cross(verts[1] - verts[0], verts[2] - verts[0]) <= 0.0) {
      throw std::invalid_argument("Triangulation: cell " + std::to_string(c) +
                                  " is not counterclockwise with positive area");
    }
    geometry_.push_back(triangle_geometry(verts));
    h_ = std::max(h_, geometry_.back().diameter);

    for (int i = 0; i < 3; ++i) {
      int a = cell[(i + 1) % 3];
      int b = cell[(i + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, static_cast<int>(facets_.size()));
      const int f = it->second;
      if (inserted) {
        facets_.push_back({a, b});
        facet_cells_.push_back({static_cast<int>(c), kNone});
        facet_normals_.push_back(geometry_.back().outward_normals[i]);
        facet_lengths_.push_back(geometry_.back().facet_lengths[i]);
        cell_facet_signs_[c][i] = 1.0;
      } else {
        if (facet_cells_[f][1] != kNone) {
          throw std::invalid_argument("Triangulation: edge shared by more than two cells");
        }
        facet_cells_[f][1] = static_cast<int>(c);
        cell_facet_signs_[c][i] = -1.0;
      }
      cell_facets_[c][i] = f;
    }
  }

  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (facet_cells_[f][1] == kNone) boundary_facets_.push_back(static_cast<int>(f));
  }
}

std::array<Point2, 3> Triangulation::cell_vertices(int c) const {
  const auto& cell = cells_[c];
  return {vertices_[cell[0]], vertices_[cell[1]], vertices_[cell[2]]};
}

std::pair<std::vector<double>, std::vector<double>> grid_coordinates(int n, const Grading& g) {
  if (n < 1) throw std::invalid_argument("generate_graded_mesh: N must be >= 1");
  if (const auto* p = std::get_if<grading::PowerLaw>(&g); p && !(p->eps >= 1.0)) {
    throw std::invalid_argument("generate_graded_mesh: grading exponent must be >= 1");
  }
  std::vector<double> x1(n + 1), x2(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    std::visit(
        [&](const auto& kind) {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, grading::Uniform>) {
            x1[i] = t;
            x2[i] = t;
          } else if constexpr (std::is_same_v<K, grading::PowerLaw>) {
            x1[i] = t;
            x2[i] = std::pow(t, kind.eps);
          } else {
            const double c = 0.5 * (1.0 - std::cos(i * std::numbers::pi / n));
            x1[i] = c;
            x2[i] = c;
          }
        },
        g);
  }
  // Pin the end points so the domain is exactly the unit square.
  x1.front() = x2.front() = 0.0;
  x1.back() = x2.back() = 1.0;
  return {std::move(x1), std::move(x2)};
}

Triangulation generate_graded_mesh(int n, const Grading& g) {
  auto [x1, x2] = grid_coordinates(n, g);
  std::vector<Point2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) vertices.push_back({x1[i], x2[j]});
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  return Triangulation(std::move(vertices), std::move(cells));
}

const CellGeometry& cell_geometry(const Triangulation& tri, int cell) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= tri.num_cells()) {
    throw std::out_of_range("cell_geometry: invalid cell id");
  }
  return tri.geometry(cell);
}

MeshQualityReport quality_report(const Triangulation& tri, double sobolev_exponent) {
  MeshQualityReport r;
  const double exponent = 1.0 / sobolev_exponent - 0.5;
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const auto& g = tri.geometry(static_cast<int>(c));
    const auto& L = g.edge_lengths_sorted;
    r.min_angle_metric = std::max(r.min_angle_metric, L[2] * L[2] / g.area);
    r.max_angle_metric = std::max(r.max_angle_metric, L[0] * L[1] / g.area);
    r.dis_sov = std::max(r.dis_sov, std::pow(g.area, exponent) * g.diameter);
    r.semi_regularity = std::max(r.semi_regularity, g.H / g.diameter);
  }
  r.num_dofs = 2 * tri.num_facets() + tri.num_cells();
  return r;
}

void write_mesh(std::ostream& out, const Triangulation& tri) {
  const auto old_precision = out.precision(17);
  out << tri.num_vertices() << ' ' << tri.num_cells() << '\n';
  for (const auto& v : tri.vertices()) out << v.x1 << ' ' << v.x2 << '\n';
  for (const auto& c : tri.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out.precision(old_precision);
}

Triangulation read_mesh(std::istream& in) {
  std::size_t nv = 0, nc = 0;
  if (!(in >> nv >> nc)) throw std::runtime_error("read_mesh: missing header line");
  std::vector<Point2> vertices(nv);
  for (auto& v : vertices) {
    if (!(in >> v.x1 >> v.x2)) throw std::runtime_error("read_mesh: truncated vertex block");
  }
  std::vector<std::array<int, 3>> cells(nc);
  for (auto& c : cells) {
    if (!(in >> c[0] >> c[1] >> c[2])) throw std::runtime_error("read_mesh: truncated cell block");
  }
  return Triangulation(std::move(vertices), std::move(cells));
}

}  // namespace crfem
