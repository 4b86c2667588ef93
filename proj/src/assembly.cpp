#include "crfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

#include "crfem/quadrature.hpp"

namespace crfem {

DofMap::DofMap(const Triangulation& tri)
    : num_facets_(tri.num_facets()), num_cells_(tri.num_cells()), boundary_mask_(2 * tri.num_facets(), false) {
  for (int c = 0; c < 2; ++c) {
    for (int f : tri.boundary_facets()) {
      const auto index = velocity(f, c);
      boundary_velocity_.push_back(index);
      boundary_mask_[index] = true;
    }
  }
  std::sort(boundary_velocity_.begin(), boundary_velocity_.end());
}

LiftedCellBasis lifted_cell_basis(const Triangulation& tri, const DofMap& dofs, int cell) {
  const auto& g = tri.geometry(cell);
  const auto& facets = tri.cell_facets(cell);
  LiftedCellBasis basis;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 3; ++i) {
      const double flux = g.facet_lengths[i] * g.outward_normals[i][c];
      basis.functions[3 * c + i] = {flux / (2.0 * g.area), g.vertices[i]};
      basis.dofs[3 * c + i] = dofs.velocity(facets[i], c);
    }
  }
  return basis;
}

CsrMatrix assemble_laplacian(const Triangulation& tri, const DofMap& dofs) {
  TripletBuilder t(dofs.num_velocity(), dofs.num_velocity());
  for (std::size_t cell = 0; cell < tri.num_cells(); ++cell) {
    const int ci = static_cast<int>(cell);
    const auto& g = tri.geometry(ci);
    const auto& facets = tri.cell_facets(ci);
    std::array<Vec2, 3> grads{};
    for (int i = 0; i < 3; ++i) grads[i] = cr_grad(g, i);
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          t.add(dofs.velocity(facets[i], c), dofs.velocity(facets[j], c), g.area * dot(grads[i], grads[j]));
        }
      }
    }
  }
  return t.build();
}

CsrMatrix assemble_divergence(const Triangulation& tri, const DofMap& dofs) {
  TripletBuilder t(dofs.num_pressure(), dofs.num_velocity());
  for (std::size_t cell = 0; cell < tri.num_cells(); ++cell) {
    const int ci = static_cast<int>(cell);
    const auto& g = tri.geometry(ci);
    const auto& facets = tri.cell_facets(ci);
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < 3; ++i) t.add(cell, dofs.velocity(facets[i], c), -g.area * cr_grad(g, i)[c]);
    }
  }
  return t.build();
}

CsrMatrix assemble_convection(const Triangulation& tri, const DofMap& dofs, const CrFunction& u_prev) {
  if (u_prev.components != 2 || u_prev.num_facets != tri.num_facets()) {
    throw std::invalid_argument("assemble_convection: u_prev must be a vector CR function on this mesh");
  }
  const auto& rule = quadrature_rule(4);
  const auto vorticity = broken_curl(tri, u_prev);
  TripletBuilder t(dofs.num_velocity(), dofs.num_velocity());
  std::vector<Point2> points(rule.points.size());
  for (std::size_t cell = 0; cell < tri.num_cells(); ++cell) {
    const int ci = static_cast<int>(cell);
    const auto& g = tri.geometry(ci);
    const auto basis = lifted_cell_basis(tri, dofs, ci);
    for (std::size_t q = 0; q < points.size(); ++q) points[q] = map_to_cell(g, rule.points[q]);
    const double omega = vorticity.values[cell];
    for (int a = 0; a < 6; ++a) {
      for (int b = a + 1; b < 6; ++b) {
        double sum = 0.0;
        for (std::size_t q = 0; q < points.size(); ++q) {
          const Vec2 wa = basis.functions[a](points[q]);
          const Vec2 vb = basis.functions[b](points[q]);
          // wa . J vb with J the rotation by +90 degrees.
          sum += rule.weights[q] * (wa.x2 * vb.x1 - wa.x1 * vb.x2);
        }
        const double value = omega * g.area * sum;
        t.add(basis.dofs[a], basis.dofs[b], value);
        t.add(basis.dofs[b], basis.dofs[a], -value);
      }
    }
  }
  return t.build();
}

std::vector<double> assemble_load_lifted(const Triangulation& tri, const DofMap& dofs, const VectorField& f,
                                         int quad_degree) {
  return assemble_load_lifted(tri, dofs, f, quadrature_rule(quad_degree));
}

std::vector<double> assemble_load_lifted(const Triangulation& tri, const DofMap& dofs, const VectorField& f,
                                         const QuadratureRule& rule) {
  std::vector<double> load(dofs.num_velocity(), 0.0);
  for (std::size_t cell = 0; cell < tri.num_cells(); ++cell) {
    const int ci = static_cast<int>(cell);
    const auto& g = tri.geometry(ci);
    const auto basis = lifted_cell_basis(tri, dofs, ci);
    std::array<double, 6> local{};
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Point2 x = map_to_cell(g, rule.points[q]);
      const Vec2 fx = f(x);
      for (int a = 0; a < 6; ++a) local[a] += rule.weights[q] * dot(fx, basis.functions[a](x));
    }
    for (int a = 0; a < 6; ++a) load[basis.dofs[a]] += g.area * local[a];
  }
  return load;
}

ReducedSystem apply_dirichlet(const SaddleSystem& system, const DofMap& dofs, const CrFunction& g_h) {
  const std::size_t nu_full = dofs.num_velocity();
  const std::size_t np = dofs.num_pressure();
  if (g_h.components != 2 || g_h.dofs.size() != nu_full) {
    throw std::invalid_argument("apply_dirichlet: boundary data has the wrong size");
  }
  if (system.A.rows != nu_full || system.N.rows != nu_full || system.B.rows != np || system.B.cols != nu_full ||
      system.rhs_u.size() != nu_full || system.rhs_p.size() != np) {
    throw std::invalid_argument("apply_dirichlet: system blocks do not match the DOF map");
  }

  ReducedSystem out;
  out.num_pressure = np;
  out.boundary_values.assign(nu_full, 0.0);
  std::vector<std::ptrdiff_t> reduced(nu_full, -1);
  for (std::size_t i = 0; i < nu_full; ++i) {
    if (dofs.is_boundary_velocity(i)) {
      const double value = g_h.dofs[i];
      if (!std::isfinite(value)) {
        const auto owner = dofs.velocity_owner(i);
        throw std::invalid_argument("apply_dirichlet: missing boundary value on facet " + std::to_string(owner[0]));
      }
      out.boundary_values[i] = value;
    } else {
      reduced[i] = static_cast<std::ptrdiff_t>(out.free_velocity.size());
      out.free_velocity.push_back(i);
    }
  }

  const std::size_t nfree = out.free_velocity.size();
  const std::size_t n = nfree + np;
  out.rhs.assign(n, 0.0);
  const CsrMatrix M = add(system.A, system.N, system.nu, 1.0);
  TripletBuilder t(n, n);
  for (std::size_t r = 0; r < nfree; ++r) {
    const std::size_t i = out.free_velocity[r];
    double rhs = system.rhs_u[i];
    for (std::size_t k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(M.col_idx[k]);
      if (reduced[j] >= 0) {
        t.add(r, reduced[j], M.values[k]);
      } else {
        rhs -= M.values[k] * out.boundary_values[j];
      }
    }
    out.rhs[r] = rhs;
  }
  for (std::size_t p = 0; p < np; ++p) {
    const std::size_t row = nfree + p;
    double rhs = system.rhs_p[p];
    for (std::size_t k = system.B.row_ptr[p]; k < system.B.row_ptr[p + 1]; ++k) {
      const auto j = static_cast<std::size_t>(system.B.col_idx[k]);
      const double b = system.B.values[k];
      if (reduced[j] >= 0) {
        t.add(row, reduced[j], b);
        t.add(reduced[j], row, b);
      } else {
        rhs -= b * out.boundary_values[j];
      }
    }
    t.add_pattern(row, row);
    out.rhs[row] = rhs;
  }
  out.K = t.build();
  return out;
}

void pin_unknown(ReducedSystem& system, std::size_t index) {
  auto& K = system.K;
  if (index >= K.rows) throw std::out_of_range("pin_unknown: index outside the system");
  for (std::size_t i = 0; i < K.rows; ++i) {
    for (std::size_t k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(K.col_idx[k]);
      if (i == index || j == index) K.values[k] = (i == j) ? 1.0 : 0.0;
    }
  }
  system.rhs[index] = 0.0;
}

std::pair<CrFunction, std::vector<double>> expand_solution(const ReducedSystem& system, std::span<const double> x,
                                                           std::size_t num_facets) {
  if (x.size() != system.K.rows) throw std::invalid_argument("expand_solution: wrong solution size");
  CrFunction u(2, num_facets);
  u.dofs = system.boundary_values;
  for (std::size_t r = 0; r < system.free_velocity.size(); ++r) u.dofs[system.free_velocity[r]] = x[r];
  std::vector<double> p(x.begin() + system.pressure_offset(), x.end());
  return {std::move(u), std::move(p)};
}

}  // namespace crfem
