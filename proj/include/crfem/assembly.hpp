#pragma once

/// \file assembly.hpp
/// \brief Global matrices and vectors of the lifted Crouzeix-Raviart scheme:
/// viscous block, divergence block, rotational convection and the lifted load.

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "crfem/elements.hpp"
#include "crfem/interpolation.hpp"
#include "crfem/linalg.hpp"
#include "crfem/mesh.hpp"
#include "crfem/quadrature.hpp"

namespace crfem {

/// Numbering of the velocity-pressure pair. Velocity DOFs are component-major
/// (index c * #facets + f); pressure DOF k belongs to cell k and follows all
/// velocity DOFs in the monolithic numbering.
class DofMap {
 public:
  explicit DofMap(const Triangulation& tri);

  std::size_t num_facets() const { return num_facets_; }
  std::size_t num_velocity() const { return 2 * num_facets_; }
  std::size_t num_pressure() const { return num_cells_; }
  /// #velocity + #pressure, boundary DOFs included.
  std::size_t total() const { return num_velocity() + num_pressure(); }

  std::size_t velocity(int facet, int component) const { return component * num_facets_ + facet; }
  /// Monolithic index of the pressure DOF of `cell`.
  std::size_t pressure(int cell) const { return num_velocity() + cell; }
  /// Inverse of velocity(): {facet, component}.
  std::array<int, 2> velocity_owner(std::size_t index) const {
    return {static_cast<int>(index % num_facets_), static_cast<int>(index / num_facets_)};
  }

  /// Velocity indices on boundary facets, ascending.
  const std::vector<std::size_t>& boundary_velocity() const { return boundary_velocity_; }
  bool is_boundary_velocity(std::size_t index) const { return boundary_mask_[index]; }

 private:
  std::size_t num_facets_;
  std::size_t num_cells_;
  std::vector<std::size_t> boundary_velocity_;
  std::vector<bool> boundary_mask_;
};

/// The six lifted velocity basis functions restricted to one cell. Entry
/// 3 * c + i is the RT0 interpolant of theta_i e_c, an affine field of the
/// form scale * (x - p_i).
struct LiftedCellBasis {
  std::array<Rt0Local, 6> functions{};
  /// Global velocity index of each local function.
  std::array<std::size_t, 6> dofs{};
};

LiftedCellBasis lifted_cell_basis(const Triangulation& tri, const DofMap& dofs, int cell);

/// Componentwise broken stiffness matrix, n_u x n_u.
CsrMatrix assemble_laplacian(const Triangulation& tri, const DofMap& dofs);

/// Divergence block, n_p x n_u, entry (T, j) = -int_T div phi_j.
CsrMatrix assemble_divergence(const Triangulation& tri, const DofMap& dofs);

/// Rotational convection matrix for a frozen CR velocity, n_u x n_u, entry
/// (i, j) = sum_T int_T (L phi_j . grad) u L phi_i - (L phi_i . grad) u L phi_j.
/// Only the upper triangle is integrated; the lower triangle is its exact
/// negative.
CsrMatrix assemble_convection(const Triangulation& tri, const DofMap& dofs, const CrFunction& u_prev);

/// Lifted load, entry i = sum_T int_T f . L phi_i, by a rule of `quad_degree`.
std::vector<double> assemble_load_lifted(const Triangulation& tri, const DofMap& dofs, const VectorField& f,
                                         int quad_degree = 14);
/// Lifted load integrated with an explicit rule.
std::vector<double> assemble_load_lifted(const Triangulation& tri, const DofMap& dofs, const VectorField& f,
                                         const QuadratureRule& rule);

/// Blocks of one linearized step: (nu A + N) u + B^T p = rhs_u, B u = rhs_p.
struct SaddleSystem {
  double nu = 1.0;
  CsrMatrix A;
  CsrMatrix B;
  CsrMatrix N;
  std::vector<double> rhs_u;
  std::vector<double> rhs_p;
};

/// Monolithic system after eliminating the boundary velocity DOFs. Unknowns
/// are the free velocity DOFs (ascending) followed by all pressure DOFs. The
/// pressure diagonal is stored explicitly, with value zero.
struct ReducedSystem {
  CsrMatrix K;
  std::vector<double> rhs;
  /// Global velocity index of each reduced velocity unknown.
  std::vector<std::size_t> free_velocity;
  /// Prescribed values of all velocity DOFs (zero on free DOFs).
  std::vector<double> boundary_values;
  std::size_t num_pressure = 0;

  std::size_t num_free_velocity() const { return free_velocity.size(); }
  std::size_t pressure_offset() const { return free_velocity.size(); }
};

/// Eliminates the boundary velocity DOFs with values from `g_h` (a two
/// component CrFunction whose boundary facet entries are read). Throws
/// std::invalid_argument if g_h has the wrong size or a non-finite boundary
/// value.
ReducedSystem apply_dirichlet(const SaddleSystem& system, const DofMap& dofs, const CrFunction& g_h);

/// Replaces row and column `index` of K by the identity and sets rhs[index] = 0,
/// keeping the sparsity pattern.
void pin_unknown(ReducedSystem& system, std::size_t index);

/// Splits a reduced solution into the full velocity vector (boundary values
/// restored) and the pressure vector.
std::pair<CrFunction, std::vector<double>> expand_solution(const ReducedSystem& system, std::span<const double> x,
                                                           std::size_t num_facets);

}  // namespace crfem
