#pragma once

/// \file vtk.hpp
/// \brief Legacy ASCII VTK export of a mesh with cellwise solution fields.

#include <iosfwd>
#include <string>

#include "crfem/interpolation.hpp"
#include "crfem/mesh.hpp"

namespace crfem {

/// Writes an UNSTRUCTURED_GRID with CELL_DATA "velocity" (cell average of the
/// CR velocity, i.e. its value at the centroid) and "pressure". Either field
/// may be omitted by passing nullptr.
void write_vtk(std::ostream& out, const Triangulation& tri, const CrFunction* u_h = nullptr,
               const P0Function* p_h = nullptr);

/// File variant; throws std::runtime_error if the file cannot be written.
void export_vtk(const std::string& path, const Triangulation& tri, const CrFunction* u_h = nullptr,
                const P0Function* p_h = nullptr);

}  // namespace crfem
