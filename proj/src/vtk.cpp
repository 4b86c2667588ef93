#include "crfem/vtk.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace crfem {

void write_vtk(std::ostream& out, const Triangulation& tri, const CrFunction* u_h, const P0Function* p_h) {
  if (u_h != nullptr && (u_h->components != 2 || u_h->num_facets != tri.num_facets())) {
    throw std::invalid_argument("write_vtk: velocity does not match the mesh");
  }
  if (p_h != nullptr && p_h->values.size() != tri.num_cells()) {
    throw std::invalid_argument("write_vtk: pressure does not match the mesh");
  }
  const auto old_precision = out.precision(17);
  out << "# vtk DataFile Version 3.0\ncrfem solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << tri.num_vertices() << " double\n";
  for (const auto& v : tri.vertices()) out << v.x1 << ' ' << v.x2 << " 0\n";
  out << "CELLS " << tri.num_cells() << ' ' << 4 * tri.num_cells() << '\n';
  for (const auto& c : tri.cells()) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << tri.num_cells() << '\n';
  for (std::size_t c = 0; c < tri.num_cells(); ++c) out << "5\n";
  if (u_h != nullptr || p_h != nullptr) out << "CELL_DATA " << tri.num_cells() << '\n';
  if (p_h != nullptr) {
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (double v : p_h->values) out << v << '\n';
  }
  if (u_h != nullptr) {
    out << "VECTORS velocity double\n";
    for (std::size_t c = 0; c < tri.num_cells(); ++c) {
      const auto& facets = tri.cell_facets(static_cast<int>(c));
      const double u1 = ((*u_h)(0, facets[0]) + (*u_h)(0, facets[1]) + (*u_h)(0, facets[2])) / 3.0;
      const double u2 = ((*u_h)(1, facets[0]) + (*u_h)(1, facets[1]) + (*u_h)(1, facets[2])) / 3.0;
      out << u1 << ' ' << u2 << " 0\n";
    }
  }
  out.precision(old_precision);
}

void export_vtk(const std::string& path, const Triangulation& tri, const CrFunction* u_h, const P0Function* p_h) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vtk(file, tri, u_h, p_h);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace crfem
