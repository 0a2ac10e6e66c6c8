// Legacy ASCII VTK (unstructured grid) export of meshes and solution fields.
#pragma once

#include "pfrac/fem.hpp"
#include "pfrac/mesh.hpp"

#include <string>

namespace pfrac {

// POINTS / CELLS (triangle type 5) / CELL_TYPES sections only.
void write_mesh_vtk(const Mesh& mesh, const std::string& path);

// Mesh plus POINT_DATA: scalar phi and vector u.
void write_fields_vtk(const Mesh& mesh, const State& state, const std::string& path);

}  // namespace pfrac
