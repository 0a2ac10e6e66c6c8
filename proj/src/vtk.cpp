#include "pfrac/vtk.hpp"

#include <cstdio>
#include <fstream>

namespace pfrac {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_grid(std::ofstream& os, const Mesh& mesh, const std::string& title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.n_nodes() << " double\n";
    for (const auto& p : mesh.nodes) os << fmt(p[0]) << ' ' << fmt(p[1]) << " 0\n";
    os << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
    for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "CELL_TYPES " << mesh.n_triangles() << '\n';
    for (int t = 0; t < mesh.n_triangles(); ++t) os << "5\n";
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

}  // namespace

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
    auto os = open_or_throw(path);
    write_grid(os, mesh, "mesh");
}

void write_fields_vtk(const Mesh& mesh, const State& state, const std::string& path) {
    auto os = open_or_throw(path);
    write_grid(os, mesh, "fields");
    os << "POINT_DATA " << mesh.n_nodes() << '\n';
    os << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < mesh.n_nodes(); ++i) os << fmt(state.phi[i]) << '\n';
    os << "VECTORS u double\n";
    for (int i = 0; i < mesh.n_nodes(); ++i)
        os << fmt(state.u[2 * i]) << ' ' << fmt(state.u[2 * i + 1]) << " 0\n";
}

}  // namespace pfrac
