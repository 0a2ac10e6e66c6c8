// Triangulated 2D domains for the fracture benchmarks: structured unit-square
// meshes with a geometric slit (duplicated crack-lip nodes), the L-shaped
// domain, red-green local refinement, boundary tagging, and the map from
// nodes to displacement/phase degrees of freedom.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfrac {

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct TagError : std::runtime_error {
    explicit TagError(const std::string& what) : std::runtime_error(what) {}
};

struct BoundaryEdge {
    int a;
    int b;
    std::string tag;
};

struct Mesh {
    std::vector<std::array<double, 2>> nodes;      // coordinates [mm]
    std::vector<std::array<int, 3>> triangles;     // counter-clockwise
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<int> tri_level;                    // refinement generation per triangle

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    double signed_area(int t) const;
    double total_area() const;
    double min_edge_length() const;
    bool has_tag(const std::string& tag) const;
};

// Horizontal slit segment y = y0, x in [x0, x1]; must lie on mesh lines.
struct SlitSpec {
    double y;
    double x0;
    double x1;
};

struct Rect {
    double x0;
    double y0;
    double x1;
    double y1;
};

// Structured unit-square mesh with n subdivisions per side. When a slit is
// given, nodes along it are duplicated into crack lips (the interior tip stays
// single) and the lips are tagged SlitLower/SlitUpper. Outer tags: Bottom,
// Right, Top, Left.
Mesh unit_square_slit_mesh(int n, const std::optional<SlitSpec>& slit = std::nullopt);

// L-shaped domain, 500x500 mm minus the upper-right 250x250 mm quadrant,
// structured quads of edge h split into triangles. Tags: Bottom, Right, Top,
// Left, InnerHorizontal, InnerVertical, and LoadSegment on
// {470 <= x <= 500, y = 250}.
Mesh lshape_mesh(double h);

// Regular (red) subdivision of every triangle intersecting the box until its
// refinement level reaches `levels`; hanging nodes are removed by bisecting
// neighbors. Triangles outside the box are touched only for conformity.
Mesh refine_region(const Mesh& mesh, const Rect& box, int levels);

enum class DofField { DisplacementX, DisplacementY, Phase };

// Sorted unique dof indices of all nodes on boundary edges carrying the tag.
// Displacement dofs are interleaved (2*node, 2*node+1); phase dofs equal the
// node index. Throws TagError for unknown tags.
std::vector<int> boundary_dofs(const Mesh& mesh, const std::string& tag, DofField field);

// Dirichlet displacement value is rate * load_step (all benchmark schedules
// are proportional loadings; fixed dofs have rate 0).
struct DirichletDisp {
    int dof;
    double rate;
};

struct DirichletPhase {
    int dof;
    double value;
};

// Constant traction applied on a tagged boundary; unused by the shipped
// benchmarks but supported by the assembly.
struct NeumannLoad {
    std::string tag;
    std::array<double, 2> traction;  // [kN/mm^2]
};

struct DofMap {
    int n_nodes = 0;
    std::vector<DirichletDisp> dirichlet_displacement;
    std::vector<DirichletPhase> dirichlet_phase;
    std::vector<NeumannLoad> neumann;

    // Flattened lookups built by finalize().
    std::vector<std::uint8_t> disp_constrained;
    std::vector<double> disp_rate;
    std::vector<std::uint8_t> phase_constrained;
    std::vector<double> phase_value;

    int n_disp_dofs() const { return 2 * n_nodes; }

    // Merges duplicate constraints with equal values; conflicting duplicates
    // are an error.
    void add_displacement(int dof, double rate);
    void add_phase(int dof, double value);

    // Validates indices and builds the flat lookup arrays.
    void finalize(int n_nodes_in);

    double prescribed_displacement(int dof, int load_step) const {
        return disp_rate[dof] * static_cast<double>(load_step);
    }
};

}  // namespace pfrac
