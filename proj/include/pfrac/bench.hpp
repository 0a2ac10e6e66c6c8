// Benchmark catalog: geometry recipes, boundary-condition schedules, material
// parameters, and load schedules for the single-notch tensile/shear tests and
// the L-shaped domain, in paper-scale and desk-scale profiles.
#pragma once

#include "pfrac/material.hpp"
#include "pfrac/mesh.hpp"

#include <string>
#include <vector>

namespace pfrac {

struct MeshRecipe {
    enum class Kind { UnitSquareSlit, LShape };
    Kind kind = Kind::UnitSquareSlit;
    int n = 32;                       // subdivisions per side (unit square)
    std::optional<SlitSpec> slit;
    std::optional<Rect> refine_box;   // crack-band refinement
    int refine_levels = 0;
    double h = 125.0 / 8.0;           // target edge length (L-shape) [mm]

    // Smallest element edge the recipe produces, known analytically.
    double fine_edge_length() const;
};

// Proportional Dirichlet schedule: prescribed value = rate * load_step on all
// dofs of `field` along boundary edges tagged `tag`.
struct DirichletRule {
    std::string tag;
    DofField field;
    double rate;
};

struct BenchmarkCase {
    std::string name;
    std::string profile;
    MeshRecipe recipe;
    std::vector<DirichletRule> dirichlet;
    MaterialParams params;
    int n_steps = 0;
    double load_size = 0.0;      // u-bar [mm]
    std::string traction_tag;    // boundary for the load-displacement curve
    bool ell_adjusted = false;   // true if ell was widened to stay mesh-resolved
};

// name in {tensile, shear, lshape}, profile in {desk, paper}. Throws TagError
// on unknown names.
BenchmarkCase get_case(const std::string& name, const std::string& profile);

Mesh build_mesh(const MeshRecipe& recipe);

DofMap build_dofmap(const BenchmarkCase& bc, const Mesh& mesh);

}  // namespace pfrac
