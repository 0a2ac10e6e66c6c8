// P1 finite-element machinery: assembly of the displacement residual/tangent,
// the (linear) phase-field system, total energy, boundary traction, L2 norms,
// and the quadrature-point history update.
#pragma once

#include "pfrac/linalg.hpp"
#include "pfrac/material.hpp"
#include "pfrac/mesh.hpp"

namespace pfrac {

// Stacked solution state plus the crack-driving history at quadrature points
// (3 per triangle, one per Gauss point).
struct State {
    Vector u;              // nodal displacements, interleaved x/y [mm]
    Vector phi;            // nodal phase field [-]
    HistoryField history;  // per quadrature point [kN/mm^2]
};

State make_state(const Mesh& mesh);

struct AssemblyError : std::runtime_error {
    explicit AssemblyError(const std::string& what) : std::runtime_error(what) {}
};

struct AssembledSystem {
    CsrMatrix matrix;
    Vector rhs;
    bool constrained = false;
};

struct DisplacementAssembly {
    CsrMatrix tangent;  // Dirichlet rows/columns eliminated symmetrically
    Vector residual;    // algebraic residual, zero at constrained dofs
};

// Writes the prescribed Dirichlet values of the given load step into u.
void apply_dirichlet(Vector& u, const DofMap& dofmap, int load_step);

// Residual of the displacement equation at (u, phi) and its consistent
// tangent. u is expected to satisfy the load step's Dirichlet values already.
DisplacementAssembly assemble_displacement(const Mesh& mesh, const State& state,
                                           const MaterialParams& params, const DofMap& dofmap);

// Residual only (cheaper; same elimination convention).
Vector assemble_residual(const Mesh& mesh, const State& state, const MaterialParams& params,
                         const DofMap& dofmap);

// Linear system for the phase field given the current history:
//   [(Gc/l) M + Gc l K + 2(1-kappa) M_H] phi = 2(1-kappa) M_H 1.
AssembledSystem assemble_phasefield(const Mesh& mesh, const State& state,
                                    const MaterialParams& params, const DofMap& dofmap);

// Total energy: crack surface term + degraded elastic term - external work.
double total_energy(const Mesh& mesh, const State& state, const MaterialParams& params,
                    const DofMap& dofmap);

// Integrated boundary traction (sigma . nu) over the tagged boundary, with the
// degraded stress taken from the adjacent elements.
std::array<double, 2> compute_traction(const Mesh& mesh, const State& state,
                                       const MaterialParams& params, const std::string& tag);

// Per-quadrature-point history update: max(previous, Psi_+(eps(u))).
HistoryField compute_history(const Mesh& mesh, const Vector& u, const MaterialParams& params,
                             const HistoryField& previous);

// Scalar P1 mass matrix (one row per node), used for L2 norms.
CsrMatrix assemble_mass_matrix(const Mesh& mesh);

double l2_norm_scalar(const CsrMatrix& mass, const Vector& v);
double l2_norm_displacement(const CsrMatrix& mass, const Vector& u);

// Constant strain of a P1 element under the given displacement vector.
SymTensor2 element_strain(const Mesh& mesh, int tri, const Vector& u);

}  // namespace pfrac
