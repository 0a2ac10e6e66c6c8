#include "pfrac/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pfrac {

namespace {

// Gradients of the P1 shape functions and the (positive) element area.
struct ElementGeometry {
    double area;
    std::array<double, 3> bx;  // dN/dx
    std::array<double, 3> by;  // dN/dy
};

ElementGeometry element_geometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.nodes[tri[0]];
    const auto& p1 = mesh.nodes[tri[1]];
    const auto& p2 = mesh.nodes[tri[2]];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if (det <= 0.0)
        throw AssemblyError("degenerate element " + std::to_string(t) +
                            " (non-positive area " + std::to_string(0.5 * det) + ")");
    ElementGeometry g;
    g.area = 0.5 * det;
    g.bx = {(p1[1] - p2[1]) / det, (p2[1] - p0[1]) / det, (p0[1] - p1[1]) / det};
    g.by = {(p2[0] - p1[0]) / det, (p0[0] - p2[0]) / det, (p1[0] - p0[0]) / det};
    return g;
}

// 3-point symmetric Gauss rule (degree-2 exact); rows are barycentric coords.
constexpr std::array<std::array<double, 3>, 3> kQuadBary = {
    {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
     {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
     {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}}};

SymTensor2 strain_from(const ElementGeometry& g, const std::array<int, 3>& tri, const Vector& u) {
    SymTensor2 eps;
    for (int k = 0; k < 3; ++k) {
        const double ux = u[2 * tri[k]], uy = u[2 * tri[k] + 1];
        eps.xx += g.bx[k] * ux;
        eps.yy += g.by[k] * uy;
        eps.xy += 0.5 * (g.by[k] * ux + g.bx[k] * uy);
    }
    return eps;
}

// sigma : eps(v_k) contributions of a constant stress, i.e. B^T sigma_voigt.
void add_internal_force(const ElementGeometry& g, const std::array<int, 3>& tri,
                        const SymTensor2& sigma, double weight, Vector& f) {
    for (int k = 0; k < 3; ++k) {
        f[2 * tri[k]] += weight * (g.bx[k] * sigma.xx + g.by[k] * sigma.xy);
        f[2 * tri[k] + 1] += weight * (g.by[k] * sigma.yy + g.bx[k] * sigma.xy);
    }
}

// Integrated degradation factor over the element, sum_q w_q g(phi(x_q)).
double integrated_degradation(const ElementGeometry& g, const std::array<int, 3>& tri,
                              const Vector& phi, const MaterialParams& params) {
    double acc = 0.0;
    for (const auto& bary : kQuadBary) {
        const double phi_q = bary[0] * phi[tri[0]] + bary[1] * phi[tri[1]] + bary[2] * phi[tri[2]];
        acc += degradation(phi_q, params).g;
    }
    return acc * g.area / 3.0;
}

// K_e += weight * B^T C B for the 6x6 displacement block.
void add_btcb(const ElementGeometry& g, const VoigtMatrix& c, double weight,
              std::array<std::array<double, 6>, 6>& ke) {
    // Rows of B per dof: dof 2k   -> (bx[k], 0, by[k])
    //                    dof 2k+1 -> (0, by[k], bx[k])
    std::array<std::array<double, 3>, 6> bcols;
    for (int k = 0; k < 3; ++k) {
        bcols[2 * k] = {g.bx[k], 0.0, g.by[k]};
        bcols[2 * k + 1] = {0.0, g.by[k], g.bx[k]};
    }
    for (int a = 0; a < 6; ++a) {
        std::array<double, 3> cb{};
        for (int i = 0; i < 3; ++i)
            cb[i] = c[i][0] * bcols[a][0] + c[i][1] * bcols[a][1] + c[i][2] * bcols[a][2];
        for (int b = 0; b < 6; ++b) {
            const double v = bcols[b][0] * cb[0] + bcols[b][1] * cb[1] + bcols[b][2] * cb[2];
            ke[b][a] += weight * v;
        }
    }
}

std::map<std::pair<int, int>, int> edge_to_element(const Mesh& mesh) {
    std::map<std::pair<int, int>, int> owner;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            owner[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] = t;
        }
    }
    return owner;
}

}  // namespace

State make_state(const Mesh& mesh) {
    State s;
    s.u.assign(2 * mesh.n_nodes(), 0.0);
    s.phi.assign(mesh.n_nodes(), 0.0);
    s.history.assign(3 * mesh.n_triangles(), 0.0);
    return s;
}

void apply_dirichlet(Vector& u, const DofMap& dofmap, int load_step) {
    for (const auto& d : dofmap.dirichlet_displacement)
        u[d.dof] = d.rate * static_cast<double>(load_step);
}

namespace {

// Shared displacement assembly; the tangent is optional so the residual-only
// path stays cheap.
void assemble_displacement_impl(const Mesh& mesh, const State& state,
                                const MaterialParams& params, const DofMap& dofmap,
                                Vector& residual, CsrMatrix* tangent) {
    const int n_dofs = 2 * mesh.n_nodes();
    residual.assign(n_dofs, 0.0);
    std::vector<Triplet> triplets;
    if (tangent) triplets.reserve(36 * mesh.triangles.size() + n_dofs);

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const ElementGeometry geom = element_geometry(mesh, t);
        const SymTensor2 eps = strain_from(geom, tri, state.u);
        const double gbar = integrated_degradation(geom, tri, state.phi, params);

        std::array<std::array<double, 6>, 6> ke{};
        if (params.use_split) {
            const SplitStress sig = stress_pm(eps, params);
            add_internal_force(geom, tri, sig.plus, gbar, residual);
            add_internal_force(geom, tri, sig.minus, geom.area, residual);
            if (tangent) {
                const TangentParts parts = stress_tangent_parts(eps, params);
                add_btcb(geom, parts.plus, gbar, ke);
                add_btcb(geom, parts.minus, geom.area, ke);
            }
        } else {
            const SymTensor2 sig = stress_elastic(eps, params);
            add_internal_force(geom, tri, sig, gbar, residual);
            if (tangent) add_btcb(geom, elasticity_matrix(params), gbar, ke);
        }

        // Body force term -<b, v>.
        if (params.body_force[0] != 0.0 || params.body_force[1] != 0.0) {
            const double w = geom.area / 3.0;
            for (int k = 0; k < 3; ++k) {
                residual[2 * tri[k]] -= w * params.body_force[0];
                residual[2 * tri[k] + 1] -= w * params.body_force[1];
            }
        }

        if (tangent) {
            for (int a = 0; a < 6; ++a) {
                const int ga = 2 * tri[a / 2] + (a % 2);
                if (dofmap.disp_constrained[ga]) continue;
                for (int b = 0; b < 6; ++b) {
                    const int gb = 2 * tri[b / 2] + (b % 2);
                    if (dofmap.disp_constrained[gb]) continue;
                    triplets.push_back({static_cast<std::size_t>(ga),
                                        static_cast<std::size_t>(gb), ke[a][b]});
                }
            }
        }
    }

    // Neumann traction term -<t, v> on tagged boundaries.
    for (const auto& load : dofmap.neumann) {
        bool found = false;
        for (const auto& e : mesh.boundary_edges) {
            if (e.tag != load.tag) continue;
            found = true;
            const auto& a = mesh.nodes[e.a];
            const auto& b = mesh.nodes[e.b];
            const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
            for (int node : {e.a, e.b}) {
                residual[2 * node] -= 0.5 * len * load.traction[0];
                residual[2 * node + 1] -= 0.5 * len * load.traction[1];
            }
        }
        if (!found) throw TagError("assemble_displacement: unknown Neumann tag '" + load.tag + "'");
    }

    for (int dof = 0; dof < n_dofs; ++dof)
        if (dofmap.disp_constrained[dof]) residual[dof] = 0.0;

    if (tangent) {
        for (int dof = 0; dof < n_dofs; ++dof)
            if (dofmap.disp_constrained[dof])
                triplets.push_back({static_cast<std::size_t>(dof), static_cast<std::size_t>(dof),
                                    1.0});
        *tangent = csr_from_triplets(std::move(triplets), n_dofs, n_dofs);
    }
}

}  // namespace

DisplacementAssembly assemble_displacement(const Mesh& mesh, const State& state,
                                           const MaterialParams& params, const DofMap& dofmap) {
    DisplacementAssembly out;
    assemble_displacement_impl(mesh, state, params, dofmap, out.residual, &out.tangent);
    return out;
}

Vector assemble_residual(const Mesh& mesh, const State& state, const MaterialParams& params,
                         const DofMap& dofmap) {
    Vector residual;
    assemble_displacement_impl(mesh, state, params, dofmap, residual, nullptr);
    return residual;
}

AssembledSystem assemble_phasefield(const Mesh& mesh, const State& state,
                                    const MaterialParams& params, const DofMap& dofmap) {
    const int n = mesh.n_nodes();
    AssembledSystem sys;
    sys.rhs.assign(n, 0.0);
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.triangles.size() + n);

    const double c_mass = params.gc / params.ell;
    const double c_stiff = params.gc * params.ell;
    const double c_hist = 2.0 * (1.0 - params.kappa);

    std::vector<std::array<std::array<double, 3>, 3>> local(mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const ElementGeometry geom = element_geometry(mesh, t);
        auto& ke = local[t];
        ke = {};

        // Exact P1 mass and stiffness.
        const double mass = geom.area / 12.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                ke[a][b] += c_mass * mass * (a == b ? 2.0 : 1.0);
                ke[a][b] += c_stiff * geom.area *
                            (geom.bx[a] * geom.bx[b] + geom.by[a] * geom.by[b]);
            }

        // History-weighted mass and load, 3-point quadrature.
        for (int q = 0; q < 3; ++q) {
            const double h = state.history[3 * t + q];
            if (h == 0.0) continue;
            const double w = geom.area / 3.0;
            for (int a = 0; a < 3; ++a) {
                sys.rhs[tri[a]] += c_hist * w * h * kQuadBary[q][a];
                for (int b = 0; b < 3; ++b)
                    ke[a][b] += c_hist * w * h * kQuadBary[q][a] * kQuadBary[q][b];
            }
        }
    }

    // Scatter with symmetric Dirichlet elimination (move known values to rhs).
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a) {
            const int ga = tri[a];
            if (dofmap.phase_constrained[ga]) continue;
            for (int b = 0; b < 3; ++b) {
                const int gb = tri[b];
                if (dofmap.phase_constrained[gb]) {
                    sys.rhs[ga] -= local[t][a][b] * dofmap.phase_value[gb];
                } else {
                    triplets.push_back({static_cast<std::size_t>(ga),
                                        static_cast<std::size_t>(gb), local[t][a][b]});
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!dofmap.phase_constrained[i]) continue;
        triplets.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i), 1.0});
        sys.rhs[i] = dofmap.phase_value[i];
    }

    sys.matrix = csr_from_triplets(std::move(triplets), n, n);
    sys.constrained = true;
    return sys;
}

double total_energy(const Mesh& mesh, const State& state, const MaterialParams& params,
                    const DofMap& dofmap) {
    double energy = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const ElementGeometry geom = element_geometry(mesh, t);
        const SymTensor2 eps = strain_from(geom, tri, state.u);

        // Crack surface energy; grad(phi) is constant, phi^2 needs quadrature.
        double gradx = 0.0, grady = 0.0, phi2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            gradx += geom.bx[k] * state.phi[tri[k]];
            grady += geom.by[k] * state.phi[tri[k]];
        }
        for (const auto& bary : kQuadBary) {
            const double phi_q =
                bary[0] * state.phi[tri[0]] + bary[1] * state.phi[tri[1]] + bary[2] * state.phi[tri[2]];
            phi2 += phi_q * phi_q;
        }
        phi2 *= geom.area / 3.0;
        energy += 0.5 * params.gc *
                  (phi2 / params.ell + params.ell * geom.area * (gradx * gradx + grady * grady));

        // Degraded elastic energy.
        const double gbar = integrated_degradation(geom, tri, state.phi, params);
        if (params.use_split) {
            const SplitScalar psi = psi_pm(eps, params);
            energy += gbar * psi.plus + geom.area * psi.minus;
        } else {
            energy += gbar * psi_total(eps, params);
        }

        // Body-force work.
        if (params.body_force[0] != 0.0 || params.body_force[1] != 0.0) {
            const double w = geom.area / 3.0;
            for (int k = 0; k < 3; ++k)
                energy -= w * (params.body_force[0] * state.u[2 * tri[k]] +
                               params.body_force[1] * state.u[2 * tri[k] + 1]);
        }
    }

    // External traction work.
    for (const auto& load : dofmap.neumann) {
        for (const auto& e : mesh.boundary_edges) {
            if (e.tag != load.tag) continue;
            const auto& a = mesh.nodes[e.a];
            const auto& b = mesh.nodes[e.b];
            const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
            for (int node : {e.a, e.b})
                energy -= 0.5 * len *
                          (load.traction[0] * state.u[2 * node] +
                           load.traction[1] * state.u[2 * node + 1]);
        }
    }
    return energy;
}

std::array<double, 2> compute_traction(const Mesh& mesh, const State& state,
                                       const MaterialParams& params, const std::string& tag) {
    if (!mesh.has_tag(tag)) throw TagError("compute_traction: unknown boundary tag '" + tag + "'");
    const auto owner = edge_to_element(mesh);

    // 2-point Gauss positions on the unit interval.
    const double s0 = 0.5 - 0.5 / std::sqrt(3.0);
    const double s1 = 0.5 + 0.5 / std::sqrt(3.0);

    std::array<double, 2> tau = {0.0, 0.0};
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != tag) continue;
        const int t = owner.at(e.a < e.b ? std::make_pair(e.a, e.b) : std::make_pair(e.b, e.a));
        const auto& tri = mesh.triangles[t];
        const ElementGeometry geom = element_geometry(mesh, t);
        const SymTensor2 eps = strain_from(geom, tri, state.u);

        const auto& pa = mesh.nodes[e.a];
        const auto& pb = mesh.nodes[e.b];
        const double dx = pb[0] - pa[0], dy = pb[1] - pa[1];
        const double len = std::hypot(dx, dy);
        std::array<double, 2> nu = {dy / len, -dx / len};
        // Orient outward: away from the element centroid.
        const double cx = (mesh.nodes[tri[0]][0] + mesh.nodes[tri[1]][0] + mesh.nodes[tri[2]][0]) / 3.0;
        const double cy = (mesh.nodes[tri[0]][1] + mesh.nodes[tri[1]][1] + mesh.nodes[tri[2]][1]) / 3.0;
        const double mx = 0.5 * (pa[0] + pb[0]), my = 0.5 * (pa[1] + pb[1]);
        if (nu[0] * (cx - mx) + nu[1] * (cy - my) > 0.0) {
            nu[0] = -nu[0];
            nu[1] = -nu[1];
        }

        for (double s : {s0, s1}) {
            const double phi_q = (1.0 - s) * state.phi[e.a] + s * state.phi[e.b];
            const SymTensor2 sig = stress_degraded(eps, phi_q, params);
            tau[0] += 0.5 * len * (sig.xx * nu[0] + sig.xy * nu[1]);
            tau[1] += 0.5 * len * (sig.xy * nu[0] + sig.yy * nu[1]);
        }
    }
    return tau;
}

HistoryField compute_history(const Mesh& mesh, const Vector& u, const MaterialParams& params,
                             const HistoryField& previous) {
    HistoryField out(3 * mesh.n_triangles(), 0.0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const ElementGeometry geom = element_geometry(mesh, t);
        const SymTensor2 eps = strain_from(geom, tri, u);
        const double drive = params.use_split ? psi_pm(eps, params).plus : psi_total(eps, params);
        for (int q = 0; q < 3; ++q) {
            const double prev = previous[3 * t + q];
            out[3 * t + q] = drive > prev ? drive : prev;
        }
    }
    return out;
}

CsrMatrix assemble_mass_matrix(const Mesh& mesh) {
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.triangles.size());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double mass = element_geometry(mesh, t).area / 12.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                triplets.push_back({static_cast<std::size_t>(tri[a]),
                                    static_cast<std::size_t>(tri[b]),
                                    mass * (a == b ? 2.0 : 1.0)});
    }
    return csr_from_triplets(std::move(triplets),
                             static_cast<std::size_t>(mesh.n_nodes()),
                             static_cast<std::size_t>(mesh.n_nodes()));
}

double l2_norm_scalar(const CsrMatrix& mass, const Vector& v) {
    const Vector mv = mass.multiply(v);
    return std::sqrt(std::max(0.0, dot(v, mv)));
}

double l2_norm_displacement(const CsrMatrix& mass, const Vector& u) {
    const std::size_t n = mass.n_rows;
    Vector ux(n), uy(n);
    for (std::size_t i = 0; i < n; ++i) {
        ux[i] = u[2 * i];
        uy[i] = u[2 * i + 1];
    }
    const Vector mx = mass.multiply(ux);
    const Vector my = mass.multiply(uy);
    return std::sqrt(std::max(0.0, dot(ux, mx) + dot(uy, my)));
}

SymTensor2 element_strain(const Mesh& mesh, int tri, const Vector& u) {
    return strain_from(element_geometry(mesh, tri), mesh.triangles[tri], u);
}

}  // namespace pfrac
