#include "pfrac/fem.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pfrac;

namespace {

MaterialParams table1_params(bool split) {
    MaterialParams p;
    p.lambda = 121.15;
    p.mu = 80.77;
    p.ell = 0.0075;
    p.gc = 2.7e-3;
    p.kappa = 1e-10;
    p.use_split = split;
    return p;
}

DofMap free_dofmap(const Mesh& mesh) {
    DofMap dofmap;
    dofmap.finalize(mesh.n_nodes());
    return dofmap;
}

// Two-element unit square with a generic random state, kept small and away
// from the split's kinks so finite differences are clean.
struct TwoElementFixture {
    Mesh mesh = unit_square_slit_mesh(1);
    DofMap dofmap;
    MaterialParams params;
    State state;

    TwoElementFixture(bool split, unsigned seed) : params(table1_params(split)) {
        dofmap = free_dofmap(mesh);
        state = make_state(mesh);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> du(-1e-3, 1e-3);
        std::uniform_real_distribution<double> dphi(0.05, 0.6);
        for (auto& v : state.u) v = du(rng);
        for (auto& v : state.phi) v = dphi(rng);
    }
};

DenseMatrix to_dense(const CsrMatrix& A) {
    DenseMatrix d(A.n_rows, A.n_cols);
    for (std::size_t i = 0; i < A.n_rows; ++i)
        for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            d(i, A.col_indices[k]) += A.values[k];
    return d;
}

// Dense Cholesky; returns false if a pivot is non-positive.
bool cholesky_ok(const DenseMatrix& A) {
    const std::size_t n = A.n_rows;
    DenseMatrix L(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0) return false;
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("stress-free state has zero residual") {
    const Mesh mesh = unit_square_slit_mesh(2);
    const DofMap dofmap = free_dofmap(mesh);
    const State state = make_state(mesh);
    for (bool split : {false, true}) {
        const Vector r = assemble_residual(mesh, state, table1_params(split), dofmap);
        for (double v : r) CHECK(v == 0.0);
    }
}

TEST_CASE("without split the tangent is independent of u") {
    TwoElementFixture fx(false, 1);
    const DisplacementAssembly a = assemble_displacement(fx.mesh, fx.state, fx.params, fx.dofmap);
    State other = fx.state;
    for (auto& v : other.u) v *= -3.7;
    const DisplacementAssembly b = assemble_displacement(fx.mesh, other, fx.params, fx.dofmap);
    REQUIRE(a.tangent.values.size() == b.tangent.values.size());
    for (std::size_t k = 0; k < a.tangent.values.size(); ++k)
        CHECK(a.tangent.values[k] == b.tangent.values[k]);
}

TEST_CASE("residual is the gradient of the total energy") {
    for (bool split : {false, true}) {
        CAPTURE(split);
        TwoElementFixture fx(split, split ? 7 : 3);
        const Vector res = assemble_residual(fx.mesh, fx.state, fx.params, fx.dofmap);
        const double h = 1e-7;
        double max_res = 0.0;
        for (double v : res) max_res = std::max(max_res, std::abs(v));
        REQUIRE(max_res > 0.0);
        for (std::size_t k = 0; k < res.size(); ++k) {
            State up = fx.state, dn = fx.state;
            up.u[k] += h;
            dn.u[k] -= h;
            const double fd = (total_energy(fx.mesh, up, fx.params, fx.dofmap) -
                               total_energy(fx.mesh, dn, fx.params, fx.dofmap)) /
                              (2.0 * h);
            CHECK(res[k] == doctest::Approx(fd).epsilon(1e-5).scale(max_res));
        }
    }
}

TEST_CASE("tangent is the Jacobian of the residual") {
    for (bool split : {false, true}) {
        CAPTURE(split);
        TwoElementFixture fx(split, split ? 13 : 11);
        const DisplacementAssembly sys =
            assemble_displacement(fx.mesh, fx.state, fx.params, fx.dofmap);
        const DenseMatrix K = to_dense(sys.tangent);
        const double h = 1e-7;
        double scale = 0.0;
        for (double v : K.values) scale = std::max(scale, std::abs(v));
        for (std::size_t l = 0; l < fx.state.u.size(); ++l) {
            State up = fx.state, dn = fx.state;
            up.u[l] += h;
            dn.u[l] -= h;
            const Vector rp = assemble_residual(fx.mesh, up, fx.params, fx.dofmap);
            const Vector rm = assemble_residual(fx.mesh, dn, fx.params, fx.dofmap);
            for (std::size_t k = 0; k < rp.size(); ++k) {
                const double fd = (rp[k] - rm[k]) / (2.0 * h);
                CHECK(K(k, l) == doctest::Approx(fd).epsilon(1e-4).scale(scale));
            }
        }
    }
}

TEST_CASE("dirichlet rows are eliminated symmetrically") {
    const Mesh mesh = unit_square_slit_mesh(2);
    DofMap dofmap;
    for (int dof : boundary_dofs(mesh, "Bottom", DofField::DisplacementX))
        dofmap.add_displacement(dof, 0.0);
    for (int dof : boundary_dofs(mesh, "Bottom", DofField::DisplacementY))
        dofmap.add_displacement(dof, 0.0);
    dofmap.finalize(mesh.n_nodes());

    State state = make_state(mesh);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> du(-1e-3, 1e-3);
    for (auto& v : state.u) v = du(rng);
    apply_dirichlet(state.u, dofmap, 0);

    const DisplacementAssembly sys = assemble_displacement(mesh, state, table1_params(true), dofmap);
    const DenseMatrix K = to_dense(sys.tangent);
    for (int dof = 0; dof < dofmap.n_disp_dofs(); ++dof) {
        if (!dofmap.disp_constrained[dof]) continue;
        CHECK(sys.residual[dof] == 0.0);
        for (int j = 0; j < dofmap.n_disp_dofs(); ++j) {
            CHECK(K(dof, j) == (j == dof ? 1.0 : 0.0));
            CHECK(K(j, dof) == (j == dof ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("phase field stays zero without history") {
    const Mesh mesh = unit_square_slit_mesh(4, SlitSpec{0.5, 0.0, 0.5});
    const DofMap dofmap = free_dofmap(mesh);
    const State state = make_state(mesh);
    const AssembledSystem sys = assemble_phasefield(mesh, state, table1_params(true), dofmap);
    for (double v : sys.rhs) CHECK(v == 0.0);
    const Vector phi = solve_spd(sys.matrix, sys.rhs, 1e-12);
    for (double v : phi) CHECK(v == 0.0);
}

TEST_CASE("phase field goes to one in the fully broken limit") {
    const Mesh mesh = unit_square_slit_mesh(2);
    const DofMap dofmap = free_dofmap(mesh);
    State state = make_state(mesh);
    for (auto& h : state.history) h = 1e12;
    const AssembledSystem sys = assemble_phasefield(mesh, state, table1_params(true), dofmap);
    const Vector phi = solve_spd(sys.matrix, sys.rhs, 1e-14);
    for (double v : phi) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single-triangle phase system matches the hand assembly") {
    Mesh mesh;
    mesh.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    mesh.triangles = {{0, 1, 2}};
    mesh.tri_level = {0};
    DofMap dofmap = free_dofmap(mesh);

    MaterialParams p;
    p.gc = 1.0;
    p.ell = 1.0;
    p.kappa = 0.0;
    State state = make_state(mesh);
    for (auto& h : state.history) h = 1.0;

    // With Gc = ell = 1, kappa = 0, H = 1: matrix = M + K + 2 M = 3 M + K,
    // rhs_a = 2 * (A/3) * sum_q N_a = 1/3.
    // A = 1/2; M = (1/24)[[2,1,1],[1,2,1],[1,1,2]];
    // K = (1/2)[[2,-1,-1],[-1,1,0],[-1,0,1]].
    const double expected[3][3] = {{3.0 * 2.0 / 24.0 + 1.0, 3.0 / 24.0 - 0.5, 3.0 / 24.0 - 0.5},
                                   {3.0 / 24.0 - 0.5, 3.0 * 2.0 / 24.0 + 0.5, 3.0 / 24.0},
                                   {3.0 / 24.0 - 0.5, 3.0 / 24.0, 3.0 * 2.0 / 24.0 + 0.5}};
    const AssembledSystem sys = assemble_phasefield(mesh, state, p, dofmap);
    const DenseMatrix K = to_dense(sys.matrix);
    for (int a = 0; a < 3; ++a) {
        CHECK(sys.rhs[a] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        for (int b = 0; b < 3; ++b)
            CHECK(K(a, b) == doctest::Approx(expected[a][b]).epsilon(1e-13));
    }
}

TEST_CASE("assembled phase matrix is positive definite") {
    const Mesh mesh = unit_square_slit_mesh(4, SlitSpec{0.5, 0.0, 0.5});
    const DofMap dofmap = free_dofmap(mesh);
    State state = make_state(mesh);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> hdist(0.0, 10.0);
    for (auto& h : state.history) h = hdist(rng);
    const AssembledSystem sys = assemble_phasefield(mesh, state, table1_params(true), dofmap);
    CHECK(cholesky_ok(to_dense(sys.matrix)));
}

TEST_CASE("total energy of simple configurations") {
    const Mesh mesh = unit_square_slit_mesh(4);
    const DofMap dofmap = free_dofmap(mesh);
    const MaterialParams p = table1_params(true);

    State state = make_state(mesh);
    CHECK(total_energy(mesh, state, p, dofmap) == 0.0);

    // Uniform phi = 1, u = 0: only the phi^2 term contributes.
    for (auto& v : state.phi) v = 1.0;
    CHECK(total_energy(mesh, state, p, dofmap) ==
          doctest::Approx(0.5 * p.gc / p.ell).epsilon(1e-12));

    // Homogeneous stretch eps = diag(0, delta), phi = 0.
    const double delta = 1e-3;
    State stretched = make_state(mesh);
    for (int v = 0; v < mesh.n_nodes(); ++v)
        stretched.u[2 * v + 1] = delta * mesh.nodes[v][1];
    const double expected = (0.5 * p.lambda + p.mu) * delta * delta;
    CHECK(total_energy(mesh, stretched, p, dofmap) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("boundary traction of a homogeneous stretch") {
    const Mesh mesh = unit_square_slit_mesh(4);
    const MaterialParams p = table1_params(true);
    const double delta = 1e-3;
    State state = make_state(mesh);
    for (int v = 0; v < mesh.n_nodes(); ++v) state.u[2 * v + 1] = delta * mesh.nodes[v][1];

    const auto top = compute_traction(mesh, state, p, "Top");
    CHECK(top[1] == doctest::Approx((p.lambda + 2.0 * p.mu) * delta).epsilon(1e-10));
    CHECK(top[1] == doctest::Approx(0.28269).epsilon(1e-10));
    CHECK(top[0] == doctest::Approx(0.0).epsilon(1e-14));

    // sigma . nu on the left boundary has only the -lambda*delta component.
    const auto left = compute_traction(mesh, state, p, "Left");
    CHECK(left[0] == doctest::Approx(-p.lambda * delta).epsilon(1e-10));
    CHECK(left[0] == doctest::Approx(-0.12115).epsilon(1e-10));
    CHECK(left[1] == doctest::Approx(0.0).epsilon(1e-14));

    const State zero = make_state(mesh);
    const auto none = compute_traction(mesh, zero, p, "Top");
    CHECK(none[0] == 0.0);
    CHECK(none[1] == 0.0);

    CHECK_THROWS_AS(compute_traction(mesh, state, p, "Nowhere"), TagError);
}

TEST_CASE("neumann loads enter residual and energy consistently") {
    Mesh mesh = unit_square_slit_mesh(1);
    DofMap dofmap;
    dofmap.neumann.push_back({"Top", {0.0, 0.1}});
    dofmap.finalize(mesh.n_nodes());

    TwoElementFixture fx(true, 19);
    fx.dofmap = dofmap;
    const Vector res = assemble_residual(fx.mesh, fx.state, fx.params, fx.dofmap);
    const double h = 1e-7;
    double max_res = 0.0;
    for (double v : res) max_res = std::max(max_res, std::abs(v));
    for (std::size_t k = 0; k < res.size(); ++k) {
        State up = fx.state, dn = fx.state;
        up.u[k] += h;
        dn.u[k] -= h;
        const double fd = (total_energy(fx.mesh, up, fx.params, fx.dofmap) -
                           total_energy(fx.mesh, dn, fx.params, fx.dofmap)) /
                          (2.0 * h);
        CHECK(res[k] == doctest::Approx(fd).epsilon(1e-5).scale(max_res));
    }
}

TEST_CASE("history update is a pointwise running maximum") {
    const Mesh mesh = unit_square_slit_mesh(2);
    const MaterialParams p = table1_params(true);
    Vector u(2 * mesh.n_nodes(), 0.0);
    for (int v = 0; v < mesh.n_nodes(); ++v) u[2 * v + 1] = 1e-3 * mesh.nodes[v][1];

    const HistoryField zero(3 * mesh.n_triangles(), 0.0);
    const HistoryField h1 = compute_history(mesh, u, p, zero);
    for (double v : h1) CHECK(v > 0.0);

    // Unloading does not erase the history.
    const Vector u0(2 * mesh.n_nodes(), 0.0);
    const HistoryField h2 = compute_history(mesh, u0, p, h1);
    for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h2[i] == h1[i]);
}

TEST_CASE("mass-matrix L2 norms") {
    const Mesh mesh = unit_square_slit_mesh(4);
    const CsrMatrix mass = assemble_mass_matrix(mesh);

    const Vector ones(mesh.n_nodes(), 1.0);
    CHECK(l2_norm_scalar(mass, ones) == doctest::Approx(1.0).epsilon(1e-12));

    Vector u(2 * mesh.n_nodes(), 0.0);
    for (int v = 0; v < mesh.n_nodes(); ++v) {
        u[2 * v] = 3.0;
        u[2 * v + 1] = 4.0;
    }
    CHECK(l2_norm_displacement(mass, u) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("degenerate element triggers an assembly error") {
    Mesh mesh;
    mesh.nodes = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};  // collinear
    mesh.triangles = {{0, 1, 2}};
    mesh.tri_level = {0};
    const DofMap dofmap = free_dofmap(mesh);
    const State state = make_state(mesh);
    CHECK_THROWS_AS(assemble_residual(mesh, state, table1_params(true), dofmap), AssemblyError);
}
