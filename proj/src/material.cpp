#include "pfrac/material.hpp"

#include <algorithm>

namespace pfrac {

namespace {

// Derivative of <a>_+ ; the subgradient midpoint 1/2 is used at a = 0.
double heaviside_plus(double a) {
    if (a > 0.0) return 1.0;
    if (a < 0.0) return 0.0;
    return 0.5;
}

// Relative threshold below which the two eigenvalues count as coincident.
bool eigenvalues_degenerate(double e1, double e2) {
    return std::abs(e1 - e2) < 1e-8 * std::max(1.0, std::abs(e1) + std::abs(e2));
}

}  // namespace

EigenPair eigen_decompose(const SymTensor2& eps) {
    EigenPair out;
    const double mean = 0.5 * (eps.xx + eps.yy);
    const double diff = 0.5 * (eps.xx - eps.yy);
    const double radius = std::hypot(diff, eps.xy);
    out.e1 = mean + radius;
    out.e2 = mean - radius;
    if (radius == 0.0) return out;  // isotropic tensor, any frame works

    // Candidate eigenvectors for e1; pick the numerically larger one.
    const std::array<double, 2> va = {out.e1 - eps.yy, eps.xy};
    const std::array<double, 2> vb = {eps.xy, out.e1 - eps.xx};
    const double na = std::hypot(va[0], va[1]);
    const double nb = std::hypot(vb[0], vb[1]);
    std::array<double, 2> v = na >= nb ? va : vb;
    const double nv = std::max(na, nb);
    if (nv == 0.0) return out;
    out.n1 = {v[0] / nv, v[1] / nv};
    out.n2 = {-out.n1[1], out.n1[0]};
    return out;
}

SplitStrain split_strain(const SymTensor2& eps) {
    const EigenPair ep = eigen_decompose(eps);
    const Bracket b1 = bracket_pm(ep.e1);
    const Bracket b2 = bracket_pm(ep.e2);
    auto rank_one = [](const std::array<double, 2>& n) -> SymTensor2 {
        return {n[0] * n[0], n[1] * n[1], n[0] * n[1]};
    };
    const SymTensor2 m1 = rank_one(ep.n1);
    const SymTensor2 m2 = rank_one(ep.n2);
    return {m1 * b1.plus + m2 * b2.plus, m1 * b1.minus + m2 * b2.minus};
}

SplitScalar psi_pm(const SymTensor2& eps, const MaterialParams& p) {
    const EigenPair ep = eigen_decompose(eps);
    const Bracket b1 = bracket_pm(ep.e1);
    const Bracket b2 = bracket_pm(ep.e2);
    const Bracket tr = bracket_pm(eps.trace());
    const double psi_plus =
        p.mu * (b1.plus * b1.plus + b2.plus * b2.plus) + 0.5 * p.lambda * tr.plus * tr.plus;
    const double psi_minus =
        p.mu * (b1.minus * b1.minus + b2.minus * b2.minus) + 0.5 * p.lambda * tr.minus * tr.minus;
    return {psi_plus, psi_minus};
}

double psi_total(const SymTensor2& eps, const MaterialParams& p) {
    const double tr = eps.trace();
    return p.mu * eps.contract(eps) + 0.5 * p.lambda * tr * tr;
}

SplitStress stress_pm(const SymTensor2& eps, const MaterialParams& p) {
    const SplitStrain s = split_strain(eps);
    const Bracket tr = bracket_pm(eps.trace());
    const SymTensor2 identity{1.0, 1.0, 0.0};
    return {s.plus * (2.0 * p.mu) + identity * (p.lambda * tr.plus),
            s.minus * (2.0 * p.mu) + identity * (p.lambda * tr.minus)};
}

SymTensor2 stress_elastic(const SymTensor2& eps, const MaterialParams& p) {
    const SymTensor2 identity{1.0, 1.0, 0.0};
    return eps * (2.0 * p.mu) + identity * (p.lambda * eps.trace());
}

SymTensor2 stress_degraded(const SymTensor2& eps, double phi, const MaterialParams& p) {
    const double g = degradation(phi, p).g;
    if (!p.use_split) return stress_elastic(eps, p) * g;
    const SplitStress s = stress_pm(eps, p);
    return s.plus * g + s.minus;
}

VoigtMatrix elasticity_matrix(const MaterialParams& p) {
    const double la = p.lambda, mu = p.mu;
    return {{{la + 2.0 * mu, la, 0.0}, {la, la + 2.0 * mu, 0.0}, {0.0, 0.0, mu}}};
}

VoigtMatrix stress_tangent(const SymTensor2& eps, double phi, const MaterialParams& p) {
    const double g = degradation(phi, p).g;

    if (!p.use_split) {
        VoigtMatrix c = elasticity_matrix(p);
        for (auto& row : c)
            for (double& v : row) v *= g;
        return c;
    }

    const TangentParts parts = stress_tangent_parts(eps, p);
    VoigtMatrix c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = g * parts.plus[i][j] + parts.minus[i][j];
    return c;
}

TangentParts stress_tangent_parts(const SymTensor2& eps, const MaterialParams& p) {
    const double la = p.lambda, mu = p.mu;
    const EigenPair ep = eigen_decompose(eps);
    const double h1 = heaviside_plus(ep.e1);
    const double h2 = heaviside_plus(ep.e2);
    const double htr = heaviside_plus(eps.trace());

    // Shear coupling factor of the spectral projection: the difference
    // quotient of <.>_+ between the eigenvalues, or its derivative at the
    // common eigenvalue when they (nearly) coincide.
    double gshear;
    if (eigenvalues_degenerate(ep.e1, ep.e2)) {
        gshear = heaviside_plus(0.5 * (ep.e1 + ep.e2));
    } else {
        gshear = (bracket_pm(ep.e1).plus - bracket_pm(ep.e2).plus) / (ep.e1 - ep.e2);
    }

    // Voigt vectors of the eigenprojections M1 = n1(x)n1, M2 = n2(x)n2 and the
    // symmetrized cross projection M12.
    const std::array<double, 3> m1 = {ep.n1[0] * ep.n1[0], ep.n1[1] * ep.n1[1],
                                      ep.n1[0] * ep.n1[1]};
    const std::array<double, 3> m2 = {ep.n2[0] * ep.n2[0], ep.n2[1] * ep.n2[1],
                                      ep.n2[0] * ep.n2[1]};
    const std::array<double, 3> m12 = {ep.n1[0] * ep.n2[0], ep.n1[1] * ep.n2[1],
                                       0.5 * (ep.n1[0] * ep.n2[1] + ep.n1[1] * ep.n2[0])};

    // P_plus = d(eps_+)/d(eps) acting on engineering-strain Voigt vectors.
    VoigtMatrix pplus{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            pplus[i][j] = h1 * m1[i] * m1[j] + h2 * m2[i] * m2[j] + 2.0 * gshear * m12[i] * m12[j];

    // Symmetric identity on strain vectors (engineering shear halves).
    const VoigtMatrix isym = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 0.5}}};
    const std::array<double, 3> ivec = {1.0, 1.0, 0.0};

    TangentParts out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double pminus = isym[i][j] - pplus[i][j];
            out.plus[i][j] = 2.0 * mu * pplus[i][j] + la * htr * ivec[i] * ivec[j];
            out.minus[i][j] = 2.0 * mu * pminus + la * (1.0 - htr) * ivec[i] * ivec[j];
        }
    }
    return out;
}

}  // namespace pfrac
