// Pointwise constitutive law for the phase-field fracture model: linearized
// strain, spectral tensile/compressive split, degraded stress and its
// consistent tangent, energy densities, and the crack-driving history value.
//
// Units: lengths mm, stresses kN/mm^2, energy release rate kN/mm.
// Plane strain is assumed throughout.
#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace pfrac {

struct MaterialParams {
    double lambda = 121.15;  // Lame 1 [kN/mm^2]
    double mu = 80.77;       // Lame 2 [kN/mm^2]
    double ell = 0.0075;     // regularization width [mm]
    double gc = 2.7e-3;      // Griffith constant [kN/mm]
    double kappa = 1e-10;    // residual stiffness [-]
    bool use_split = true;   // spectral tensile/compressive split on/off
    std::array<double, 2> body_force = {0.0, 0.0};  // [kN/mm^3], zero in all benchmarks

    bool valid() const {
        return mu > 0.0 && lambda + mu > 0.0 && ell > 0.0 && gc > 0.0 && kappa > 0.0 &&
               kappa < 1.0;
    }
};

// Symmetric 2x2 tensor (xx, yy, xy component storage).
struct SymTensor2 {
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;

    double trace() const { return xx + yy; }
    // Full double contraction a:a (the xy component counts twice).
    double contract(const SymTensor2& o) const { return xx * o.xx + yy * o.yy + 2.0 * xy * o.xy; }

    SymTensor2 operator+(const SymTensor2& o) const { return {xx + o.xx, yy + o.yy, xy + o.xy}; }
    SymTensor2 operator-(const SymTensor2& o) const { return {xx - o.xx, yy - o.yy, xy - o.xy}; }
    SymTensor2 operator*(double s) const { return {xx * s, yy * s, xy * s}; }
};

// Per-quadrature-point crack-driving history values; non-negative and
// pointwise non-decreasing over loading steps.
using HistoryField = std::vector<double>;

// Voigt-ordered 3x3 matrix (xx, yy, xy with engineering shear strain).
using VoigtMatrix = std::array<std::array<double, 3>, 3>;

struct EigenPair {
    double e1 = 0.0;  // larger eigenvalue
    double e2 = 0.0;
    std::array<double, 2> n1 = {1.0, 0.0};
    std::array<double, 2> n2 = {0.0, 1.0};
};

// <a>_+ = max(a,0), <a>_- = min(a,0)
struct Bracket {
    double plus;
    double minus;
};
inline Bracket bracket_pm(double a) {
    return {a > 0.0 ? a : 0.0, a < 0.0 ? a : 0.0};
}

// eps = (grad_u + grad_u^T)/2 for a row-major 2x2 displacement gradient.
inline SymTensor2 strain(const std::array<std::array<double, 2>, 2>& grad_u) {
    return {grad_u[0][0], grad_u[1][1], 0.5 * (grad_u[0][1] + grad_u[1][0])};
}

// Closed-form eigen-decomposition of a symmetric 2x2 tensor.
EigenPair eigen_decompose(const SymTensor2& eps);

struct SplitStrain {
    SymTensor2 plus;
    SymTensor2 minus;
};
// Spectral split eps = eps_+ + eps_- by principal-strain sign.
SplitStrain split_strain(const SymTensor2& eps);

struct SplitScalar {
    double plus;
    double minus;
};
// Tensile/compressive elastic energy densities Psi_+/- .
SplitScalar psi_pm(const SymTensor2& eps, const MaterialParams& p);
// Undegraded total elastic energy density Psi.
double psi_total(const SymTensor2& eps, const MaterialParams& p);

struct SplitStress {
    SymTensor2 plus;
    SymTensor2 minus;
};
// sigma_+/- = 2 mu eps_+/- + lambda <tr eps>_+/- I.
SplitStress stress_pm(const SymTensor2& eps, const MaterialParams& p);

// Undegraded linear-elastic stress 2 mu eps + lambda tr(eps) I.
SymTensor2 stress_elastic(const SymTensor2& eps, const MaterialParams& p);

// Degraded stress g(phi) sigma_+ + sigma_-  (split on), g(phi) sigma (split off).
SymTensor2 stress_degraded(const SymTensor2& eps, double phi, const MaterialParams& p);

// Consistent tangent d(degraded stress)/d(eps) in Voigt ordering. With the
// split off this is g(phi) times the constant isotropic elasticity matrix.
VoigtMatrix stress_tangent(const SymTensor2& eps, double phi, const MaterialParams& p);

// d(sigma_+)/d(eps) and d(sigma_-)/d(eps) of the spectral split; the degraded
// tangent is g(phi)*plus + minus. Lets assembly reuse the split across the
// quadrature points of an element (strain is constant there, phi is not).
struct TangentParts {
    VoigtMatrix plus;
    VoigtMatrix minus;
};
TangentParts stress_tangent_parts(const SymTensor2& eps, const MaterialParams& p);

// Undegraded isotropic elasticity matrix in Voigt ordering (plane strain).
VoigtMatrix elasticity_matrix(const MaterialParams& p);

struct Degradation {
    double g;
    double dg;
};
// g(phi) = (1-kappa)(1-phi)^2 + kappa and its derivative.
inline Degradation degradation(double phi, const MaterialParams& p) {
    const double om = 1.0 - phi;
    return {(1.0 - p.kappa) * om * om + p.kappa, -2.0 * (1.0 - p.kappa) * om};
}

// max(H_prev, Psi_+) -- the non-healing history update. Uses total Psi when
// the split is off.
inline double update_history(double h_prev, const SymTensor2& eps, const MaterialParams& p) {
    const double drive = p.use_split ? psi_pm(eps, p).plus : psi_total(eps, p);
    return drive > h_prev ? drive : h_prev;
}

}  // namespace pfrac
