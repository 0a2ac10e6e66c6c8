// Minimal sparse/dense linear algebra: CSR matrices, a Jacobi-preconditioned
// conjugate-gradient solver for SPD systems, and a Householder-QR least-squares
// solver with condition-monitored column dropping.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfrac {

using Vector = std::vector<double>;

// Compressed sparse row matrix. Column indices within each row are strictly
// increasing; row_offsets has length n_rows+1.
struct CsrMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::size_t> row_offsets;
    std::vector<std::size_t> col_indices;
    std::vector<double> values;

    // y = A*x
    void multiply(const Vector& x, Vector& y) const;
    Vector multiply(const Vector& x) const;
    Vector diagonal() const;
    double nnz() const { return static_cast<double>(values.size()); }
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

struct DenseMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    Vector values;  // row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : n_rows(r), n_cols(c), values(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return values[i * n_cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * n_cols + j]; }
};

struct LinalgError : std::runtime_error {
    explicit LinalgError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failure; carries the last relative residual reached.
struct SolverFailure : std::runtime_error {
    SolverFailure(const std::string& what, double residual)
        : std::runtime_error(what), final_residual(residual) {}
    double final_residual;
};

// Builds a CSR matrix from (row, col, value) triplets; duplicates are summed.
// Throws LinalgError on out-of-range indices.
CsrMatrix csr_from_triplets(std::vector<Triplet> triplets, std::size_t n_rows,
                            std::size_t n_cols);

// Solves A x = b for symmetric positive definite A by conjugate gradients with
// Jacobi preconditioning. Terminates when ||Ax-b||_2 <= rel_tol*||b||_2;
// iteration cap is 10*n. Throws SolverFailure on non-convergence.
Vector solve_spd(const CsrMatrix& A, const Vector& b, double rel_tol = 1e-12);

struct LstsqResult {
    Vector x;
    bool rank_deficient = false;            // true iff every column was dropped
    std::vector<std::size_t> dropped_columns;
};

// Least-squares min ||A x - b||_2 via Householder QR (n_rows >= n_cols).
// Columns whose inclusion pushes the estimated condition number (ratio of
// largest to smallest |R_kk|) above cond_limit are dropped; their coefficients
// are set to zero.
LstsqResult solve_dense_lstsq(const DenseMatrix& A, const Vector& b,
                              double cond_limit = 1e10);

// Small dense-vector helpers shared across modules.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

}  // namespace pfrac
