#include "pfrac/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pfrac {

void CsrMatrix::multiply(const Vector& x, Vector& y) const {
    y.assign(n_rows, 0.0);
    for (std::size_t i = 0; i < n_rows; ++i) {
        double acc = 0.0;
        for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
            acc += values[k] * x[col_indices[k]];
        y[i] = acc;
    }
}

Vector CsrMatrix::multiply(const Vector& x) const {
    Vector y;
    multiply(x, y);
    return y;
}

Vector CsrMatrix::diagonal() const {
    Vector d(n_rows, 0.0);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
            if (col_indices[k] == i) d[i] = values[k];
    return d;
}

CsrMatrix csr_from_triplets(std::vector<Triplet> triplets, std::size_t n_rows,
                            std::size_t n_cols) {
    for (const Triplet& t : triplets)
        if (t.row >= n_rows || t.col >= n_cols)
            throw LinalgError("csr_from_triplets: index (" + std::to_string(t.row) + "," +
                              std::to_string(t.col) + ") out of range");

    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix A;
    A.n_rows = n_rows;
    A.n_cols = n_cols;
    A.row_offsets.assign(n_rows + 1, 0);

    // Accumulate duplicates in sorted order, then fill offsets.
    for (std::size_t k = 0; k < triplets.size();) {
        std::size_t r = triplets[k].row, c = triplets[k].col;
        double v = 0.0;
        while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c)
            v += triplets[k++].value;
        A.col_indices.push_back(c);
        A.values.push_back(v);
        ++A.row_offsets[r + 1];
    }
    for (std::size_t i = 0; i < n_rows; ++i) A.row_offsets[i + 1] += A.row_offsets[i];
    return A;
}

Vector solve_spd(const CsrMatrix& A, const Vector& b, double rel_tol) {
    if (A.n_rows != A.n_cols) throw LinalgError("solve_spd: matrix not square");
    if (b.size() != A.n_rows) throw LinalgError("solve_spd: rhs size mismatch");
    if (rel_tol <= 0.0) throw LinalgError("solve_spd: rel_tol must be positive");

    const std::size_t n = A.n_rows;
    const double bnorm = norm2(b);
    Vector x(n, 0.0);
    if (bnorm == 0.0) return x;

    Vector inv_diag = A.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        if (inv_diag[i] <= 0.0)
            throw LinalgError("solve_spd: non-positive diagonal entry at row " + std::to_string(i));
        inv_diag[i] = 1.0 / inv_diag[i];
    }

    Vector r = b;  // r = b - A*0
    Vector z(n), p(n), Ap(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    const std::size_t max_iter = 10 * n;
    double rnorm = norm2(r);

    for (std::size_t it = 0; it < max_iter; ++it) {
        if (rnorm <= rel_tol * bnorm) {
            // Guard against recurrence drift: accept only on the true residual,
            // otherwise restart the recurrence from it.
            A.multiply(x, Ap);
            for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
            rnorm = norm2(r);
            if (rnorm <= rel_tol * bnorm) return x;
            for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            p = z;
            rz = dot(r, z);
        }
        A.multiply(p, Ap);
        const double pAp = dot(p, Ap);
        if (pAp <= 0.0)
            throw SolverFailure("solve_spd: matrix not positive definite (p'Ap <= 0)",
                                rnorm / bnorm);
        const double alpha = rz / pAp;
        axpy(alpha, p, x);
        axpy(-alpha, Ap, r);
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rnorm = norm2(r);
    }
    if (rnorm <= rel_tol * bnorm) return x;
    throw SolverFailure("solve_spd: no convergence within iteration cap", rnorm / bnorm);
}

LstsqResult solve_dense_lstsq(const DenseMatrix& A, const Vector& b, double cond_limit) {
    const std::size_t m = A.n_rows, n = A.n_cols;
    if (m < n) throw LinalgError("solve_dense_lstsq: system is underdetermined");
    if (b.size() != m) throw LinalgError("solve_dense_lstsq: rhs size mismatch");

    // Working copies; W is updated in place by the accepted reflectors.
    DenseMatrix W = A;
    Vector rhs = b;

    LstsqResult res;
    res.x.assign(n, 0.0);

    std::vector<std::size_t> kept;           // original column index per accepted column
    std::vector<Vector> reflectors;          // Householder vectors, one per accepted column
    Vector rdiag;                            // diagonal of R for accepted columns
    double max_diag = 0.0, min_diag = 0.0;

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = kept.size();  // next pivot row

        // Candidate column norm below the pivot row after prior reflectors.
        double colnorm = 0.0;
        for (std::size_t i = k; i < m; ++i) colnorm += W(i, j) * W(i, j);
        colnorm = std::sqrt(colnorm);

        const bool degenerate =
            colnorm == 0.0 ||
            (k > 0 && std::max(max_diag, colnorm) > cond_limit * std::min(min_diag, colnorm));
        if (degenerate) {
            res.dropped_columns.push_back(j);
            continue;
        }

        // Householder reflector for rows k..m-1 of column j.
        Vector v(m - k, 0.0);
        for (std::size_t i = k; i < m; ++i) v[i - k] = W(i, j);
        const double alpha = v[0] >= 0.0 ? -colnorm : colnorm;
        v[0] -= alpha;
        const double vnorm2 = dot(v, v);

        // Apply to the remaining (not yet processed) columns and the rhs.
        if (vnorm2 > 0.0) {
            for (std::size_t jj = j + 1; jj < n; ++jj) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) s += v[i - k] * W(i, jj);
                s *= 2.0 / vnorm2;
                for (std::size_t i = k; i < m; ++i) W(i, jj) -= s * v[i - k];
            }
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += v[i - k] * rhs[i];
            s *= 2.0 / vnorm2;
            for (std::size_t i = k; i < m; ++i) rhs[i] -= s * v[i - k];
        }
        W(k, j) = alpha;

        kept.push_back(j);
        reflectors.push_back(std::move(v));
        rdiag.push_back(std::abs(alpha));
        max_diag = k == 0 ? rdiag[0] : std::max(max_diag, rdiag[k]);
        min_diag = k == 0 ? rdiag[0] : std::min(min_diag, rdiag[k]);
    }

    if (kept.empty()) {
        res.rank_deficient = true;
        return res;
    }

    // Back substitution on the accepted triangular factor. R(k, l) lives in
    // W(k, kept[l]) for l >= k.
    const std::size_t r = kept.size();
    Vector y(r, 0.0);
    for (std::size_t k = r; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t l = k + 1; l < r; ++l) s -= W(k, kept[l]) * y[l];
        y[k] = s / W(k, kept[k]);
    }
    for (std::size_t l = 0; l < r; ++l) res.x[kept[l]] = y[l];
    return res;
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace pfrac
