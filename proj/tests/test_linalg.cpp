#include "pfrac/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pfrac;

namespace {

DenseMatrix to_dense(const CsrMatrix& A) {
    DenseMatrix d(A.n_rows, A.n_cols);
    for (std::size_t i = 0; i < A.n_rows; ++i)
        for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            d(i, A.col_indices[k]) += A.values[k];
    return d;
}

CsrMatrix csr_from_dense(const DenseMatrix& d) {
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < d.n_rows; ++i)
        for (std::size_t j = 0; j < d.n_cols; ++j)
            if (d(i, j) != 0.0) trips.push_back({i, j, d(i, j)});
    return csr_from_triplets(std::move(trips), d.n_rows, d.n_cols);
}

double lstsq_residual(const DenseMatrix& A, const Vector& x, const Vector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < A.n_rows; ++i) {
        double r = -b[i];
        for (std::size_t j = 0; j < A.n_cols; ++j) r += A(i, j) * x[j];
        acc += r * r;
    }
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("csr_from_triplets sums duplicates") {
    const CsrMatrix A = csr_from_triplets({{0, 0, 1.0}, {0, 0, 2.0}}, 1, 1);
    REQUIRE(A.values.size() == 1);
    CHECK(A.values[0] == 3.0);
}

TEST_CASE("csr_from_triplets empty matrix") {
    const CsrMatrix A = csr_from_triplets({}, 2, 2);
    CHECK(A.values.empty());
    CHECK(A.row_offsets == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("csr_from_triplets places entries") {
    const CsrMatrix A = csr_from_triplets({{1, 0, 5.0}, {0, 1, 7.0}}, 2, 2);
    const DenseMatrix d = to_dense(A);
    CHECK(d(1, 0) == 5.0);
    CHECK(d(0, 1) == 7.0);
    CHECK(d(0, 0) == 0.0);
}

TEST_CASE("csr_from_triplets rejects out-of-range indices") {
    CHECK_THROWS_AS(csr_from_triplets({{2, 0, 1.0}}, 2, 2), LinalgError);
    CHECK_THROWS_AS(csr_from_triplets({{0, 5, 1.0}}, 2, 2), LinalgError);
}

TEST_CASE("csr invariants hold after construction") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> idx(0, 9);
    std::uniform_int_distribution<int> val(-5, 5);
    std::vector<Triplet> trips;
    for (int k = 0; k < 200; ++k)
        trips.push_back({static_cast<std::size_t>(idx(rng)), static_cast<std::size_t>(idx(rng)),
                         static_cast<double>(val(rng))});
    const CsrMatrix A = csr_from_triplets(trips, 10, 10);

    REQUIRE(A.row_offsets.size() == 11);
    CHECK(A.row_offsets.back() == A.values.size());
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(A.row_offsets[i] <= A.row_offsets[i + 1]);
        for (std::size_t k = A.row_offsets[i] + 1; k < A.row_offsets[i + 1]; ++k)
            CHECK(A.col_indices[k - 1] < A.col_indices[k]);
    }

    // Integer values make the triplet-sum reconstruction exact.
    DenseMatrix expected(10, 10);
    for (const auto& t : trips) expected(t.row, t.col) += t.value;
    const DenseMatrix got = to_dense(A);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) CHECK(got(i, j) == expected(i, j));
}

TEST_CASE("solve_spd identity and diagonal") {
    const CsrMatrix I3 = csr_from_triplets({{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}, 3, 3);
    const Vector x = solve_spd(I3, {1.0, 2.0, 3.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-12));

    const CsrMatrix D = csr_from_triplets({{0, 0, 2.0}, {1, 1, 4.0}}, 2, 2);
    const Vector y = solve_spd(D, {2.0, 4.0});
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve_spd hand-eliminated 2x2") {
    // [[4,1],[1,3]] x = (1,2): det = 11, x = (1/11, 7/11) by hand elimination.
    const CsrMatrix A = csr_from_triplets({{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}, 2, 2);
    const Vector x = solve_spd(A, {1.0, 2.0});
    CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-10));
}

TEST_CASE("solve_spd zero rhs returns zero") {
    const CsrMatrix D = csr_from_triplets({{0, 0, 2.0}, {1, 1, 4.0}}, 2, 2);
    const Vector x = solve_spd(D, {0.0, 0.0});
    CHECK(x == Vector{0.0, 0.0});
}

TEST_CASE("solve_spd meets the residual contract on random SPD systems") {
    std::mt19937 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = 20;

    DenseMatrix M(n, n);
    for (auto& v : M.values) v = gauss(rng);
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = i == j ? 1.0 : 0.0;  // M^T M + I
            for (std::size_t k = 0; k < n; ++k) s += M(k, i) * M(k, j);
            A(i, j) = s;
        }
    const CsrMatrix As = csr_from_dense(A);

    const double rel_tol = 1e-12;
    for (int trial = 0; trial < 100; ++trial) {
        Vector b(n);
        for (auto& v : b) v = gauss(rng);
        const Vector x = solve_spd(As, b, rel_tol);
        Vector r = As.multiply(x);
        for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
        CHECK(norm2(r) <= rel_tol * norm2(b));
    }
}

TEST_CASE("lstsq single column gives the mean") {
    DenseMatrix A(2, 1);
    A(0, 0) = 1.0;
    A(1, 0) = 1.0;
    const LstsqResult r = solve_dense_lstsq(A, {1.0, 3.0});
    REQUIRE(!r.rank_deficient);
    CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lstsq identity") {
    DenseMatrix A(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 1.0;
    const LstsqResult r = solve_dense_lstsq(A, {4.0, 5.0});
    CHECK(r.x[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(r.x[1] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r.dropped_columns.empty());
}

TEST_CASE("lstsq drops a near-collinear column") {
    DenseMatrix A(3, 2);
    A(0, 0) = 1.0; A(0, 1) = 1.0;
    A(1, 0) = 1.0; A(1, 1) = 1.0 + 1e-15;
    A(2, 0) = 1.0; A(2, 1) = 1.0;

    // Condition estimate via explicit normal equations: A^T A is singular to
    // machine precision, so the pair must trip any threshold near 1e10.
    double ata[2][2] = {};
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) ata[a][b] += A(i, a) * A(i, b);
    const double det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
    const double cond_estimate = (ata[0][0] + ata[1][1]) * (ata[0][0] + ata[1][1]) / std::abs(det);
    CHECK(cond_estimate > 1e12);  // far beyond the 1e10 drop threshold

    std::mt19937 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector b(3);
    for (auto& v : b) v = gauss(rng);

    const LstsqResult r = solve_dense_lstsq(A, b);
    REQUIRE(r.dropped_columns == std::vector<std::size_t>{1});
    CHECK(r.x[1] == 0.0);
    // Remaining fit is the single-column least squares (a'b / a'a).
    const double expect = (b[0] + b[1] + b[2]) / 3.0;
    CHECK(r.x[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("lstsq returns zero vector with flag when everything is dropped") {
    DenseMatrix A(3, 2);  // all-zero columns
    const LstsqResult r = solve_dense_lstsq(A, {1.0, 2.0, 3.0});
    CHECK(r.rank_deficient);
    CHECK(r.x == Vector{0.0, 0.0});
    CHECK(r.dropped_columns.size() == 2);
}

TEST_CASE("lstsq solution is locally optimal") {
    std::mt19937 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DenseMatrix A(10, 3);
    for (auto& v : A.values) v = gauss(rng);
    Vector b(10);
    for (auto& v : b) v = gauss(rng);

    const LstsqResult r = solve_dense_lstsq(A, b);
    const double base = lstsq_residual(A, r.x, b);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    for (int trial = 0; trial < 1000; ++trial) {
        Vector xp = r.x;
        for (auto& v : xp) v += unif(rng);
        CHECK(lstsq_residual(A, xp, b) >= base - 1e-12 * (1.0 + base));
    }
}

TEST_CASE("lstsq rejects underdetermined systems") {
    DenseMatrix A(2, 3);
    CHECK_THROWS_AS(solve_dense_lstsq(A, {1.0, 2.0}), LinalgError);
}
