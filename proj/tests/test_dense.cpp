#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "rfeig/dense.hpp"
#include "rfeig/errors.hpp"

using namespace rfeig;

namespace {

DenseMatrix apply_projector(const DenseMatrix& q, const DenseMatrix& x) {
    return matmul(q, matmul(adjoint(q), x));
}

double orthogonality_defect(const DenseMatrix& q) {
    DenseMatrix g = matmul(adjoint(q), q);
    for (std::size_t i = 0; i < g.cols(); ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

}  // namespace

TEST_CASE("orthonormalize identity") {
    const DenseMatrix q = orthonormalize(DenseMatrix::identity(3));
    CHECK(q.cols() == 3);
    CHECK(orthogonality_defect(q) < 1e-13);
    // Columns of the identity up to sign.
    for (std::size_t j = 0; j < 3; ++j) {
        double offdiag = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            if (i != j) offdiag += std::abs(q(i, j));
        CHECK(offdiag < 1e-13);
    }
}

TEST_CASE("orthonormalize rank-1 pair") {
    Rng rng(7);
    DenseMatrix x(6, 2);
    std::vector<Complex> v(6);
    for (auto& z : v) z = rng.complex_gaussian();
    const double nrm = vector_norm(v);
    for (auto& z : v) z /= nrm;
    for (std::size_t i = 0; i < 6; ++i) {
        x(i, 0) = v[i];
        x(i, 1) = 2.0 * v[i];
    }
    const DenseMatrix q = orthonormalize(x);
    CHECK(q.cols() == 1);
    DenseMatrix vm(6, 1);
    vm.set_col(0, v);
    const DenseMatrix pv = apply_projector(q, vm);
    double err = 0.0;
    for (std::size_t i = 0; i < 6; ++i) err += std::abs(pv(i, 0) - v[i]);
    CHECK(err < 1e-12);
}

TEST_CASE("orthonormalize random 20x5 against reorthogonalized Gram-Schmidt") {
    Rng rng(11);
    const DenseMatrix x = oracle::random_matrix(20, 5, rng);
    const DenseMatrix q = orthonormalize(x);
    CHECK(q.cols() == 5);
    CHECK(orthogonality_defect(q) < 1e-13);
    DenseMatrix residual = x;
    const DenseMatrix px = apply_projector(q, x);
    for (std::size_t k = 0; k < residual.data().size(); ++k)
        residual.data()[k] -= px.data()[k];
    CHECK(frobenius_norm(residual) < 1e-12 * frobenius_norm(x));
    // Same column space as the oracle basis.
    const DenseMatrix ref = oracle::gram_schmidt(x);
    CHECK(ref.cols() == 5);
    CHECK(oracle::max_principal_angle(q, ref) < 1e-12);
}

TEST_CASE("orthonormalize rejects all-zero input") {
    DenseMatrix x(4, 3);
    CHECK_THROWS_AS(orthonormalize(x), AllZeroInput);
}

TEST_CASE("orthonormalize is idempotent as a projector builder") {
    Rng rng(23);
    for (int trial = 0; trial < 4; ++trial) {
        DenseMatrix x = oracle::random_matrix(15, 4, rng);
        // Append a dependent column to exercise rank detection.
        DenseMatrix wide(15, 5);
        for (std::size_t j = 0; j < 4; ++j)
            std::copy(x.col(j), x.col(j) + 15, wide.col(j));
        for (std::size_t i = 0; i < 15; ++i)
            wide(i, 4) = 0.5 * x(i, 0) - 1.5 * x(i, 2);
        const DenseMatrix q1 = orthonormalize(wide);
        const DenseMatrix q2 = orthonormalize(q1);
        CHECK(q1.cols() == 4);
        CHECK(q2.cols() == 4);
        CHECK(oracle::max_principal_angle(q1, q2) < 1e-12);
    }
}

TEST_CASE("svd diagonal and zero cases") {
    DenseMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    auto s = svd(d, false);
    REQUIRE(s.singular_values.size() == 2);
    CHECK(s.singular_values[0] == doctest::Approx(3.0));
    CHECK(s.singular_values[1] == doctest::Approx(1.0));

    auto z = svd(DenseMatrix(4, 2), false);
    REQUIRE(z.singular_values.size() == 2);
    CHECK(z.singular_values[0] == 0.0);
    CHECK(z.singular_values[1] == 0.0);
}

TEST_CASE("svd random 10x10 against Hermitian-product Schur oracle") {
    Rng rng(31);
    const DenseMatrix x = oracle::random_matrix(10, 10, rng);
    const auto s = svd(x, true);
    const DenseMatrix gram = matmul(adjoint(x), x);
    auto eig = complex_eig(gram);
    std::vector<double> expected;
    for (const Complex& lambda : eig.eigenvalues)
        expected.push_back(std::sqrt(std::max(0.0, lambda.real())));
    std::sort(expected.rbegin(), expected.rend());
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(std::abs(s.singular_values[i] - expected[i]) <= 1e-10 * expected[0]);

    // Reconstruction with the requested vectors.
    DenseMatrix us = s.left_vectors;
    for (std::size_t j = 0; j < us.cols(); ++j)
        for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= s.singular_values[j];
    DenseMatrix recon = matmul(us, adjoint(s.right_vectors));
    for (std::size_t k = 0; k < recon.data().size(); ++k) recon.data()[k] -= x.data()[k];
    CHECK(frobenius_norm(recon) < 1e-12 * frobenius_norm(x));
}

TEST_CASE("svd handles wide and rank-deficient input") {
    Rng rng(37);
    DenseMatrix tall = oracle::random_matrix(9, 3, rng);
    DenseMatrix wide = adjoint(tall);
    const auto sw = svd(wide, true);
    const auto st = svd(tall, false);
    REQUIRE(sw.singular_values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(sw.singular_values[i] == doctest::Approx(st.singular_values[i]).epsilon(1e-11));
    DenseMatrix us = sw.left_vectors;
    for (std::size_t j = 0; j < us.cols(); ++j)
        for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= sw.singular_values[j];
    DenseMatrix recon = matmul(us, adjoint(sw.right_vectors));
    for (std::size_t k = 0; k < recon.data().size(); ++k) recon.data()[k] -= wide.data()[k];
    CHECK(frobenius_norm(recon) < 1e-12 * frobenius_norm(wide));
}

TEST_CASE("svd singular values invariant under unitary factors") {
    Rng rng(41);
    const DenseMatrix x = oracle::random_matrix(8, 6, rng);
    const DenseMatrix u = orthonormalize(oracle::random_matrix(8, 8, rng));
    const auto s1 = svd(x, false);
    const auto s2 = svd(matmul(u, x), false);
    for (std::size_t i = 0; i < s1.singular_values.size(); ++i)
        CHECK(std::abs(s1.singular_values[i] - s2.singular_values[i]) <=
              1e-11 * s1.singular_values[0]);
}

TEST_CASE("complex_eig trivial spectra") {
    DenseMatrix d(2, 2);
    d(0, 0) = Complex(1.0, 2.0);
    d(1, 1) = Complex(-3.0, 0.0);
    auto r = complex_eig(d);
    CHECK(oracle::spectrum_distance(r.eigenvalues, {Complex(1.0, 2.0), Complex(-3.0, 0.0)}) <
          1e-13);

    DenseMatrix rot(2, 2);
    rot(0, 1) = 1.0;
    rot(1, 0) = -1.0;
    auto rr = complex_eig(rot);
    CHECK(oracle::spectrum_distance(rr.eigenvalues, {Complex(0.0, 1.0), Complex(0.0, -1.0)}) <
          1e-13);
}

TEST_CASE("complex_eig random 12x12 against characteristic polynomial oracle") {
    Rng rng(53);
    const DenseMatrix a = oracle::random_matrix(12, 12, rng);
    const auto r = complex_eig(a);
    const auto coeff = oracle::char_poly(a);
    const auto roots = oracle::poly_roots(coeff);
    CHECK(oracle::spectrum_distance(r.eigenvalues, roots) < 1e-8);

    // Schur factorization residual: A Q = Q T.
    const DenseMatrix lhs = matmul(a, r.unitary_factor);
    const DenseMatrix rhs = matmul(r.unitary_factor, r.triangular_factor);
    double err = 0.0;
    for (std::size_t k = 0; k < lhs.data().size(); ++k)
        err = std::max(err, std::abs(lhs.data()[k] - rhs.data()[k]));
    CHECK(err < 1e-11 * frobenius_norm(a));
}

TEST_CASE("complex_eig eigenvectors satisfy the residual bound") {
    Rng rng(59);
    const DenseMatrix a = oracle::random_matrix(10, 10, rng);
    const auto r = complex_eig(a);
    const DenseMatrix vecs = right_eigenvectors(r);
    const double anorm = frobenius_norm(a);
    for (std::size_t j = 0; j < 10; ++j) {
        std::vector<Complex> av(10, Complex(0.0, 0.0));
        for (std::size_t l = 0; l < 10; ++l)
            for (std::size_t i = 0; i < 10; ++i) av[i] += a(i, l) * vecs(l, j);
        for (std::size_t i = 0; i < 10; ++i) av[i] -= r.eigenvalues[j] * vecs(i, j);
        CHECK(vector_norm(av) < 1e-10 * anorm);
    }
}

TEST_CASE("complex_eig spectrum is similarity invariant") {
    Rng rng(61);
    const DenseMatrix a = oracle::random_matrix(9, 9, rng);
    DenseMatrix p = oracle::random_matrix(9, 9, rng);
    for (std::size_t i = 0; i < 9; ++i) p(i, i) += 4.0;  // keep P well conditioned
    const DenseMatrix similar = matmul(p, matmul(a, oracle::naive_inverse(p)));
    const auto ra = complex_eig(a);
    const auto rs = complex_eig(similar);
    CHECK(oracle::spectrum_distance(ra.eigenvalues, rs.eigenvalues) < 1e-8);
}

TEST_CASE("dense_solve basics and residual check") {
    DenseMatrix b(3, 2);
    b(0, 0) = Complex(1.0, 1.0);
    b(1, 1) = 2.0;
    b(2, 0) = -3.0;
    const DenseMatrix x1 = dense_solve(DenseMatrix::identity(3), b);
    for (std::size_t k = 0; k < b.data().size(); ++k) CHECK(x1.data()[k] == b.data()[k]);

    DenseMatrix two = DenseMatrix::identity(3);
    for (std::size_t i = 0; i < 3; ++i) two(i, i) = 2.0;
    const DenseMatrix x2 = dense_solve(two, DenseMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(x2(i, i) - 0.5) < 1e-15);

    Rng rng(67);
    DenseMatrix a = oracle::random_matrix(8, 8, rng);
    for (std::size_t i = 0; i < 8; ++i) a(i, i) += 5.0;
    const DenseMatrix rhs = oracle::random_matrix(8, 3, rng);
    const DenseMatrix x = dense_solve(a, rhs);
    DenseMatrix res = matmul(a, x);
    for (std::size_t k = 0; k < res.data().size(); ++k) res.data()[k] -= rhs.data()[k];
    CHECK(frobenius_norm(res) < 1e-11 * frobenius_norm(rhs));
}

TEST_CASE("dense_solve reports the failing pivot") {
    DenseMatrix a(3, 3);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;  // rows 0,1 dependent; column 2 empty
    CHECK_THROWS_AS(dense_solve(a, DenseMatrix::identity(3)), SingularMatrix);
}
