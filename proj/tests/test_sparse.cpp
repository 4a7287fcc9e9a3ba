#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rfeig/errors.hpp"
#include "rfeig/sparse.hpp"

using namespace rfeig;

namespace {

SparseMatrix random_sparse(std::size_t n, double density, Rng& rng, double diag_boost = 0.0) {
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform() < density) t.push_back({i, j, rng.complex_gaussian()});
    if (diag_boost != 0.0)
        for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, Complex(diag_boost, 0.0)});
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("matrix market trivial diagonal read") {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 2\n"
        "1 1 1.0\n"
        "2 2 2.0\n");
    const SparseMatrix a = read_matrix_market(in);
    CHECK(a.rows() == 2);
    CHECK(a.nnz() == 2);
    const DenseMatrix d = a.to_dense();
    CHECK(d(0, 0) == Complex(1.0, 0.0));
    CHECK(d(1, 1) == Complex(2.0, 0.0));
    CHECK(d(0, 1) == Complex(0.0, 0.0));
}

TEST_CASE("symmetric banner expands the lower triangle") {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "3 3 4\n"
        "1 1 2.0\n"
        "2 1 -1.0\n"
        "3 2 -1.0\n"
        "3 3 2.0\n");
    const SparseMatrix a = read_matrix_market(in);
    const SparseMatrix at = transpose(a);
    CHECK(a.same_entries(at));
    CHECK(a.to_dense()(0, 1) == Complex(-1.0, 0.0));
}

TEST_CASE("hermitian, skew and pattern banners") {
    std::istringstream herm(
        "%%MatrixMarket matrix coordinate complex hermitian\n"
        "2 2 2\n"
        "1 1 1.0 0.0\n"
        "2 1 2.0 3.0\n");
    const DenseMatrix h = read_matrix_market(herm).to_dense();
    CHECK(h(0, 1) == Complex(2.0, -3.0));

    std::istringstream skew(
        "%%MatrixMarket matrix coordinate real skew-symmetric\n"
        "2 2 1\n"
        "2 1 5.0\n");
    const DenseMatrix k = read_matrix_market(skew).to_dense();
    CHECK(k(0, 1) == Complex(-5.0, 0.0));

    std::istringstream pat(
        "%%MatrixMarket matrix coordinate pattern general\n"
        "2 2 2\n"
        "1 2\n"
        "2 1\n");
    const DenseMatrix p = read_matrix_market(pat).to_dense();
    CHECK(p(0, 1) == Complex(1.0, 0.0));
    CHECK(p(1, 0) == Complex(1.0, 0.0));
}

TEST_CASE("complex general round-trip preserves full precision") {
    Rng rng(101);
    const SparseMatrix a = random_sparse(12, 0.3, rng);
    std::ostringstream out;
    write_matrix_market(a, out);
    std::istringstream in(out.str());
    const SparseMatrix b = read_matrix_market(in);
    CHECK(a.same_entries(b));
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream bad(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 1\n"
        "3 1 1.0\n");
    try {
        read_matrix_market(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }

    std::istringstream arr("%%MatrixMarket matrix array real general\n");
    CHECK_THROWS_AS(read_matrix_market(arr), UnsupportedFormat);
}

TEST_CASE("duplicate coordinates are summed") {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 3\n"
        "1 1 1.5\n"
        "1 1 2.5\n"
        "2 2 1.0\n");
    const SparseMatrix a = read_matrix_market(in);
    CHECK(a.nnz() == 2);
    CHECK(a.to_dense()(0, 0) == Complex(4.0, 0.0));
}

TEST_CASE("spmv identity, zero, and dense comparison") {
    Rng rng(103);
    std::vector<Complex> x(50);
    for (auto& z : x) z = rng.complex_gaussian();

    const auto y1 = spmv(SparseMatrix::identity(50), x);
    for (std::size_t i = 0; i < 50; ++i) CHECK(y1[i] == x[i]);

    const auto y0 = spmv(SparseMatrix(50, 50), x);
    for (const auto& z : y0) CHECK(z == Complex(0.0, 0.0));

    const SparseMatrix a = random_sparse(50, 0.1, rng);
    const auto y = spmv(a, x);
    const DenseMatrix ad = a.to_dense();
    std::vector<Complex> ref(50, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < 50; ++j)
        for (std::size_t i = 0; i < 50; ++i) ref[i] += ad(i, j) * x[j];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        num += std::norm(y[i] - ref[i]);
        den += std::norm(ref[i]);
    }
    CHECK(std::sqrt(num) <= 1e-13 * std::sqrt(den));
}

TEST_CASE("permute_symmetric identity, swap, and spectrum preservation") {
    Rng rng(107);
    const SparseMatrix diag = SparseMatrix::from_triplets(
        2, 2, {{0, 0, Complex(1.0, 0.0)}, {1, 1, Complex(2.0, 0.0)}});
    CHECK(permute_symmetric(diag, Permutation::identity(2)).same_entries(diag));

    const Permutation swap(std::vector<std::size_t>{1, 0});
    const DenseMatrix swapped = permute_symmetric(diag, swap).to_dense();
    CHECK(swapped(0, 0) == Complex(2.0, 0.0));
    CHECK(swapped(1, 1) == Complex(1.0, 0.0));

    const std::size_t n = 20;
    const SparseMatrix a = random_sparse(n, 0.2, rng, 1.0);
    std::vector<std::size_t> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = i;
    for (std::size_t i = n; i-- > 1;) std::swap(f[i], f[rng.index(i + 1)]);
    const Permutation p(f);
    const auto eig_a = complex_eig(a.to_dense());
    const auto eig_p = complex_eig(permute_symmetric(a, p).to_dense());
    CHECK(oracle::spectrum_distance(eig_a.eigenvalues, eig_p.eigenvalues) < 1e-9);
}

TEST_CASE("permutations compose bit-exactly") {
    Rng rng(109);
    const std::size_t n = 15;
    const SparseMatrix a = random_sparse(n, 0.25, rng);
    auto shuffle = [&]() {
        std::vector<std::size_t> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = i;
        for (std::size_t i = n; i-- > 1;) std::swap(f[i], f[rng.index(i + 1)]);
        return Permutation(f);
    };
    const Permutation p = shuffle();
    const Permutation q = shuffle();
    const SparseMatrix two_step = permute_symmetric(permute_symmetric(a, p), q);
    const SparseMatrix one_step = permute_symmetric(a, q.compose_after(p));
    CHECK(two_step.same_entries(one_step));
}

TEST_CASE("extract_blocks structure and reassembly") {
    Rng rng(113);

    // Block-diagonal input: off blocks empty.
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < 4; ++i) t.push_back({i, i, Complex(double(i + 1), 0.0)});
    const SparsePencil diag_pencil(SparseMatrix::from_triplets(4, 4, t), SparseMatrix::identity(4));
    const PencilBlocks pb = extract_blocks(diag_pencil, 2);
    CHECK(pb.f.nnz() == 0);
    CHECK(pb.e.nnz() == 0);
    CHECK(pb.b.rows() == 2);
    CHECK(pb.c.rows() == 2);

    // Boundary split d = n-1 gives a 1x1 corner.
    const PencilBlocks corner = extract_blocks(diag_pencil, 3);
    CHECK(corner.c.rows() == 1);
    CHECK(corner.c.cols() == 1);

    // Reassembly is exact on stored entries.
    for (int trial = 0; trial < 3; ++trial) {
        const std::size_t n = 17;
        const SparsePencil pencil(random_sparse(n, 0.2, rng), random_sparse(n, 0.15, rng));
        const std::size_t d = 1 + rng.index(n - 1);
        const SparsePencil back = assemble_blocks(extract_blocks(pencil, d));
        CHECK(back.a.same_entries(pencil.a));
        CHECK(back.m.same_entries(pencil.m));
    }
}

TEST_CASE("sparse_multiply and sparse_add match dense arithmetic") {
    Rng rng(127);
    const SparseMatrix a = random_sparse(14, 0.25, rng);
    const SparseMatrix b = random_sparse(14, 0.25, rng);
    const DenseMatrix ref = matmul(a.to_dense(), b.to_dense());
    const DenseMatrix got = sparse_multiply(a, b).to_dense();
    double err = 0.0;
    for (std::size_t k = 0; k < ref.data().size(); ++k)
        err = std::max(err, std::abs(ref.data()[k] - got.data()[k]));
    CHECK(err < 1e-13 * (1.0 + frobenius_norm(ref)));

    const Complex shift(0.3, -1.2);
    const DenseMatrix sum_ref_a = a.to_dense();
    const DenseMatrix sum_ref_b = b.to_dense();
    const DenseMatrix sum_got = sparse_add(a, shift, b).to_dense();
    for (std::size_t k = 0; k < sum_got.data().size(); ++k)
        CHECK(std::abs(sum_got.data()[k] - (sum_ref_a.data()[k] + shift * sum_ref_b.data()[k])) <
              1e-14);
}
