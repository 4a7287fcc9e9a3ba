#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rfeig/errors.hpp"
#include "rfeig/resolvent.hpp"
#include "rfeig/synth.hpp"

using namespace rfeig;

namespace {

const Disk kUnit{Complex(0.0, 0.0), 1.0};

DenseMatrix dense_filter_matrix(const SparsePencil& pencil, const QuadratureRule& rule) {
    const std::size_t n = pencil.n;
    const DenseMatrix a = pencil.a.to_dense();
    const DenseMatrix m = pencil.m.to_dense();
    DenseMatrix acc(n, n);
    for (std::size_t j = 0; j < rule.order; ++j) {
        DenseMatrix shifted = a;
        for (std::size_t k = 0; k < shifted.data().size(); ++k)
            shifted.data()[k] -= rule.poles[j] * m.data()[k];
        const DenseMatrix term = matmul(oracle::naive_inverse(shifted), m);
        for (std::size_t k = 0; k < acc.data().size(); ++k)
            acc.data()[k] += rule.weights[j] * term.data()[k];
    }
    return acc;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    return worst;
}

SparsePencil diag_pencil(std::vector<double> values) {
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < values.size(); ++i)
        t.push_back({i, i, Complex(values[i], 0.0)});
    const std::size_t n = values.size();
    return SparsePencil(SparseMatrix::from_triplets(n, n, std::move(t)),
                        SparseMatrix::identity(n));
}

}  // namespace

TEST_CASE("full cache on a diagonal pencil filters eigenvectors by rho") {
    const SparsePencil pencil = diag_pencil({0.5, 3.0});
    const auto rule = trapezoidal_rule(kUnit, 4);
    FullResolventCache cache = build_full_cache(pencil, rule);

    DenseMatrix e1(2, 1);
    e1(0, 0) = 1.0;
    const DenseMatrix filtered = cache.apply(e1);
    const Complex expected = rho_eval(cache.rule(), Complex(0.5, 0.0));
    CHECK(std::abs(filtered(0, 0) - expected) < 1e-12);
    CHECK(std::abs(filtered(1, 0)) < 1e-14);
}

TEST_CASE("pole collision is evaded by rotation, persistent singularity surfaces") {
    // Eigenvalue exactly on a midpoint pole of the unit circle.
    const auto rule = trapezoidal_rule(kUnit, 4);
    const Complex pole0 = rule.poles[0];
    std::vector<SparseMatrix::Triplet> t{{0, 0, pole0}, {1, 1, Complex(5.0, 0.0)}};
    const SparsePencil on_pole(SparseMatrix::from_triplets(2, 2, std::move(t)),
                               SparseMatrix::identity(2));
    const FullResolventCache cache = build_full_cache(on_pole, rule);
    // The cache carries a rotated rule with every pole clear of the spectrum.
    for (const Complex& pole : cache.rule().poles)
        CHECK(std::abs(pole - pole0) > 1e-6);

    // A pencil singular for every shift cannot be evaded.
    std::vector<SparseMatrix::Triplet> ts{{0, 0, Complex(1.0, 0.0)}};
    SparseMatrix a_sing = SparseMatrix::from_triplets(2, 2, std::move(ts));
    std::vector<SparseMatrix::Triplet> tm{{0, 0, Complex(1.0, 0.0)}};
    SparseMatrix m_sing = SparseMatrix::from_triplets(2, 2, std::move(tm));
    const SparsePencil singular(a_sing, m_sing);
    CHECK_THROWS_AS(build_full_cache(singular, rule), PoleOnSpectrum);
}

TEST_CASE("apply_filter matches the densely computed filtered operator") {
    Rng rng(501);
    SynthOptions options;
    options.n = 30;
    options.inside_count = 4;
    options.outside_rings = {{26, 2.0, 6.0}};
    options.seed = 77;
    const SynthPencil synth = make_planted_pencil(options);
    const auto rule = trapezoidal_rule(kUnit, 8);
    FullResolventCache cache = build_full_cache(synth.pencil, rule);

    const DenseMatrix zero(30, 2);
    CHECK(frobenius_norm(cache.apply(zero)) == 0.0);

    const DenseMatrix r = oracle::random_matrix(30, 3, rng);
    const DenseMatrix got = cache.apply(r);
    const DenseMatrix expected = matmul(dense_filter_matrix(synth.pencil, cache.rule()), r);
    CHECK(max_abs_diff(got, expected) < 1e-10 * (1.0 + frobenius_norm(expected)));
}

TEST_CASE("filter maps planted eigenvectors to rho(lambda) times themselves") {
    SynthOptions options;
    options.n = 40;
    options.inside_count = 5;
    options.outside_rings = {{35, 3.0, 9.0}};
    options.seed = 19;
    const SynthPencil synth = make_planted_pencil(options);
    const auto rule = trapezoidal_rule(kUnit, 16);
    FullResolventCache cache = build_full_cache(synth.pencil, rule);

    DenseMatrix vecs(40, synth.eigenvalues.size());
    for (std::size_t i = 0; i < synth.eigenvalues.size(); ++i)
        for (std::size_t r = 0; r < 40; ++r) vecs(r, i) = synth.eigenvectors(r, i);
    const DenseMatrix filtered = cache.apply(vecs);
    for (std::size_t i = 0; i < synth.eigenvalues.size(); ++i) {
        const Complex rho = rho_eval(cache.rule(), synth.eigenvalues[i]);
        double err = 0.0;
        for (std::size_t r = 0; r < 40; ++r)
            err = std::max(err, std::abs(filtered(r, i) - rho * synth.eigenvectors(r, i)));
        CHECK(err < 1e-9);
    }
}

TEST_CASE("exact projector limit improves as N doubles") {
    SynthOptions options;
    options.n = 30;
    options.inside_count = 4;
    options.outside_rings = {{26, 4.0, 10.0}};
    options.seed = 13;
    const SynthPencil synth = make_planted_pencil(options);

    double previous = 1e300;
    for (std::size_t n_poles : {8, 16, 32}) {
        FullResolventCache cache =
            build_full_cache(synth.pencil, trapezoidal_rule(kUnit, n_poles));
        double worst = 0.0;
        for (std::size_t i : synth.inside_indices) {
            DenseMatrix x(30, 1);
            for (std::size_t r = 0; r < 30; ++r) x(r, 0) = synth.eigenvectors(r, i);
            const DenseMatrix fx = cache.apply(x);
            double err = 0.0;
            for (std::size_t r = 0; r < 30; ++r)
                err = std::max(err, std::abs(fx(r, 0) - x(r, 0)));
            worst = std::max(worst, err);
        }
        CHECK(worst < previous);
        previous = worst;
    }
}

TEST_CASE("schur cache with decoupled blocks reduces to C(zeta)") {
    // Block-diagonal pencil: F = E = 0.
    SynthOptions options;
    options.n = 24;
    options.inside_count = 3;
    options.outside_rings = {{21, 2.0, 5.0}};
    options.seed = 5;
    const SynthPencil synth = make_planted_pencil(options);
    // Zero out couplings between the leading 14 and trailing 10 indices.
    std::vector<SparseMatrix::Triplet> ta, tm;
    const DenseMatrix da = synth.pencil.a.to_dense();
    for (std::size_t j = 0; j < 24; ++j)
        for (std::size_t i = 0; i < 24; ++i) {
            const bool cross = (i < 14) != (j < 14);
            if (!cross && da(i, j) != Complex(0.0, 0.0)) ta.push_back({i, j, da(i, j)});
        }
    const SparsePencil decoupled(SparseMatrix::from_triplets(24, 24, std::move(ta)),
                                 SparseMatrix::identity(24));
    const PartitionedPencil part = wrap_partitioned(decoupled, {14});
    CHECK(part.blocks.f.nnz() == 0);
    CHECK(part.blocks.e.nnz() == 0);

    const auto rule = trapezoidal_rule(kUnit, 4);
    SchurCache cache = build_schur_cache(part, rule);
    Rng rng(503);
    const DenseMatrix r = oracle::random_matrix(10, 2, rng);
    // S = C here, so the interface solve equals a direct C(zeta) solve.
    for (std::size_t j = 0; j < 4; ++j) {
        const SparseMatrix c_shift =
            sparse_add(part.blocks.c, -cache.rule().poles[j], part.blocks.mc);
        const DenseMatrix expected = oracle::naive_solve(c_shift.to_dense(), r);
        std::vector<Complex> col(r.col(0), r.col(0) + 10);
        const auto got = cache.interface_solve(j, col);
        double err = 0.0;
        for (std::size_t i = 0; i < 10; ++i) err = std::max(err, std::abs(got[i] - expected(i, 0)));
        CHECK(err < 1e-9);
    }
}

TEST_CASE("schur cache satisfies the resolvent bottom-block identity") {
    SynthOptions options;
    options.n = 40;
    options.inside_count = 5;
    options.outside_rings = {{35, 2.0, 6.0}};
    options.seed = 21;
    const SynthPencil synth = make_planted_pencil(options);
    const PartitionedPencil part = wrap_partitioned(synth.pencil, {25});
    const auto rule = trapezoidal_rule(kUnit, 4);
    SchurCache cache = build_schur_cache(part, rule);

    Rng rng(509);
    const std::size_t s = 15;
    for (std::size_t j = 0; j < 4; ++j) {
        std::vector<Complex> xs(s);
        for (auto& z : xs) z = rng.complex_gaussian();
        // Bottom block of (A - z M)^{-1} [0; x_s] equals S(z)^{-1} x_s.
        const SparseMatrix shifted =
            sparse_add(synth.pencil.a, -cache.rule().poles[j], synth.pencil.m);
        DenseMatrix rhs(40, 1);
        for (std::size_t i = 0; i < s; ++i) rhs(25 + i, 0) = xs[i];
        const DenseMatrix full = oracle::naive_solve(shifted.to_dense(), rhs);
        const auto via_schur = cache.interface_solve(j, xs);
        double err = 0.0;
        for (std::size_t i = 0; i < s; ++i)
            err = std::max(err, std::abs(full(25 + i, 0) - via_schur[i]));
        CHECK(err < 1e-9);
    }
}

TEST_CASE("degenerate split with no interior variables") {
    SynthOptions options;
    options.n = 12;
    options.inside_count = 2;
    options.outside_rings = {{10, 2.0, 5.0}};
    options.seed = 31;
    const SynthPencil synth = make_planted_pencil(options);
    const PartitionedPencil part = wrap_partitioned(synth.pencil, {0});
    const auto rule = trapezoidal_rule(kUnit, 4);
    SchurCache cache = build_schur_cache(part, rule);
    CHECK(cache.interior_dimension() == 0);
    CHECK(cache.interface_dimension() == 12);

    Rng rng(511);
    const DenseMatrix r = oracle::random_matrix(12, 2, rng);
    const DenseMatrix via_schur = cache.apply_interface_filter(r);
    const DenseMatrix expected = matmul(dense_filter_matrix(synth.pencil, cache.rule()), r);
    CHECK(max_abs_diff(via_schur, expected) < 1e-9 * (1.0 + frobenius_norm(expected)));
    const DenseMatrix coupling = cache.apply_coupling_filter(r);
    CHECK(coupling.rows() == 0);
    CHECK(coupling.cols() == 2);
}

TEST_CASE("interface and coupling filters match dense blocks of the filtered operator") {
    SynthOptions options;
    options.n = 40;
    options.inside_count = 5;
    options.outside_rings = {{35, 2.0, 6.0}};
    options.seed = 43;
    const SynthPencil synth = make_planted_pencil(options);
    const std::size_t d = 25, s = 15;
    const PartitionedPencil part = wrap_partitioned(synth.pencil, {d});
    const auto rule = trapezoidal_rule(kUnit, 8);
    SolveLedger ledger;
    SchurCache cache = build_schur_cache(part, rule, &ledger);
    cache.ledger = &ledger;
    cache.phase = "range";

    const DenseMatrix filter_dense = dense_filter_matrix(synth.pencil, cache.rule());
    Rng rng(521);
    const DenseMatrix r = oracle::random_matrix(s, 3, rng);

    const DenseMatrix zero(s, 2);
    CHECK(frobenius_norm(cache.apply_interface_filter(zero)) == 0.0);

    // Bottom-right block times R.
    const DenseMatrix got_interface = cache.apply_interface_filter(r);
    DenseMatrix expected_interface(s, 3);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < s; ++i) {
            Complex sum(0.0, 0.0);
            for (std::size_t l = 0; l < s; ++l) sum += filter_dense(d + i, d + l) * r(l, c);
            expected_interface(i, c) = sum;
        }
    CHECK(max_abs_diff(got_interface, expected_interface) <
          1e-9 * (1.0 + frobenius_norm(expected_interface)));

    // Top-right block times R, with the sign flipped.
    const DenseMatrix got_coupling = cache.apply_coupling_filter(r);
    DenseMatrix expected_coupling(d, 3);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < d; ++i) {
            Complex sum(0.0, 0.0);
            for (std::size_t l = 0; l < s; ++l) sum += filter_dense(i, d + l) * r(l, c);
            expected_coupling(i, c) = -sum;
        }
    CHECK(max_abs_diff(got_coupling, expected_coupling) <
          1e-9 * (1.0 + frobenius_norm(expected_coupling)));
}

TEST_CASE("joint application shares interface solves and tallies exactly") {
    SynthOptions options;
    options.n = 36;
    options.inside_count = 4;
    options.outside_rings = {{32, 2.0, 6.0}};
    options.seed = 47;
    const SynthPencil synth = make_planted_pencil(options);
    const PartitionedPencil part = wrap_partitioned(synth.pencil, {22});
    const auto rule = trapezoidal_rule(kUnit, 8);
    SchurCache cache = build_schur_cache(part, rule);
    SolveLedger ledger;
    cache.ledger = &ledger;
    cache.phase = "range";

    Rng rng(523);
    const DenseMatrix r = oracle::random_matrix(14, 3, rng);
    const auto joint = cache.apply_joint(r);
    CHECK(ledger.phase("range").s_solves == 8 * 3);
    CHECK(ledger.phase("range").b_solves == 8 * 3);

    // Joint output agrees with the separate paths.
    SchurCache& plain = cache;
    plain.ledger = nullptr;
    CHECK(max_abs_diff(joint.interface_part, plain.apply_interface_filter(r)) < 1e-12);
    CHECK(max_abs_diff(joint.coupling_part, plain.apply_coupling_filter(r)) < 1e-12);
}

TEST_CASE("interface filter range matches the planted bottom eigenvector spans") {
    // With outside directions fully damped, the range of the interface filter
    // equals the span of the inside eigenvectors' bottom parts.
    SynthOptions options;
    options.n = 48;
    options.inside_count = 5;
    options.outside_rings = {{43, 8.0, 16.0}};
    options.seed = 61;
    const SynthPencil synth = make_planted_pencil(options);
    const std::size_t d = 30, s = 18;
    const PartitionedPencil part = wrap_partitioned(synth.pencil, {d});
    SchurCache cache = build_schur_cache(part, trapezoidal_rule(kUnit, 32));

    Rng rng(541);
    const DenseMatrix probes = oracle::random_matrix(s, 7, rng);
    const DenseMatrix image = cache.apply_interface_filter(probes);
    const auto image_svd = svd(image, true);
    DenseMatrix image_basis(s, 5);
    for (std::size_t j = 0; j < 5; ++j)
        std::copy(image_svd.left_vectors.col(j), image_svd.left_vectors.col(j) + s,
                  image_basis.col(j));

    DenseMatrix bottoms(s, 5);
    for (std::size_t k = 0; k < 5; ++k) {
        const std::size_t i = synth.inside_indices[k];
        for (std::size_t r = 0; r < s; ++r) bottoms(r, k) = synth.eigenvectors(d + r, i);
    }
    const DenseMatrix target = orthonormalize(bottoms);
    REQUIRE(target.cols() == 5);
    CHECK(oracle::max_principal_angle(image_basis, target) < 1e-6);
}
