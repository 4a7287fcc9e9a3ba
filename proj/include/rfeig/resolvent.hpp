#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rfeig/dense.hpp"
#include "rfeig/filter.hpp"
#include "rfeig/ledger.hpp"
#include "rfeig/partition.hpp"
#include "rfeig/sparse_lu.hpp"

namespace rfeig {

// Factorization cache for the full filtered operator
//   rho(M^{-1}A) = sum_j w_j (A - z_j M)^{-1} M.
// Construction factors A - z_j M once per pole; a pole landing on the spectrum
// triggers up to three rebuilds with all phases rotated by pi/(4N) before the
// error surfaces.
class FullResolventCache {
public:
    const QuadratureRule& rule() const { return rule_; }
    std::size_t dimension() const { return m_.rows(); }

    // sum_j w_j (A - z_j M)^{-1} (M r) for every column of r.
    DenseMatrix apply(const DenseMatrix& r) const;

    SolveLedger* ledger = nullptr;
    std::string phase = "apply";
    unsigned threads = 1;

private:
    friend FullResolventCache build_full_cache(const SparsePencil&, const QuadratureRule&,
                                               unsigned);
    QuadratureRule rule_;
    SparseMatrix m_;
    std::vector<LuFactor> pole_factors_;
};

FullResolventCache build_full_cache(const SparsePencil& pencil, const QuadratureRule& rule,
                                    unsigned threads = 1);

// One solver per diagonal block of B(zeta): dense below the crossover size,
// sparse LU above it.
class BlockDiagonalSolver {
public:
    BlockDiagonalSolver() = default;
    BlockDiagonalSolver(const SparseMatrix& b_shifted,
                        const std::vector<std::size_t>& offsets,
                        const std::vector<const Permutation*>& orders);

    void solve_in_place(std::vector<Complex>& x) const;
    DenseMatrix solve(const DenseMatrix& rhs) const;

    static constexpr std::size_t kDenseCrossover = 64;

private:
    struct Block {
        std::size_t offset = 0;
        std::size_t size = 0;
        bool dense = false;
        DenseLu dense_lu;
        LuFactor sparse_lu;
    };
    std::vector<Block> blocks_;
};

// Per-pole factorizations of the partitioned resolvent: the block-diagonal
// interior matrices B(z_j) and the explicit dense Schur complements
// S(z_j) = C(z_j) - E(z_j) B(z_j)^{-1} F(z_j).
class SchurCache {
public:
    const QuadratureRule& rule() const { return rule_; }
    std::size_t interior_dimension() const { return d_; }
    std::size_t interface_dimension() const { return s_; }

    // sum_j w_j S(z_j)^{-1} R for interface blocks R (s rows).
    DenseMatrix apply_interface_filter(const DenseMatrix& r) const;

    // sum_j w_j B(z_j)^{-1} F(z_j) S(z_j)^{-1} R (d rows out).
    DenseMatrix apply_coupling_filter(const DenseMatrix& r) const;

    // Both of the above sharing one interface solve per pole and column.
    struct JointResult {
        DenseMatrix interface_part;  // s x cols
        DenseMatrix coupling_part;   // d x cols
    };
    JointResult apply_joint(const DenseMatrix& r) const;

    // Access for verification: one S(z_j)^{-1} or B(z_j)^{-1} application.
    std::vector<Complex> interface_solve(std::size_t pole, const std::vector<Complex>& v) const;
    std::vector<Complex> interior_solve(std::size_t pole, const std::vector<Complex>& v) const;
    const SparseMatrix& coupling_block(std::size_t pole) const { return f_shifted_[pole]; }

    SolveLedger* ledger = nullptr;
    std::string phase = "apply";
    unsigned threads = 1;

    static constexpr std::size_t kDefaultInterfaceCap = 4000;

private:
    friend SchurCache build_schur_cache(const PartitionedPencil&, const QuadratureRule&,
                                        SolveLedger*, unsigned, std::size_t);
    QuadratureRule rule_;
    std::size_t d_ = 0;
    std::size_t s_ = 0;
    std::vector<BlockDiagonalSolver> interior_solvers_;  // per pole
    std::vector<DenseLu> schur_solvers_;                 // per pole
    std::vector<SparseMatrix> f_shifted_;                // F(z_j) per pole
};

// `setup_ledger` receives the S-formation solves (s interior solves per pole)
// under phase "setup"; they are deliberately kept out of the per-iteration
// phases.
SchurCache build_schur_cache(const PartitionedPencil& partitioned, const QuadratureRule& rule,
                             SolveLedger* setup_ledger = nullptr, unsigned threads = 1,
                             std::size_t interface_cap = SchurCache::kDefaultInterfaceCap);

}  // namespace rfeig
