#include "rfeig/resolvent.hpp"

#include <cmath>

#include "rfeig/errors.hpp"

namespace rfeig {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Internal signal used to carry the failing block index out of solver
// construction; translated into the public error types by the builders.
struct BlockFactorFailure {
    std::size_t block;
};

}  // namespace

FullResolventCache build_full_cache(const SparsePencil& pencil, const QuadratureRule& rule,
                                    unsigned threads) {
    // The pattern of A - z M is shift independent, so one fill-reducing order
    // serves every pole.
    const SparseMatrix pattern = sparse_add(pencil.a, Complex(1.0, 0.0), pencil.m);
    const Permutation order = fill_reducing_order(pattern);

    QuadratureRule active = rule;
    const double step = kPi / (4.0 * static_cast<double>(rule.order));
    for (int attempt = 0;; ++attempt) {
        FullResolventCache cache;
        cache.rule_ = active;
        cache.m_ = pencil.m;
        cache.threads = threads;
        cache.pole_factors_.resize(active.order);
        std::atomic<std::size_t> failed_pole{active.order};
        parallel_for(active.order, threads, [&](std::size_t j) {
            try {
                const SparseMatrix shifted = sparse_add(pencil.a, -active.poles[j], pencil.m);
                cache.pole_factors_[j] = factor_with_order(shifted, order);
            } catch (const NumericallySingular&) {
                failed_pole.store(j);
            } catch (const StructurallySingular&) {
                failed_pole.store(j);
            }
        });
        if (failed_pole.load() == active.order) return cache;
        if (attempt >= 3) throw PoleOnSpectrum(failed_pole.load());
        active = rotate_rule(active, step);
    }
}

DenseMatrix FullResolventCache::apply(const DenseMatrix& r) const {
    const std::size_t n = m_.rows();
    const std::size_t cols = r.cols();
    const DenseMatrix mr = spmm(m_, r);
    std::vector<DenseMatrix> per_pole(rule_.order);
    parallel_for(rule_.order, threads,
                 [&](std::size_t j) { per_pole[j] = pole_factors_[j].solve(mr); });
    DenseMatrix acc(n, cols);
    for (std::size_t j = 0; j < rule_.order; ++j) {
        const Complex w = rule_.weights[j];
        for (std::size_t k = 0; k < acc.data().size(); ++k)
            acc.data()[k] += w * per_pole[j].data()[k];
    }
    if (ledger) ledger->add_full(phase, static_cast<std::int64_t>(rule_.order * cols));
    return acc;
}

BlockDiagonalSolver::BlockDiagonalSolver(const SparseMatrix& b_shifted,
                                         const std::vector<std::size_t>& offsets,
                                         const std::vector<const Permutation*>& orders) {
    const std::size_t parts = offsets.empty() ? 0 : offsets.size() - 1;
    blocks_.resize(parts);
    for (std::size_t k = 0; k < parts; ++k) {
        Block& block = blocks_[k];
        block.offset = offsets[k];
        block.size = offsets[k + 1] - offsets[k];
        if (block.size == 0) continue;
        const SparseMatrix sub =
            submatrix(b_shifted, block.offset, offsets[k + 1], block.offset, offsets[k + 1]);
        try {
            if (block.size <= kDenseCrossover) {
                block.dense = true;
                block.dense_lu = DenseLu(sub.to_dense());
            } else {
                block.sparse_lu = factor_with_order(sub, *orders[k]);
            }
        } catch (const SingularMatrix&) {
            throw BlockFactorFailure{k};
        } catch (const NumericallySingular&) {
            throw BlockFactorFailure{k};
        } catch (const StructurallySingular&) {
            throw BlockFactorFailure{k};
        }
    }
}

void BlockDiagonalSolver::solve_in_place(std::vector<Complex>& x) const {
    std::vector<Complex> piece;
    for (const Block& block : blocks_) {
        if (block.size == 0) continue;
        piece.assign(x.begin() + block.offset, x.begin() + block.offset + block.size);
        if (block.dense)
            block.dense_lu.solve_in_place(piece);
        else
            piece = block.sparse_lu.solve(piece);
        std::copy(piece.begin(), piece.end(), x.begin() + block.offset);
    }
}

DenseMatrix BlockDiagonalSolver::solve(const DenseMatrix& rhs) const {
    DenseMatrix x = rhs;
    std::vector<Complex> column(rhs.rows());
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
        std::copy(x.col(j), x.col(j) + rhs.rows(), column.begin());
        solve_in_place(column);
        std::copy(column.begin(), column.end(), x.col(j));
    }
    return x;
}

SchurCache build_schur_cache(const PartitionedPencil& partitioned, const QuadratureRule& rule,
                             SolveLedger* setup_ledger, unsigned threads,
                             std::size_t interface_cap) {
    const PencilBlocks& blocks = partitioned.blocks;
    const std::size_t d = blocks.d;
    const std::size_t s = blocks.s;
    if (s > interface_cap) throw InterfaceTooLarge(s, interface_cap);

    // Per-part fill orders, shared across poles.
    const std::size_t parts = partitioned.partition.parts;
    std::vector<Permutation> part_orders(parts);
    std::vector<const Permutation*> order_ptrs(parts, nullptr);
    for (std::size_t k = 0; k < parts; ++k) {
        const std::size_t lo = partitioned.interior_offsets[k];
        const std::size_t hi = partitioned.interior_offsets[k + 1];
        if (hi == lo) continue;
        const SparseMatrix pattern =
            sparse_add(submatrix(blocks.b, lo, hi, lo, hi), Complex(1.0, 0.0),
                       submatrix(blocks.mb, lo, hi, lo, hi));
        part_orders[k] = fill_reducing_order(pattern);
        order_ptrs[k] = &part_orders[k];
    }

    QuadratureRule active = rule;
    const double step = kPi / (4.0 * static_cast<double>(rule.order));
    for (int attempt = 0;; ++attempt) {
        SchurCache cache;
        cache.rule_ = active;
        cache.d_ = d;
        cache.s_ = s;
        cache.threads = threads;
        cache.interior_solvers_.resize(active.order);
        cache.schur_solvers_.resize(active.order);
        cache.f_shifted_.resize(active.order);

        std::atomic<std::size_t> failed_pole{active.order};
        std::atomic<std::size_t> failed_block{0};
        std::atomic<bool> schur_singular{false};
        std::atomic<std::int64_t> setup_solves{0};
        parallel_for(active.order, threads, [&](std::size_t j) {
            const Complex zeta = active.poles[j];
            try {
                const SparseMatrix b_shift = sparse_add(blocks.b, -zeta, blocks.mb);
                cache.interior_solvers_[j] =
                    BlockDiagonalSolver(b_shift, partitioned.interior_offsets, order_ptrs);
                cache.f_shifted_[j] = sparse_add(blocks.f, -zeta, blocks.mf);
                const SparseMatrix e_shift = sparse_add(blocks.e, -zeta, blocks.me);
                const SparseMatrix c_shift = sparse_add(blocks.c, -zeta, blocks.mc);

                DenseMatrix schur = c_shift.to_dense();
                if (d > 0 && cache.f_shifted_[j].nnz() > 0) {
                    const DenseMatrix x = cache.interior_solvers_[j].solve(
                        cache.f_shifted_[j].to_dense());
                    const DenseMatrix ex = spmm(e_shift, x);
                    for (std::size_t k = 0; k < schur.data().size(); ++k)
                        schur.data()[k] -= ex.data()[k];
                    setup_solves.fetch_add(static_cast<std::int64_t>(s));
                }
                cache.schur_solvers_[j] = DenseLu(schur);
            } catch (const BlockFactorFailure& failure) {
                failed_pole.store(j);
                failed_block.store(failure.block);
            } catch (const SingularMatrix&) {
                failed_pole.store(j);
                schur_singular.store(true);
            }
        });
        if (failed_pole.load() == active.order) {
            if (setup_ledger) setup_ledger->add_b("setup", setup_solves.load());
            return cache;
        }
        if (attempt >= 3) {
            if (schur_singular.load()) throw PoleOnSpectrum(failed_pole.load());
            throw PoleOnBlockSpectrum(failed_pole.load(), failed_block.load());
        }
        active = rotate_rule(active, step);
    }
}

DenseMatrix SchurCache::apply_interface_filter(const DenseMatrix& r) const {
    const std::size_t cols = r.cols();
    std::vector<DenseMatrix> per_pole(rule_.order);
    parallel_for(rule_.order, threads,
                 [&](std::size_t j) { per_pole[j] = schur_solvers_[j].solve(r); });
    DenseMatrix acc(s_, cols);
    for (std::size_t j = 0; j < rule_.order; ++j) {
        const Complex w = rule_.weights[j];
        for (std::size_t k = 0; k < acc.data().size(); ++k)
            acc.data()[k] += w * per_pole[j].data()[k];
    }
    if (ledger) ledger->add_s(phase, static_cast<std::int64_t>(rule_.order * cols));
    return acc;
}

DenseMatrix SchurCache::apply_coupling_filter(const DenseMatrix& r) const {
    const std::size_t cols = r.cols();
    std::vector<DenseMatrix> per_pole(rule_.order);
    parallel_for(rule_.order, threads, [&](std::size_t j) {
        const DenseMatrix t = schur_solvers_[j].solve(r);
        per_pole[j] = interior_solvers_[j].solve(spmm(f_shifted_[j], t));
    });
    DenseMatrix acc(d_, cols);
    for (std::size_t j = 0; j < rule_.order; ++j) {
        const Complex w = rule_.weights[j];
        for (std::size_t k = 0; k < acc.data().size(); ++k)
            acc.data()[k] += w * per_pole[j].data()[k];
    }
    if (ledger) {
        ledger->add_s(phase, static_cast<std::int64_t>(rule_.order * cols));
        ledger->add_b(phase, static_cast<std::int64_t>(rule_.order * cols));
    }
    return acc;
}

SchurCache::JointResult SchurCache::apply_joint(const DenseMatrix& r) const {
    const std::size_t cols = r.cols();
    std::vector<DenseMatrix> interface_per_pole(rule_.order);
    std::vector<DenseMatrix> coupling_per_pole(rule_.order);
    parallel_for(rule_.order, threads, [&](std::size_t j) {
        // The interface solves feed both sums; Step 2's solves are reused in
        // Step 1 rather than repeated.
        const DenseMatrix t = schur_solvers_[j].solve(r);
        coupling_per_pole[j] = interior_solvers_[j].solve(spmm(f_shifted_[j], t));
        interface_per_pole[j] = t;
    });
    JointResult out{DenseMatrix(s_, cols), DenseMatrix(d_, cols)};
    for (std::size_t j = 0; j < rule_.order; ++j) {
        const Complex w = rule_.weights[j];
        for (std::size_t k = 0; k < out.interface_part.data().size(); ++k)
            out.interface_part.data()[k] += w * interface_per_pole[j].data()[k];
        for (std::size_t k = 0; k < out.coupling_part.data().size(); ++k)
            out.coupling_part.data()[k] += w * coupling_per_pole[j].data()[k];
    }
    if (ledger) {
        ledger->add_s(phase, static_cast<std::int64_t>(rule_.order * cols));
        ledger->add_b(phase, static_cast<std::int64_t>(rule_.order * cols));
    }
    return out;
}

std::vector<Complex> SchurCache::interface_solve(std::size_t pole,
                                                 const std::vector<Complex>& v) const {
    return schur_solvers_[pole].solve(v);
}

std::vector<Complex> SchurCache::interior_solve(std::size_t pole,
                                                const std::vector<Complex>& v) const {
    std::vector<Complex> x = v;
    interior_solvers_[pole].solve_in_place(x);
    return x;
}

}  // namespace rfeig
