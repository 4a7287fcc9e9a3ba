#include "rfeig/deflation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfeig/errors.hpp"

namespace rfeig {

BlockEigen block_eig(const PartitionedPencil& partitioned, const Disk& disk, std::size_t phi,
                     std::size_t dense_cap) {
    const std::size_t d = partitioned.blocks.d;
    const std::size_t parts = partitioned.partition.parts;
    const Complex zc = disk.center;

    struct Candidate {
        Complex value;
        std::size_t offset;      // first interior row of its block
        std::size_t block_size;
        std::size_t column;      // eigenvector column within the block
        std::size_t block;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(d);
    std::vector<DenseMatrix> block_right(parts);
    std::vector<DenseMatrix> block_left(parts);

    for (std::size_t k = 0; k < parts; ++k) {
        const std::size_t lo = partitioned.interior_offsets[k];
        const std::size_t hi = partitioned.interior_offsets[k + 1];
        const std::size_t size = hi - lo;
        if (size == 0) continue;
        if (size > dense_cap) throw BlockTooLarge(k, size);
        const DenseMatrix b_dense = submatrix(partitioned.blocks.b, lo, hi, lo, hi).to_dense();
        const DenseMatrix m_dense = submatrix(partitioned.blocks.mb, lo, hi, lo, hi).to_dense();
        DenseLu mass_lu;
        try {
            mass_lu = DenseLu(m_dense);
        } catch (const SingularMatrix&) {
            throw SingularMassBlock(k);
        }
        const SchurResult eig = complex_eig(mass_lu.solve(b_dense));
        block_right[k] = right_eigenvectors(eig);
        // Left vectors: V_hat^H = (M_B V)^{-1} per block.
        const DenseMatrix mv = matmul(m_dense, block_right[k]);
        DenseMatrix inv_mv;
        try {
            inv_mv = dense_solve(mv, DenseMatrix::identity(size));
        } catch (const SingularMatrix&) {
            throw Error("block " + std::to_string(k) +
                        " eigenbasis is numerically defective; cannot build left vectors");
        }
        block_left[k] = adjoint(inv_mv);
        for (std::size_t c = 0; c < size; ++c)
            candidates.push_back({eig.eigenvalues[c], lo, size, c, k});
    }

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(candidates[x].value - zc) < std::abs(candidates[y].value - zc);
    });

    std::size_t selected = phi;
    if (phi == kAutoPhi) {
        selected = 0;
        for (const Candidate& cand : candidates)
            if (disk.contains(cand.value)) ++selected;
    }
    selected = std::min(selected, candidates.size());

    BlockEigen out;
    out.phi = selected;
    out.selected_values.reserve(selected);
    out.selected_right = DenseMatrix(d, selected);
    out.selected_left = DenseMatrix(d, selected);
    out.all_values.resize(candidates.size());
    out.deflated.assign(candidates.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) out.all_values[r] = candidates[order[r]].value;
    for (std::size_t r = 0; r < selected; ++r) {
        const Candidate& cand = candidates[order[r]];
        out.deflated[r] = 1;
        out.selected_values.push_back(cand.value);
        for (std::size_t i = 0; i < cand.block_size; ++i) {
            out.selected_right(cand.offset + i, r) = block_right[cand.block](i, cand.column);
            out.selected_left(cand.offset + i, r) = block_left[cand.block](i, cand.column);
        }
    }
    return out;
}

DeflatedResolvent::DeflatedResolvent(const PartitionedPencil& partitioned, const Disk& disk,
                                     std::size_t phi, std::size_t dense_cap)
    : partitioned_(&partitioned),
      zc_(disk.center),
      d_(partitioned.blocks.d),
      eigen_(block_eig(partitioned, disk, phi, dense_cap)) {
    const SparseMatrix b_shift = sparse_add(partitioned.blocks.b, -zc_, partitioned.blocks.mb);
    const std::size_t parts = partitioned.partition.parts;
    std::vector<Permutation> orders(parts);
    std::vector<const Permutation*> order_ptrs(parts, nullptr);
    for (std::size_t k = 0; k < parts; ++k) {
        const std::size_t lo = partitioned.interior_offsets[k];
        const std::size_t hi = partitioned.interior_offsets[k + 1];
        if (hi == lo || hi - lo <= BlockDiagonalSolver::kDenseCrossover) continue;
        orders[k] = fill_reducing_order(submatrix(b_shift, lo, hi, lo, hi));
        order_ptrs[k] = &orders[k];
    }
    center_solver_ = BlockDiagonalSolver(b_shift, partitioned.interior_offsets, order_ptrs);
}

void DeflatedResolvent::project_out(std::vector<Complex>& y) const {
    const std::size_t phi = eigen_.phi;
    if (phi == 0) return;
    const std::vector<Complex> my = spmv(partitioned_->blocks.mb, y);
    for (std::size_t c = 0; c < phi; ++c) {
        Complex coeff(0.0, 0.0);
        const Complex* left = eigen_.selected_left.col(c);
        for (std::size_t i = 0; i < d_; ++i) coeff += std::conj(left[i]) * my[i];
        const Complex* right = eigen_.selected_right.col(c);
        for (std::size_t i = 0; i < d_; ++i) y[i] -= coeff * right[i];
    }
}

std::vector<Complex> DeflatedResolvent::apply(const std::vector<Complex>& x) const {
    std::vector<Complex> y = x;
    center_solver_.solve_in_place(y);
    project_out(y);
    if (ledger) ledger->add_b(phase, 1);
    return y;
}

DenseMatrix DeflatedResolvent::apply(const DenseMatrix& x) const {
    DenseMatrix out(x.rows(), x.cols());
    std::vector<Complex> column(x.rows());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        std::copy(x.col(j), x.col(j) + x.rows(), column.begin());
        center_solver_.solve_in_place(column);
        project_out(column);
        out.set_col(j, column);
    }
    if (ledger) ledger->add_b(phase, static_cast<std::int64_t>(x.cols()));
    return out;
}

std::vector<Complex> DeflatedResolvent::neumann(Complex lambda, std::size_t psi,
                                                const std::vector<Complex>& x) const {
    std::vector<Complex> term = apply(x);
    std::vector<Complex> acc = term;
    const Complex gap = lambda - zc_;
    for (std::size_t k = 1; k <= psi; ++k) {
        std::vector<Complex> mt = spmv(partitioned_->blocks.mb, term);
        term = apply(mt);
        for (auto& z : term) z *= gap;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
    }
    return acc;
}

double DeflatedResolvent::truncation_bound(Complex lambda, std::size_t psi) const {
    const Complex gap = lambda - zc_;
    double bound = 0.0;
    for (std::size_t r = 0; r < eigen_.all_values.size(); ++r) {
        if (eigen_.deflated[r]) continue;
        const double pole_gap = std::abs(eigen_.all_values[r] - zc_);
        const double gamma = std::abs(gap) / pole_gap;
        if (gamma >= 1.0) return std::numeric_limits<double>::infinity();
        bound += std::pow(gamma, double(psi + 1)) / (pole_gap * (1.0 - gamma));
    }
    return bound;
}

DenseMatrix build_w(const DeflatedResolvent& resolvent, const DenseMatrix& g_basis,
                    std::size_t psi) {
    const PartitionedPencil& partitioned = resolvent.partitioned();
    const std::size_t d = resolvent.interior_dimension();
    const BlockEigen& eigen = resolvent.eigen();

    DenseMatrix combined(d, 0);
    if (eigen.phi > 0) combined = eigen.selected_right;

    if (g_basis.cols() > 0 && d > 0) {
        const SparseMatrix f_center =
            sparse_add(partitioned.blocks.f, -resolvent.center(), partitioned.blocks.mf);
        std::vector<DenseMatrix> sources;
        if (f_center.nnz() > 0) sources.push_back(spmm(f_center, g_basis));
        if (partitioned.blocks.mf.nnz() > 0)  // third column group only if M_F != 0
            sources.push_back(spmm(partitioned.blocks.mf, g_basis));
        for (const DenseMatrix& source : sources) {
            DenseMatrix term = resolvent.apply(source);
            combined = hcat(combined, term);
            for (std::size_t k = 1; k <= psi; ++k) {
                term = resolvent.apply(spmm(partitioned.blocks.mb, term));
                combined = hcat(combined, term);
            }
        }
    }
    if (combined.cols() == 0) return DenseMatrix(d, 0);
    return orthonormalize(combined);
}

}  // namespace rfeig
