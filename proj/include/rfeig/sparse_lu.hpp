#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "rfeig/sparse.hpp"

namespace rfeig {

// Sparse LU factorization P_r A P_c = L U computed by left-looking
// Gilbert-Peierls elimination with threshold partial pivoting. The factor is
// immutable after construction except for the atomic solve tally.
class LuFactor {
public:
    LuFactor() = default;
    LuFactor(LuFactor&& other) noexcept { *this = std::move(other); }
    LuFactor& operator=(LuFactor&& other) noexcept {
        n_ = other.n_;
        l_col_ptr_ = std::move(other.l_col_ptr_);
        l_rows_ = std::move(other.l_rows_);
        l_values_ = std::move(other.l_values_);
        u_col_ptr_ = std::move(other.u_col_ptr_);
        u_pos_ = std::move(other.u_pos_);
        u_values_ = std::move(other.u_values_);
        u_diag_ = std::move(other.u_diag_);
        pivot_row_ = std::move(other.pivot_row_);
        pinv_ = std::move(other.pinv_);
        col_order_ = std::move(other.col_order_);
        solve_count_.store(other.solve_count_.load());
        return *this;
    }

    std::size_t dim() const { return n_; }
    std::size_t fill_l() const { return l_values_.size(); }
    std::size_t fill_u() const { return u_values_.size(); }

    std::vector<Complex> solve(const std::vector<Complex>& b) const;
    DenseMatrix solve(const DenseMatrix& b) const;

    std::int64_t solves_performed() const { return solve_count_.load(); }

private:
    friend LuFactor factor_with_order(const SparseMatrix& a, const Permutation& col_order,
                                      double pivot_threshold);

    void solve_in_place(std::vector<Complex>& x) const;

    std::size_t n_ = 0;
    // Column-compressed L (unit diagonal implicit) addressed by original row index.
    std::vector<std::size_t> l_col_ptr_, l_rows_;
    std::vector<Complex> l_values_;
    // Column-compressed U addressed by pivot position; diagonal stored separately.
    std::vector<std::size_t> u_col_ptr_, u_pos_;
    std::vector<Complex> u_values_, u_diag_;
    std::vector<std::size_t> pivot_row_;   // elimination step -> original row
    std::vector<std::size_t> pinv_;        // original row -> elimination step
    std::vector<std::size_t> col_order_;   // elimination step -> original column
    mutable std::atomic<std::int64_t> solve_count_{0};
};

// Fill-reducing ordering: minimum degree with element absorption on the
// symmetrized pattern of a. Computed once per sparsity pattern and reused
// across all shifted factorizations, since the pattern of A - zeta*M does not
// depend on zeta.
Permutation fill_reducing_order(const SparseMatrix& a);

LuFactor factor(const SparseMatrix& a);
LuFactor factor_with_order(const SparseMatrix& a, const Permutation& col_order,
                           double pivot_threshold = 0.1);

}  // namespace rfeig
