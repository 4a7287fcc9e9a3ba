#pragma once

#include <cstddef>
#include <vector>

#include "rfeig/util.hpp"

namespace rfeig {

// Column-major dense complex matrix. All higher modules funnel their small
// projected problems through this type.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix eye(n, n);
        for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
        return eye;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i + j * rows_]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i + j * rows_]; }

    Complex* col(std::size_t j) { return entries_.data() + j * rows_; }
    const Complex* col(std::size_t j) const { return entries_.data() + j * rows_; }

    std::vector<Complex> col_vector(std::size_t j) const {
        return std::vector<Complex>(col(j), col(j) + rows_);
    }
    void set_col(std::size_t j, const std::vector<Complex>& v) {
        std::copy(v.begin(), v.end(), col(j));
    }

    std::vector<Complex>& data() { return entries_; }
    const std::vector<Complex>& data() const { return entries_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

struct SvdResult {
    std::vector<double> singular_values;  // sorted nonincreasing, length min(rows, cols)
    DenseMatrix left_vectors;             // thin U, populated when vectors requested
    DenseMatrix right_vectors;            // thin V, A = U diag(s) V^H
};

struct SchurResult {
    std::vector<Complex> eigenvalues;
    DenseMatrix unitary_factor;     // Q with A = Q T Q^H
    DenseMatrix triangular_factor;  // T upper triangular
};

// Basic dense helpers shared across modules.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix adjoint(const DenseMatrix& a);
DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
double vector_norm(const std::vector<Complex>& v);

// Orthonormal basis of range(x) via Householder QR with column pivoting. The
// returned column count is the numerical rank of x at drop tolerance 1e-14 of
// the leading pivot. Throws AllZeroInput when every column is below 1e-300.
DenseMatrix orthonormalize(const DenseMatrix& x);

// Singular value decomposition by one-sided Jacobi rotations.
SvdResult svd(const DenseMatrix& x, bool want_vectors);

// Schur decomposition of a square complex matrix: Hessenberg reduction followed
// by implicitly shifted QR with Wilkinson shifts.
SchurResult complex_eig(const DenseMatrix& a);

// Right eigenvectors recovered from a Schur decomposition by back-substitution
// on the triangular factor. Column i pairs with eigenvalues[i].
DenseMatrix right_eigenvectors(const SchurResult& schur);

// Solves a X = b by LU with partial pivoting. Throws SingularMatrix when a
// pivot falls below 1e-14 of the matrix scale.
DenseMatrix dense_solve(const DenseMatrix& a, const DenseMatrix& b);

// Reusable dense LU with partial pivoting for matrices solved against many
// right-hand sides (per-pole Schur complements, small interior blocks).
class DenseLu {
public:
    DenseLu() = default;
    explicit DenseLu(const DenseMatrix& a);

    std::size_t dim() const { return lu_.rows(); }
    void solve_in_place(std::vector<Complex>& x) const;
    std::vector<Complex> solve(const std::vector<Complex>& b) const;
    DenseMatrix solve(const DenseMatrix& b) const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> pivots_;  // row swapped with k at step k
};

}  // namespace rfeig
