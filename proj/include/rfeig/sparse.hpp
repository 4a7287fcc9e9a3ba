#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfeig/dense.hpp"
#include "rfeig/util.hpp"

namespace rfeig {

// Compressed sparse column matrix. Row indices are strictly increasing within
// each column and duplicates are summed during assembly.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), col_ptr_(cols + 1, 0) {}

    struct Triplet {
        std::size_t row;
        std::size_t col;
        Complex value;
    };

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> entries);
    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& col_ptr() const { return col_ptr_; }
    const std::vector<std::size_t>& row_idx() const { return row_idx_; }
    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }

    DenseMatrix to_dense() const;

    bool same_entries(const SparseMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::size_t> row_idx_;
    std::vector<Complex> values_;
};

// The pencil (A, M) of the generalized problem A x = lambda M x. Regularity is
// assumed, not checked.
struct SparsePencil {
    SparseMatrix a;
    SparseMatrix m;
    std::size_t n = 0;

    SparsePencil() = default;
    SparsePencil(SparseMatrix a_, SparseMatrix m_);
};

// Bijection on {0..n-1} stored with its inverse: forward maps old -> new.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<std::size_t> forward);
    static Permutation identity(std::size_t n);

    std::size_t size() const { return forward_.size(); }
    std::size_t operator()(std::size_t old_index) const { return forward_[old_index]; }
    std::size_t inverse(std::size_t new_index) const { return inverse_[new_index]; }
    const std::vector<std::size_t>& forward() const { return forward_; }

    Permutation compose_after(const Permutation& first) const;  // this(first(.))

private:
    std::vector<std::size_t> forward_;
    std::vector<std::size_t> inverse_;
};

// Matrix Market coordinate I/O. Symmetric, hermitian, and skew-symmetric
// banners are expanded to full storage; pattern entries read as 1.
SparseMatrix read_matrix_market(const std::string& path);
SparseMatrix read_matrix_market(std::istream& in);
void write_matrix_market(const SparseMatrix& a, const std::string& path);
void write_matrix_market(const SparseMatrix& a, std::ostream& out);

// Dense array Matrix Market writer used for eigenvector dumps.
void write_matrix_market_dense(const DenseMatrix& a, const std::string& path);

std::vector<Complex> spmv(const SparseMatrix& a, const std::vector<Complex>& x);
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

SparseMatrix permute_symmetric(const SparseMatrix& a, const Permutation& p);
SparseMatrix transpose(const SparseMatrix& a);
SparseMatrix sparse_multiply(const SparseMatrix& a, const SparseMatrix& b);
// a + scale * b over the union pattern.
SparseMatrix sparse_add(const SparseMatrix& a, Complex scale, const SparseMatrix& b);

// The eight blocks of the 2x2 partitioning with d interior rows/columns.
struct PencilBlocks {
    SparseMatrix b, f, e, c;          // from A
    SparseMatrix mb, mf, me, mc;      // from M
    std::size_t d = 0;
    std::size_t s = 0;
};

PencilBlocks extract_blocks(const SparsePencil& pencil, std::size_t d);
// Rebuilds the full pencil from blocks (test and verification helper).
SparsePencil assemble_blocks(const PencilBlocks& blocks);

SparseMatrix submatrix(const SparseMatrix& a, std::size_t row_begin, std::size_t row_end,
                       std::size_t col_begin, std::size_t col_end);

}  // namespace rfeig
