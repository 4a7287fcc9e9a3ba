#include "rfeig/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rfeig/errors.hpp"

namespace rfeig {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
        if (x.col != y.col) return x.col < y.col;
        return x.row < y.row;
    });
    // Duplicate coordinates are summed.
    std::size_t w = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (w > 0 && entries[w - 1].col == entries[k].col && entries[w - 1].row == entries[k].row)
            entries[w - 1].value += entries[k].value;
        else
            entries[w++] = entries[k];
    }
    entries.resize(w);

    SparseMatrix a(rows, cols);
    a.row_idx_.resize(w);
    a.values_.resize(w);
    for (const Triplet& t : entries) ++a.col_ptr_[t.col + 1];
    for (std::size_t c = 0; c < cols; ++c) a.col_ptr_[c + 1] += a.col_ptr_[c];
    for (std::size_t k = 0; k < w; ++k) {
        a.row_idx_[k] = entries[k].row;
        a.values_[k] = entries[k].value;
    }
    return a;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<Triplet> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = {i, i, Complex(1.0, 0.0)};
    return from_triplets(n, n, std::move(t));
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
            d(row_idx_[k], j) = values_[k];
    return d;
}

bool SparseMatrix::same_entries(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && col_ptr_ == other.col_ptr_ &&
           row_idx_ == other.row_idx_ && values_ == other.values_;
}

SparsePencil::SparsePencil(SparseMatrix a_, SparseMatrix m_)
    : a(std::move(a_)), m(std::move(m_)), n(a.rows()) {}

Permutation::Permutation(std::vector<std::size_t> forward) : forward_(std::move(forward)) {
    inverse_.assign(forward_.size(), 0);
    for (std::size_t i = 0; i < forward_.size(); ++i) inverse_[forward_[i]] = i;
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = i;
    return Permutation(std::move(f));
}

Permutation Permutation::compose_after(const Permutation& first) const {
    std::vector<std::size_t> f(first.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = forward_[first(i)];
    return Permutation(std::move(f));
}

namespace {

struct Banner {
    std::string field;     // real | complex | integer | pattern
    std::string symmetry;  // general | symmetric | hermitian | skew-symmetric
};

std::string lower(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

Banner parse_banner(const std::string& line, std::size_t line_no) {
    std::istringstream iss(line);
    std::string tag, object, format, field, symmetry;
    iss >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket") throw ParseError(line_no, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") throw ParseError(line_no, "unsupported object: " + object);
    format = lower(format);
    if (format == "array")
        throw UnsupportedFormat("dense array Matrix Market files are not supported");
    if (format != "coordinate") throw ParseError(line_no, "unknown format: " + format);
    Banner banner{lower(field), lower(symmetry)};
    if (banner.field != "real" && banner.field != "complex" && banner.field != "integer" &&
        banner.field != "pattern")
        throw ParseError(line_no, "unknown field: " + banner.field);
    if (banner.symmetry != "general" && banner.symmetry != "symmetric" &&
        banner.symmetry != "hermitian" && banner.symmetry != "skew-symmetric")
        throw ParseError(line_no, "unknown symmetry: " + banner.symmetry);
    return banner;
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](std::string& out) {
        if (!std::getline(in, out)) return false;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        ++line_no;
        return true;
    };
    if (!next_line(line)) throw ParseError(1, "empty file");
    const Banner banner = parse_banner(line, line_no);

    std::size_t rows = 0, cols = 0, declared = 0;
    for (;;) {
        if (!next_line(line)) throw ParseError(line_no, "missing size line");
        if (line.empty() || line[0] == '%') continue;
        std::istringstream iss(line);
        long long r = 0, c = 0, z = 0;
        if (!(iss >> r >> c >> z) || r < 0 || c < 0 || z < 0)
            throw ParseError(line_no, "malformed size line");
        rows = static_cast<std::size_t>(r);
        cols = static_cast<std::size_t>(c);
        declared = static_cast<std::size_t>(z);
        break;
    }

    std::vector<SparseMatrix::Triplet> triplets;
    triplets.reserve(declared * (banner.symmetry == "general" ? 1 : 2));
    std::size_t seen = 0;
    while (seen < declared) {
        if (!next_line(line)) throw ParseError(line_no, "unexpected end of file");
        if (line.empty() || line[0] == '%') continue;
        std::istringstream iss(line);
        long long ri = 0, ci = 0;
        if (!(iss >> ri >> ci)) throw ParseError(line_no, "malformed entry");
        if (ri < 1 || ci < 1 || static_cast<std::size_t>(ri) > rows ||
            static_cast<std::size_t>(ci) > cols)
            throw ParseError(line_no, "index out of range");
        Complex value(1.0, 0.0);
        if (banner.field == "complex") {
            double re = 0.0, im = 0.0;
            if (!(iss >> re >> im)) throw ParseError(line_no, "expected complex value");
            value = Complex(re, im);
        } else if (banner.field != "pattern") {
            double re = 0.0;
            if (!(iss >> re)) throw ParseError(line_no, "expected numeric value");
            value = Complex(re, 0.0);
        }
        const std::size_t i = static_cast<std::size_t>(ri) - 1;
        const std::size_t j = static_cast<std::size_t>(ci) - 1;
        triplets.push_back({i, j, value});
        if (banner.symmetry != "general" && i != j) {
            Complex mirrored = value;
            if (banner.symmetry == "hermitian") mirrored = std::conj(value);
            if (banner.symmetry == "skew-symmetric") mirrored = -value;
            triplets.push_back({j, i, mirrored});
        }
        ++seen;
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_matrix_market(in);
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
    char buf[96];
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%zu %zu %.17g %.17g\n", a.row_idx()[k] + 1, j + 1,
                          a.values()[k].real(), a.values()[k].imag());
            out << buf;
        }
    }
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_matrix_market(a, out);
}

void write_matrix_market_dense(const DenseMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix array complex general\n";
    out << a.rows() << " " << a.cols() << "\n";
    char buf[64];
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", a(i, j).real(), a(i, j).imag());
            out << buf;
        }
}

std::vector<Complex> spmv(const SparseMatrix& a, const std::vector<Complex>& x) {
    std::vector<Complex> y(a.rows(), Complex(0.0, 0.0));
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const Complex xj = x[j];
        if (xj == Complex(0.0, 0.0)) continue;
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k)
            y[a.row_idx()[k]] += a.values()[k] * xj;
    }
    return y;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
    DenseMatrix y(a.rows(), x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        Complex* yc = y.col(c);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex xj = x(j, c);
            if (xj == Complex(0.0, 0.0)) continue;
            for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k)
                yc[a.row_idx()[k]] += a.values()[k] * xj;
        }
    }
    return y;
}

SparseMatrix permute_symmetric(const SparseMatrix& a, const Permutation& p) {
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(a.nnz());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k)
            t.push_back({p(a.row_idx()[k]), p(j), a.values()[k]});
    return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix transpose(const SparseMatrix& a) {
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(a.nnz());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k)
            t.push_back({j, a.row_idx()[k], a.values()[k]});
    return SparseMatrix::from_triplets(a.cols(), a.rows(), std::move(t));
}

SparseMatrix sparse_multiply(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<SparseMatrix::Triplet> t;
    std::vector<Complex> work(a.rows(), Complex(0.0, 0.0));
    std::vector<std::size_t> touched;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        touched.clear();
        for (std::size_t kb = b.col_ptr()[j]; kb < b.col_ptr()[j + 1]; ++kb) {
            const std::size_t l = b.row_idx()[kb];
            const Complex blj = b.values()[kb];
            for (std::size_t ka = a.col_ptr()[l]; ka < a.col_ptr()[l + 1]; ++ka) {
                const std::size_t i = a.row_idx()[ka];
                if (work[i] == Complex(0.0, 0.0)) touched.push_back(i);
                work[i] += a.values()[ka] * blj;
            }
        }
        for (std::size_t i : touched) {
            if (work[i] != Complex(0.0, 0.0)) t.push_back({i, j, work[i]});
            work[i] = Complex(0.0, 0.0);
        }
    }
    return SparseMatrix::from_triplets(a.rows(), b.cols(), std::move(t));
}

SparseMatrix sparse_add(const SparseMatrix& a, Complex scale, const SparseMatrix& b) {
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k)
            t.push_back({a.row_idx()[k], j, a.values()[k]});
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = b.col_ptr()[j]; k < b.col_ptr()[j + 1]; ++k)
            t.push_back({b.row_idx()[k], j, scale * b.values()[k]});
    return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix submatrix(const SparseMatrix& a, std::size_t row_begin, std::size_t row_end,
                       std::size_t col_begin, std::size_t col_end) {
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t j = col_begin; j < col_end; ++j)
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k) {
            const std::size_t i = a.row_idx()[k];
            if (i >= row_begin && i < row_end)
                t.push_back({i - row_begin, j - col_begin, a.values()[k]});
        }
    return SparseMatrix::from_triplets(row_end - row_begin, col_end - col_begin, std::move(t));
}

PencilBlocks extract_blocks(const SparsePencil& pencil, std::size_t d) {
    const std::size_t n = pencil.n;
    PencilBlocks blocks;
    blocks.d = d;
    blocks.s = n - d;
    blocks.b = submatrix(pencil.a, 0, d, 0, d);
    blocks.f = submatrix(pencil.a, 0, d, d, n);
    blocks.e = submatrix(pencil.a, d, n, 0, d);
    blocks.c = submatrix(pencil.a, d, n, d, n);
    blocks.mb = submatrix(pencil.m, 0, d, 0, d);
    blocks.mf = submatrix(pencil.m, 0, d, d, n);
    blocks.me = submatrix(pencil.m, d, n, 0, d);
    blocks.mc = submatrix(pencil.m, d, n, d, n);
    return blocks;
}

SparsePencil assemble_blocks(const PencilBlocks& blocks) {
    const std::size_t d = blocks.d;
    const std::size_t n = d + blocks.s;
    auto merge = [&](const SparseMatrix& b, const SparseMatrix& f, const SparseMatrix& e,
                     const SparseMatrix& c) {
        std::vector<SparseMatrix::Triplet> t;
        auto push = [&](const SparseMatrix& part, std::size_t ro, std::size_t co) {
            for (std::size_t j = 0; j < part.cols(); ++j)
                for (std::size_t k = part.col_ptr()[j]; k < part.col_ptr()[j + 1]; ++k)
                    t.push_back({part.row_idx()[k] + ro, j + co, part.values()[k]});
        };
        push(b, 0, 0);
        push(f, 0, d);
        push(e, d, 0);
        push(c, d, d);
        return SparseMatrix::from_triplets(n, n, std::move(t));
    };
    return SparsePencil(merge(blocks.b, blocks.f, blocks.e, blocks.c),
                        merge(blocks.mb, blocks.mf, blocks.me, blocks.mc));
}

}  // namespace rfeig
