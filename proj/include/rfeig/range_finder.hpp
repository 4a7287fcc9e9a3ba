#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rfeig/dense.hpp"
#include "rfeig/util.hpp"

namespace rfeig {

struct RangeFinderConfig {
    double ratio_tol = 1e-12;
    std::size_t max_iterations = 400;
    std::uint64_t seed = 0;
};

struct RangeFinderResult {
    DenseMatrix basis;  // orthonormal columns spanning the captured range
    std::size_t iterations = 0;
    double final_ratio = 1.0;  // sigma_min / sigma_max at termination
    bool converged = false;
    std::vector<double> ratio_history;  // one entry per iteration
};

// Black-box x -> X x with known dimensions.
struct LinearOperator {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::function<std::vector<Complex>(const std::vector<Complex>&)> apply;
};

// Evolving matrix maintained as an incrementally updated QR factorization
// (Gram-Schmidt with one reorthogonalization pass). The singular-value ratio
// of the evolving matrix is read from the small triangular factor.
class IncrementalQr {
public:
    explicit IncrementalQr(std::size_t rows) : rows_(rows) {}

    // Appends a column and returns sigma_min/sigma_max of all columns so far.
    double append(const std::vector<Complex>& column);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return r_.size(); }
    double ratio() const { return ratio_; }

    // Orthonormal basis of the first `count` appended columns.
    DenseMatrix basis(std::size_t count) const;

private:
    std::size_t rows_;
    std::vector<std::vector<Complex>> q_;  // orthonormal columns
    std::vector<std::vector<Complex>> r_;  // r_[j] = column j of R, length j+1
    double ratio_ = 1.0;
};

// Incremental randomized range finder: draws standard complex normal probes,
// accumulates operator images, and stops once the evolving matrix turns
// numerically rank deficient at ratio_tol. The final (dependent) column is
// dropped from the returned basis. A first image below 1e-300 in norm is the
// zero operator: the basis comes back empty with converged = true.
RangeFinderResult randomized_range(const LinearOperator& op, const RangeFinderConfig& config);

}  // namespace rfeig
