#include "rfeig/range_finder.hpp"

#include <algorithm>
#include <cmath>

#include "rfeig/errors.hpp"

namespace rfeig {

double IncrementalQr::append(const std::vector<Complex>& column) {
    const std::size_t k = q_.size();
    std::vector<Complex> v = column;
    std::vector<Complex> coeffs(k, Complex(0.0, 0.0));
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
            Complex dot(0.0, 0.0);
            const std::vector<Complex>& qj = q_[j];
            for (std::size_t i = 0; i < rows_; ++i) dot += std::conj(qj[i]) * v[i];
            coeffs[j] += dot;
            for (std::size_t i = 0; i < rows_; ++i) v[i] -= dot * qj[i];
        }
    }
    const double beta = vector_norm(v);
    if (beta > 0.0) {
        for (auto& z : v) z /= beta;
    } else {
        std::fill(v.begin(), v.end(), Complex(0.0, 0.0));
    }
    q_.push_back(std::move(v));
    coeffs.push_back(Complex(beta, 0.0));
    r_.push_back(std::move(coeffs));

    // Ratio from the SVD of the triangular factor.
    const std::size_t m = r_.size();
    DenseMatrix r_mat(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < r_[j].size(); ++i) r_mat(i, j) = r_[j][i];
    const auto s = svd(r_mat, false);
    const double smax = s.singular_values.front();
    const double smin = s.singular_values.back();
    ratio_ = smax > 0.0 ? smin / smax : 0.0;
    return ratio_;
}

DenseMatrix IncrementalQr::basis(std::size_t count) const {
    DenseMatrix out(rows_, count);
    for (std::size_t j = 0; j < count; ++j) out.set_col(j, q_[j]);
    return out;
}

RangeFinderResult randomized_range(const LinearOperator& op, const RangeFinderConfig& config) {
    if (!(config.ratio_tol > 0.0 && config.ratio_tol < 1.0))
        throw Error("range finder: ratio tolerance must lie in (0, 1)");
    if (config.max_iterations < 1)
        throw Error("range finder: iteration cap must be at least 1");
    RangeFinderResult result;
    Rng rng(config.seed);
    IncrementalQr evolving(op.output_dim);
    const std::size_t dim_cap = std::min(op.input_dim, op.output_dim);
    const std::size_t iteration_cap = std::min(config.max_iterations, dim_cap);

    std::vector<Complex> probe(op.input_dim);
    bool dropped_last = false;
    while (result.iterations < iteration_cap) {
        for (auto& z : probe) z = rng.complex_gaussian();
        std::vector<Complex> image = op.apply(probe);
        ++result.iterations;
        // Zero operator at 1e-300, or numerically zero at the configured
        // tolerance relative to the probe: the range is trivial (a disk with
        // no eigenvalues filters every probe to roundoff level).
        if (result.iterations == 1 &&
            (vector_norm(image) < 1e-300 ||
             vector_norm(image) <= config.ratio_tol * vector_norm(probe))) {
            result.basis = DenseMatrix(op.output_dim, 0);
            result.converged = true;
            result.final_ratio = 0.0;
            result.ratio_history.push_back(0.0);
            return result;
        }
        const double ratio = evolving.append(image);
        result.ratio_history.push_back(ratio);
        result.final_ratio = ratio;
        if (ratio <= config.ratio_tol) {
            result.converged = true;
            dropped_last = true;  // the triggering column is dependent
            break;
        }
    }
    if (!result.converged)
        // Ran out of iterations: converged only if the full dimension cap was
        // reached (the evolving matrix cannot grow further).
        result.converged = result.iterations == dim_cap && dim_cap <= config.max_iterations;

    const std::size_t keep = evolving.cols() - (dropped_last ? 1 : 0);
    result.basis = evolving.basis(keep);
    return result;
}

}  // namespace rfeig
