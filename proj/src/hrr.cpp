#include "rfeig/hrr.hpp"

#include <algorithm>
#include <cmath>

#include "rfeig/errors.hpp"

namespace rfeig {

std::pair<DenseMatrix, DenseMatrix> assemble_hrr(const SparsePencil& pencil, Complex zc,
                                                 const DenseMatrix& z) {
    if (z.cols() == 0) throw EmptyBasis();
    const DenseMatrix az = spmm(pencil.a, z);
    const DenseMatrix mz = spmm(pencil.m, z);
    DenseMatrix kz = az;
    for (std::size_t k = 0; k < kz.data().size(); ++k) kz.data()[k] -= zc * mz.data()[k];
    const DenseMatrix kz_h = adjoint(kz);
    DenseMatrix g = matmul(kz_h, kz);
    // Gram structure: symmetrize away roundoff so G is exactly Hermitian.
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i; j < g.cols(); ++j) {
            const Complex mean = 0.5 * (g(i, j) + std::conj(g(j, i)));
            g(i, j) = mean;
            g(j, i) = std::conj(mean);
        }
    return {std::move(g), matmul(kz_h, mz)};
}

std::vector<std::pair<Complex, std::vector<Complex>>> hrr_solve(const DenseMatrix& g,
                                                                const DenseMatrix& h, Complex zc) {
    const std::size_t k = g.rows();
    const auto gs = svd(g, false);
    const double smax = gs.singular_values.front();
    const double smin = gs.singular_values.back();
    if (smin <= 0.0 || smax / smin > 1e14)
        throw IllConditionedProjection(smin > 0.0 ? smax / smin : 1e300);

    const DenseMatrix t = dense_solve(g, h);
    const SchurResult eig = complex_eig(t);
    const DenseMatrix vectors = right_eigenvectors(eig);
    const double scale = frobenius_norm(t);

    std::vector<std::pair<Complex, std::vector<Complex>>> pairs;
    pairs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Complex tau = eig.eigenvalues[i];
        if (std::abs(tau) <= 1e-14 * scale) continue;  // Ritz value at infinity
        pairs.emplace_back(zc + 1.0 / tau, vectors.col_vector(i));
    }
    return pairs;
}

double residual_norm(const SparsePencil& pencil, Complex theta, const std::vector<Complex>& x) {
    const auto ax = spmv(pencil.a, x);
    const auto mx = spmv(pencil.m, x);
    double num = 0.0, na = 0.0, nm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += std::norm(ax[i] - theta * mx[i]);
        na += std::norm(ax[i]);
        nm += std::norm(mx[i]);
    }
    const double denom = std::sqrt(na) + std::abs(theta) * std::sqrt(nm);
    return denom > 0.0 ? std::sqrt(num) / denom : 0.0;
}

EigenReport extract(const SparsePencil& pencil, const Disk& disk, const DenseMatrix& z,
                    double spurious_tol) {
    EigenReport report;
    if (z.cols() == 0) return report;

    const auto [g, h] = assemble_hrr(pencil, disk.center, z);
    const auto pairs = hrr_solve(g, h, disk.center);
    report.ritz_count = pairs.size();

    for (const auto& [theta, q] : pairs) {
        if (!disk.contains(theta)) continue;
        // Ritz vector lifted back to the full space, normalized.
        std::vector<Complex> x(z.rows(), Complex(0.0, 0.0));
        for (std::size_t j = 0; j < z.cols(); ++j) {
            const Complex qj = q[j];
            if (qj == Complex(0.0, 0.0)) continue;
            const Complex* zj = z.col(j);
            for (std::size_t i = 0; i < z.rows(); ++i) x[i] += zj[i] * qj;
        }
        const double nrm = vector_norm(x);
        if (nrm < 1e-300) continue;
        for (auto& value : x) value /= nrm;

        const double rho_hat = residual_norm(pencil, theta, x);
        if (rho_hat > spurious_tol) {
            ++report.spurious_count;
            continue;
        }
        RitzPair pair;
        pair.value = theta;
        pair.vector = std::move(x);
        pair.residual = rho_hat;
        pair.in_disk = true;
        report.accepted.push_back(std::move(pair));
    }
    std::sort(report.accepted.begin(), report.accepted.end(),
              [](const RitzPair& a, const RitzPair& b) {
                  if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
                  return a.value.imag() < b.value.imag();
              });
    return report;
}

}  // namespace rfeig
