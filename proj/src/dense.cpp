#include "rfeig/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfeig/errors.hpp"

namespace rfeig {

namespace {

double abs2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    for (std::size_t j = 0; j < n; ++j) {
        Complex* cj = c.col(j);
        for (std::size_t l = 0; l < k; ++l) {
            const Complex blj = b(l, j);
            if (blj == Complex(0.0, 0.0)) continue;
            const Complex* al = a.col(l);
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
    return c;
}

DenseMatrix adjoint(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = std::conj(a(i, j));
    return t;
}

DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    DenseMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        std::copy(a.col(j), a.col(j) + a.rows(), c.col(j));
    for (std::size_t j = 0; j < b.cols(); ++j)
        std::copy(b.col(j), b.col(j) + b.rows(), c.col(a.cols() + j));
    return c;
}

double frobenius_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (const Complex& z : a.data()) sum += abs2(z);
    return std::sqrt(sum);
}

double vector_norm(const std::vector<Complex>& v) {
    double sum = 0.0;
    for (const Complex& z : v) sum += abs2(z);
    return std::sqrt(sum);
}

DenseMatrix orthonormalize(const DenseMatrix& x) {
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    if (n == 0 || m == 0) return DenseMatrix(m, 0);

    bool any = false;
    for (std::size_t j = 0; j < n && !any; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (std::abs(x(i, j)) >= 1e-300) {
                any = true;
                break;
            }
        }
    }
    if (!any) throw AllZeroInput();

    DenseMatrix a = x;
    const std::size_t steps = std::min(m, n);
    std::vector<std::size_t> col_of(n);
    std::iota(col_of.begin(), col_of.end(), 0);
    std::vector<double> norms2(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += abs2(a(i, j));
        norms2[j] = s;
    }

    // Householder vectors are stored below the diagonal; tau per reflector.
    std::vector<Complex> tau(steps, Complex(0.0, 0.0));
    std::vector<double> rdiag(steps, 0.0);
    std::size_t rank_limit = steps;
    double leading = 0.0;

    for (std::size_t k = 0; k < steps; ++k) {
        // Column pivot: largest remaining norm, recomputed to dodge downdate drift.
        std::size_t piv = k;
        double best = -1.0;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += abs2(a(i, j));
            norms2[j] = s;
            if (s > best) {
                best = s;
                piv = j;
            }
        }
        if (piv != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, piv));
            std::swap(norms2[k], norms2[piv]);
            std::swap(col_of[k], col_of[piv]);
        }
        const double colnorm = std::sqrt(std::max(best, 0.0));
        if (k == 0) leading = colnorm;
        if (colnorm <= 1e-14 * leading) {
            rank_limit = k;
            break;
        }

        // Householder reflector annihilating a(k+1..m-1, k).
        Complex alpha = a(k, k);
        const double aalpha = std::abs(alpha);
        const Complex phase = aalpha > 0.0 ? alpha / aalpha : Complex(1.0, 0.0);
        const Complex beta = -phase * colnorm;
        Complex v0 = alpha - beta;
        a(k, k) = beta;
        rdiag[k] = std::abs(beta);
        double vnorm2 = abs2(v0);
        for (std::size_t i = k + 1; i < m; ++i) vnorm2 += abs2(a(i, k));
        if (vnorm2 == 0.0) {
            tau[k] = Complex(0.0, 0.0);
            continue;
        }
        // Reflector form: v = (v0, a(k+1..,k)), H = I - 2 v v^H / ||v||^2.
        const double inv_vnorm2 = 1.0 / vnorm2;
        for (std::size_t j = k + 1; j < n; ++j) {
            Complex dot = std::conj(v0) * a(k, j);
            for (std::size_t i = k + 1; i < m; ++i) dot += std::conj(a(i, k)) * a(i, j);
            dot *= 2.0 * inv_vnorm2;
            a(k, j) -= dot * v0;
            for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= dot * a(i, k);
        }
        // Stash v0 where the reflector expects it; beta kept in rdiag.
        tau[k] = v0;
    }

    std::size_t rank = 0;
    for (std::size_t k = 0; k < rank_limit; ++k) {
        if (rdiag[k] > 1e-14 * rdiag[0]) rank = k + 1;
    }
    if (rank == 0) throw AllZeroInput();

    // Q = H_0 H_1 ... applied to the first `rank` identity columns.
    DenseMatrix q(m, rank);
    for (std::size_t j = 0; j < rank; ++j) q(j, j) = 1.0;
    for (std::size_t k = std::min(rank_limit, steps); k-- > 0;) {
        const Complex v0 = tau[k];
        double vnorm2 = abs2(v0);
        for (std::size_t i = k + 1; i < m; ++i) vnorm2 += abs2(a(i, k));
        if (vnorm2 == 0.0) continue;
        const double scale = 2.0 / vnorm2;
        for (std::size_t j = 0; j < rank; ++j) {
            Complex dot = std::conj(v0) * q(k, j);
            for (std::size_t i = k + 1; i < m; ++i) dot += std::conj(a(i, k)) * q(i, j);
            dot *= scale;
            q(k, j) -= dot * v0;
            for (std::size_t i = k + 1; i < m; ++i) q(i, j) -= dot * a(i, k);
        }
    }
    return q;
}

SvdResult svd(const DenseMatrix& x, bool want_vectors) {
    const bool transposed = x.rows() < x.cols();
    DenseMatrix a = transposed ? adjoint(x) : x;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    SvdResult result;
    if (n == 0 || m == 0) return result;

    DenseMatrix v = DenseMatrix::identity(n);
    const std::size_t max_sweeps = 100 * std::max<std::size_t>(n, 1);
    const double tol = 1e-15;
    bool converged = (n == 1);
    for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq(0.0, 0.0);
                const Complex* cp = a.col(p);
                const Complex* cq = a.col(q);
                for (std::size_t i = 0; i < m; ++i) {
                    app += abs2(cp[i]);
                    aqq += abs2(cq[i]);
                    apq += std::conj(cp[i]) * cq[i];
                }
                const double scale = std::sqrt(app * aqq);
                const double off = std::abs(apq);
                if (off <= tol * scale || scale == 0.0) continue;
                converged = false;
                const Complex phase = apq / off;
                const double tau_ = (aqq - app) / (2.0 * off);
                const double t = (tau_ >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau_) + std::sqrt(1.0 + tau_ * tau_));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Complex se = s * phase;
                const Complex sec = s * std::conj(phase);
                Complex* wp = a.col(p);
                Complex* wq = a.col(q);
                for (std::size_t i = 0; i < m; ++i) {
                    const Complex zp = wp[i], zq = wq[i];
                    wp[i] = c * zp - sec * zq;
                    wq[i] = se * zp + c * zq;
                }
                Complex* vp = v.col(p);
                Complex* vq = v.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex zp = vp[i], zq = vq[i];
                    vp[i] = c * zp - sec * zq;
                    vq[i] = se * zp + c * zq;
                }
            }
        }
    }
    if (!converged)
        throw ConvergenceFailure("svd: one-sided Jacobi failed to converge within the sweep cap");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += abs2(a(i, j));
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    result.singular_values.resize(n);
    for (std::size_t j = 0; j < n; ++j) result.singular_values[j] = sigma[order[j]];

    if (want_vectors) {
        DenseMatrix u(m, n);
        DenseMatrix vs(n, n);
        std::size_t filled = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t src = order[j];
            std::copy(v.col(src), v.col(src) + n, vs.col(j));
            if (sigma[src] > 1e-300) {
                const double inv = 1.0 / sigma[src];
                for (std::size_t i = 0; i < m; ++i) u(i, j) = a(i, src) * inv;
                filled = j + 1;
            }
        }
        // Complete zero-sigma columns with canonical directions orthogonal to the rest.
        for (std::size_t j = filled; j < n; ++j) {
            for (std::size_t cand = 0; cand < m; ++cand) {
                std::vector<Complex> e(m, Complex(0.0, 0.0));
                e[cand] = 1.0;
                for (std::size_t l = 0; l < j; ++l) {
                    Complex dot(0.0, 0.0);
                    for (std::size_t i = 0; i < m; ++i) dot += std::conj(u(i, l)) * e[i];
                    for (std::size_t i = 0; i < m; ++i) e[i] -= dot * u(i, l);
                }
                const double nrm = vector_norm(e);
                if (nrm > 0.5) {
                    for (std::size_t i = 0; i < m; ++i) u(i, j) = e[i] / nrm;
                    break;
                }
            }
        }
        if (transposed) {
            result.left_vectors = vs;
            result.right_vectors = u;
        } else {
            result.left_vectors = u;
            result.right_vectors = vs;
        }
    }
    return result;
}

namespace {

// Givens rotation with real cosine: [c, s; -conj(s), c] * [f; g] = [r; 0].
void make_givens(Complex f, Complex g, double& c, Complex& s) {
    if (g == Complex(0.0, 0.0)) {
        c = 1.0;
        s = Complex(0.0, 0.0);
        return;
    }
    if (f == Complex(0.0, 0.0)) {
        c = 0.0;
        s = std::conj(g) / std::abs(g);
        return;
    }
    const double af = std::abs(f);
    const double denom = std::sqrt(af * af + abs2(g));
    c = af / denom;
    s = (f / af) * std::conj(g) / denom;
}

struct GivensSeq {
    std::size_t p;
    double c;
    Complex s;
};

Complex wilkinson_shift(const DenseMatrix& h, std::size_t hi) {
    const Complex a = h(hi - 1, hi - 1);
    const Complex b = h(hi - 1, hi);
    const Complex c = h(hi, hi - 1);
    const Complex d = h(hi, hi);
    const Complex tr_half = 0.5 * (a + d);
    const Complex disc = std::sqrt(tr_half * tr_half - (a * d - b * c));
    const Complex mu1 = tr_half + disc;
    const Complex mu2 = tr_half - disc;
    return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

SchurResult complex_eig(const DenseMatrix& a_in) {
    const std::size_t n = a_in.rows();
    SchurResult res;
    if (n == 0) {
        res.unitary_factor = DenseMatrix(0, 0);
        res.triangular_factor = DenseMatrix(0, 0);
        return res;
    }

    DenseMatrix h = a_in;
    DenseMatrix q = DenseMatrix::identity(n);

    // Hessenberg reduction with Householder reflectors, accumulated into q.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colnorm2 += abs2(h(i, k));
        const double colnorm = std::sqrt(colnorm2);
        if (colnorm == 0.0) continue;
        Complex alpha = h(k + 1, k);
        const double aalpha = std::abs(alpha);
        const Complex phase = aalpha > 0.0 ? alpha / aalpha : Complex(1.0, 0.0);
        const Complex beta = -phase * colnorm;
        std::vector<Complex> v(n - k - 1);
        v[0] = alpha - beta;
        for (std::size_t i = k + 2; i < n; ++i) v[i - k - 1] = h(i, k);
        double vnorm2 = 0.0;
        for (const Complex& z : v) vnorm2 += abs2(z);
        if (vnorm2 == 0.0) continue;
        const double scale = 2.0 / vnorm2;
        h(k + 1, k) = beta;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
        // Left: rows k+1..n-1 on columns k+1..n-1.
        for (std::size_t j = k + 1; j < n; ++j) {
            Complex dot(0.0, 0.0);
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i - k - 1]) * h(i, j);
            dot *= scale;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * v[i - k - 1];
        }
        // Right: all rows on columns k+1..n-1, swept column-wise as
        // H <- H - (H v) (scale v)^H to stay cache friendly.
        std::vector<Complex> w(n, Complex(0.0, 0.0));
        for (std::size_t j = k + 1; j < n; ++j) {
            const Complex vj = v[j - k - 1];
            if (vj == Complex(0.0, 0.0)) continue;
            const Complex* col = h.col(j);
            for (std::size_t i = 0; i < n; ++i) w[i] += col[i] * vj;
        }
        for (std::size_t i = 0; i < n; ++i) w[i] *= scale;
        for (std::size_t j = k + 1; j < n; ++j) {
            const Complex cj = std::conj(v[j - k - 1]);
            if (cj == Complex(0.0, 0.0)) continue;
            Complex* col = h.col(j);
            for (std::size_t i = 0; i < n; ++i) col[i] -= w[i] * cj;
        }
        std::fill(w.begin(), w.end(), Complex(0.0, 0.0));
        for (std::size_t j = k + 1; j < n; ++j) {
            const Complex vj = v[j - k - 1];
            if (vj == Complex(0.0, 0.0)) continue;
            const Complex* col = q.col(j);
            for (std::size_t i = 0; i < n; ++i) w[i] += col[i] * vj;
        }
        for (std::size_t i = 0; i < n; ++i) w[i] *= scale;
        for (std::size_t j = k + 1; j < n; ++j) {
            const Complex cj = std::conj(v[j - k - 1]);
            if (cj == Complex(0.0, 0.0)) continue;
            Complex* col = q.col(j);
            for (std::size_t i = 0; i < n; ++i) col[i] -= w[i] * cj;
        }
    }

    // Implicit single-shift QR with deflation on the active block [lo, hi].
    double hnorm = frobenius_norm(h);
    if (hnorm == 0.0) hnorm = 1.0;
    std::size_t hi = n - 1;
    std::size_t since_deflation = 0;
    const std::size_t iteration_cap = 30 * n;
    std::size_t stalled = 0;

    while (hi > 0) {
        // Zero out negligible subdiagonals, then find the active block start.
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            if (sub <= kMachineEpsilon * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)) + hnorm * 1e-4)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            hi = hi - 1;
            since_deflation = 0;
            stalled = 0;
            continue;
        }

        if (++since_deflation > iteration_cap)
            throw ConvergenceFailure("complex_eig: QR iteration exceeded 30n sweeps without deflation");

        Complex mu = wilkinson_shift(h, hi);
        if (++stalled % 12 == 0) {
            // Exceptional shift to break symmetric stalls.
            mu = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), 0.0) * 0.75;
        }

        // Bulge: rotate rows/cols lo, lo+1 against (h(lo,lo)-mu, h(lo+1,lo)), then chase.
        double c;
        Complex s;
        make_givens(h(lo, lo) - mu, h(lo + 1, lo), c, s);
        for (std::size_t k = lo; k < hi; ++k) {
            if (k > lo) make_givens(h(k, k - 1), h(k + 1, k - 1), c, s);
            const std::size_t colstart = k == lo ? lo : k - 1;
            // Left rotation on rows k, k+1.
            for (std::size_t j = colstart; j < n; ++j) {
                const Complex t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = c * t1 + s * t2;
                h(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
            if (k > lo) h(k + 1, k - 1) = 0.0;  // bulge annihilated by construction
            // Right rotation on columns k, k+1.
            const std::size_t rowend = std::min(hi, k + 2);
            for (std::size_t i = 0; i <= rowend; ++i) {
                const Complex t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = c * t1 + std::conj(s) * t2;
                h(i, k + 1) = -s * t1 + c * t2;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const Complex t1 = q(i, k), t2 = q(i, k + 1);
                q(i, k) = c * t1 + std::conj(s) * t2;
                q(i, k + 1) = -s * t1 + c * t2;
            }
        }
    }

    for (std::size_t j = 0; j + 1 < n; ++j) h(j + 1, j) = 0.0;
    res.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.eigenvalues[i] = h(i, i);
    res.unitary_factor = std::move(q);
    res.triangular_factor = std::move(h);
    return res;
}

DenseMatrix right_eigenvectors(const SchurResult& schur) {
    const DenseMatrix& t = schur.triangular_factor;
    const DenseMatrix& q = schur.unitary_factor;
    const std::size_t n = t.rows();
    DenseMatrix vectors(n, n);
    const double tnorm = std::max(frobenius_norm(t), 1e-300);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex lambda = schur.eigenvalues[i];
        std::vector<Complex> y(n, Complex(0.0, 0.0));
        y[i] = 1.0;
        for (std::size_t k = i; k-- > 0;) {
            Complex rhs(0.0, 0.0);
            for (std::size_t j = k + 1; j <= i; ++j) rhs += t(k, j) * y[j];
            Complex den = t(k, k) - lambda;
            if (std::abs(den) < kMachineEpsilon * tnorm)
                den = Complex(kMachineEpsilon * tnorm, 0.0);
            y[k] = -rhs / den;
        }
        // Back to the original basis, normalized.
        std::vector<Complex> xv(n, Complex(0.0, 0.0));
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex yj = y[j];
            if (yj == Complex(0.0, 0.0)) continue;
            const Complex* qj = q.col(j);
            for (std::size_t r = 0; r < n; ++r) xv[r] += qj[r] * yj;
        }
        const double nrm = vector_norm(xv);
        if (nrm > 0.0)
            for (std::size_t r = 0; r < n; ++r) vectors(r, i) = xv[r] / nrm;
    }
    return vectors;
}

DenseLu::DenseLu(const DenseMatrix& a) : lu_(a), pivots_(a.rows()) {
    const std::size_t n = lu_.rows();
    double scale = 0.0;
    for (const Complex& z : lu_.data()) scale = std::max(scale, std::abs(z));
    if (scale == 0.0 && n > 0) throw SingularMatrix(0);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best <= 1e-14 * scale || best < 1e-300) throw SingularMatrix(k);
        pivots_[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        const Complex pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex factor = lu_(i, k) / pivot;
            lu_(i, k) = factor;
            if (factor == Complex(0.0, 0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
        }
    }
}

void DenseLu::solve_in_place(std::vector<Complex>& x) const {
    const std::size_t n = lu_.rows();
    for (std::size_t k = 0; k < n; ++k)
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex xk = x[k];
        if (xk == Complex(0.0, 0.0)) continue;
        for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * xk;
    }
    for (std::size_t k = n; k-- > 0;) {
        Complex sum = x[k];
        for (std::size_t l = k + 1; l < n; ++l) sum -= lu_(k, l) * x[l];
        x[k] = sum / lu_(k, k);
    }
}

std::vector<Complex> DenseLu::solve(const std::vector<Complex>& b) const {
    std::vector<Complex> x = b;
    solve_in_place(x);
    return x;
}

DenseMatrix DenseLu::solve(const DenseMatrix& b) const {
    DenseMatrix x = b;
    std::vector<Complex> column(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        std::copy(x.col(j), x.col(j) + b.rows(), column.begin());
        solve_in_place(column);
        std::copy(column.begin(), column.end(), x.col(j));
    }
    return x;
}

DenseMatrix dense_solve(const DenseMatrix& a, const DenseMatrix& b) {
    return DenseLu(a).solve(b);
}

}  // namespace rfeig
