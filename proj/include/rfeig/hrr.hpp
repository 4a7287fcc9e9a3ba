#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rfeig/dense.hpp"
#include "rfeig/filter.hpp"
#include "rfeig/ledger.hpp"
#include "rfeig/sparse.hpp"

namespace rfeig {

struct RitzPair {
    Complex value;
    std::vector<Complex> vector;  // unit 2-norm
    double residual = 0.0;
    bool in_disk = false;
};

// Range-finder run statistics carried into reports.
struct RangeFinderRun {
    std::string name;
    std::size_t iterations = 0;
    std::size_t basis_columns = 0;
    double final_ratio = 0.0;
    bool converged = false;
    std::vector<double> ratio_history;
};

struct PartitionSummary {
    std::size_t parts = 0;
    std::vector<std::size_t> interior_sizes;
    std::vector<std::size_t> interface_sizes;
    std::size_t interior_total = 0;
    std::size_t interface_total = 0;
    std::size_t edge_cut = 0;
};

struct EigenReport {
    std::vector<RitzPair> accepted;      // in-disk pairs surviving the purge
    std::size_t spurious_count = 0;      // in-disk pairs discarded by residual
    std::size_t ritz_count = 0;          // finite Ritz values computed
    SolveLedger ledger;
    std::vector<RangeFinderRun> range_finders;
    std::size_t rsi_iterations = 0;
    std::vector<double> rsi_residual_history;
    bool incomplete_capture_warning = false;
    PartitionSummary partition;
    std::map<std::string, double> phase_seconds;
    std::string algorithm;
    std::uint64_t seed = 0;
};

// Projected pencil of the harmonic Rayleigh-Ritz problem
//   G q = (theta - zc) H q,  G = (KZ)^H (KZ),  H = (KZ)^H (MZ),  K = A - zc M.
// Z must have orthonormal columns. Throws EmptyBasis when Z has none.
std::pair<DenseMatrix, DenseMatrix> assemble_hrr(const SparsePencil& pencil, Complex zc,
                                                 const DenseMatrix& z);

// Solves the projected problem through the standard reduction G^{-1} H:
// eigenvalues tau give theta = zc + 1/tau; values with |tau| below 1e-14 of
// the matrix scale are harmonic Ritz values at infinity and are dropped.
// Throws IllConditionedProjection when cond(G) exceeds 1e14.
std::vector<std::pair<Complex, std::vector<Complex>>> hrr_solve(const DenseMatrix& g,
                                                                const DenseMatrix& h, Complex zc);

// rho_hat = ||A x - theta M x|| / (||A x|| + |theta| ||M x||), in [0, 1].
double residual_norm(const SparsePencil& pencil, Complex theta, const std::vector<Complex>& x);

// Full extraction: Ritz pairs of the projected problem, restricted to the
// disk, purged at spurious_tol, vectors normalized.
EigenReport extract(const SparsePencil& pencil, const Disk& disk, const DenseMatrix& z,
                    double spurious_tol = 1e-3);

}  // namespace rfeig
