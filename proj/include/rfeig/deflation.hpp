#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rfeig/filter.hpp"
#include "rfeig/ledger.hpp"
#include "rfeig/partition.hpp"
#include "rfeig/resolvent.hpp"

namespace rfeig {

inline constexpr std::size_t kAutoPhi = std::numeric_limits<std::size_t>::max();

// Eigendecomposition data of the interior pencil (B, M_B), computed block by
// block, with the phi eigenvalues nearest the disk center selected for
// deflation. Left vectors come from the inverse of M_B V per block, making the
// biorthogonality V_hat^H M_B V = I exact by construction.
struct BlockEigen {
    std::size_t phi = 0;
    std::vector<Complex> selected_values;
    DenseMatrix selected_right;  // V_phi, d x phi
    DenseMatrix selected_left;   // V_hat_phi, d x phi
    std::vector<Complex> all_values;  // every interior eigenvalue
    std::vector<char> deflated;       // per all_values entry
};

BlockEigen block_eig(const PartitionedPencil& partitioned, const Disk& disk,
                     std::size_t phi = kAutoPhi, std::size_t dense_cap = 3000);

// Deflated interior resolvent B~(zc) = (I - V_phi V_hat_phi^H M_B) B(zc)^{-1}.
class DeflatedResolvent {
public:
    DeflatedResolvent(const PartitionedPencil& partitioned, const Disk& disk,
                      std::size_t phi = kAutoPhi, std::size_t dense_cap = 3000);

    const BlockEigen& eigen() const { return eigen_; }
    Complex center() const { return zc_; }
    std::size_t interior_dimension() const { return d_; }
    const PartitionedPencil& partitioned() const { return *partitioned_; }

    // (I - V_phi V_hat_phi^H M_B) B(zc)^{-1} x; one interior solve.
    std::vector<Complex> apply(const std::vector<Complex>& x) const;
    DenseMatrix apply(const DenseMatrix& x) const;

    // psi-truncated Neumann expansion of the deflated resolvent at lambda:
    // B~(zc) sum_{k=0..psi} [(lambda - zc) M_B B~(zc)]^k x; psi+1 solves.
    std::vector<Complex> neumann(Complex lambda, std::size_t psi,
                                 const std::vector<Complex>& x) const;

    // Spectral surrogate for ||R_psi(lambda)||: sum over non-deflated j of
    // |gamma_j|^{psi+1} / (|delta_j - zc| (1 - |gamma_j|)), +inf if some
    // |gamma_j| >= 1.
    double truncation_bound(Complex lambda, std::size_t psi) const;

    SolveLedger* ledger = nullptr;
    std::string phase = "deflation";

private:
    void project_out(std::vector<Complex>& y) const;

    const PartitionedPencil* partitioned_;
    Complex zc_;
    std::size_t d_;
    BlockEigen eigen_;
    BlockDiagonalSolver center_solver_;
};

// The combined basis W_{phi,psi}: the deflated eigenvectors V_phi, the powers
// of the deflated resolvent applied to F(zc) G, and, when M_F is nonzero, the
// same powers applied to M_F G. Orthonormalized with rank truncation.
DenseMatrix build_w(const DeflatedResolvent& resolvent, const DenseMatrix& g_basis,
                    std::size_t psi);

}  // namespace rfeig
