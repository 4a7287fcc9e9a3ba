#pragma once

#include "rfeig/deflation.hpp"
#include "rfeig/hrr.hpp"
#include "rfeig/range_finder.hpp"
#include "rfeig/resolvent.hpp"
#include "rfeig/synth.hpp"

namespace rfeig {

struct SolverConfig {
    Disk disk{Complex(0.0, 0.0), 1.0};
    std::size_t n_poles = 16;
    std::size_t parts = 8;
    std::size_t psi = 1;
    std::size_t phi = kAutoPhi;
    RangeFinderConfig range_finder;
    double spurious_tol = 1e-3;
    std::size_t rsi_subspace = 0;  // m; must be >= 1 for rsi
    double rsi_tol = 1e-10;
    std::size_t rsi_max_iterations = 50;
    unsigned threads = 1;
    std::size_t interface_cap = SchurCache::kDefaultInterfaceCap;
    std::size_t block_dense_cap = 3000;
};

// Prototype solver: randomized range finding over the full filtered operator
// rho(M^{-1}A), then one harmonic Rayleigh-Ritz extraction.
EigenReport algorithm2(const SparsePencil& pencil, const SolverConfig& config);

// Partitioned solver: reorders the pencil, builds per-pole Schur complements,
// and runs a joint pair of range finders (interface and coupling operators
// share every interface solve) before extraction on Z = blkdiag(W, G).
EigenReport algorithm3(const SparsePencil& pencil, const SolverConfig& config);

// Deflated-series solver: the interface basis G comes from the range finder,
// the interior basis W_{phi,psi} from the deflated Neumann expansion of the
// interior resolvent.
EigenReport algorithm4(const SparsePencil& pencil, const SolverConfig& config);

// Rational subspace iteration baseline with an m-dimensional basis filtered
// each sweep and extracted through HRR. Optional warm start columns are padded
// with random draws up to m.
EigenReport rsi(const SparsePencil& pencil, const SolverConfig& config,
                const DenseMatrix* warm_start = nullptr);

// Disk around the `count` smallest-modulus values: 1.001 times the radius of
// their minimal enclosing circle (testing helper; production passes a disk).
Disk disk_around_smallest(const std::vector<Complex>& values, std::size_t count,
                          double inflation = 1.001);

}  // namespace rfeig
