#pragma once

#include <cstdint>
#include <vector>

#include "rfeig/filter.hpp"
#include "rfeig/sparse.hpp"

namespace rfeig {

// Annulus of planted eigenvalues, radii in units of the disk radius.
struct SpectrumRing {
    std::size_t count = 0;
    double radius_min = 8.0;
    double radius_max = 16.0;
};

struct SynthOptions {
    std::size_t n = 100;
    Disk disk{Complex(0.0, 0.0), 1.0};
    std::size_t inside_count = 10;
    double inside_radius_min = 0.05;  // in units of the disk radius
    double inside_radius_max = 0.5;
    std::vector<SpectrumRing> outside_rings;  // defaults to one far ring of the remainder
    std::size_t bandwidth = 4;
    double coupling_scale = 0.2;  // triangular off-diagonal scale, relative to the radius
    // Scale each row's couplings by that row's distance from the disk center.
    // This keeps the back-substitution decay factor close to coupling_scale
    // itself, delocalizing the eigenvectors across many slots instead of
    // letting far-away diagonal gaps shrink their support to a few entries.
    bool gap_scaled_coupling = false;
    // Hub construction: the sought values live in a trailing block coupled to
    // the banded far block through a dense strip. Their right eigenvectors
    // then spread over the whole space and the hub vertices sit on every
    // partition boundary, so interface-based subspaces always see them. The
    // banded default instead produces localized eigenvectors whose interface
    // content depends on where the partitioner cuts.
    bool hub_coupled_inside = false;
    // When false, skip the final symmetric permutation (tests that need a
    // predictable block layout).
    bool scramble = true;
    bool identity_mass = true;
    std::uint64_t seed = 1;
};

// Pencil with a fully known spectrum: A = M * P^T T P where T is a banded
// upper-triangular matrix carrying the planted eigenvalues on its diagonal and
// P is a random permutation. Eigenpairs of (A, M) are therefore exactly the
// planted values with eigenvectors recovered from T by back-substitution.
struct SynthPencil {
    SparsePencil pencil;
    std::vector<Complex> eigenvalues;        // all n planted values
    DenseMatrix eigenvectors;                // true right eigenvectors, column i for value i
    std::vector<std::size_t> inside_indices; // positions with eigenvalue inside the disk
};

SynthPencil make_planted_pencil(const SynthOptions& options);

// Smallest disk containing the points (Welzl's algorithm); callers inflate the
// radius as needed.
Disk minimal_enclosing_disk(const std::vector<Complex>& points);

}  // namespace rfeig
