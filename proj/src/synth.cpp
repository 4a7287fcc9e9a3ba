#include "rfeig/synth.hpp"

#include <algorithm>
#include <cmath>

#include "rfeig/errors.hpp"

namespace rfeig {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

std::vector<Complex> sample_spectrum(const SynthOptions& options, Rng& rng) {
    std::vector<Complex> values;
    values.reserve(options.n);
    const Complex center = options.disk.center;
    const double radius = options.disk.radius;
    const double min_sep = 0.02 * radius;

    auto place = [&](double rmin, double rmax) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const double rho = rmin + (rmax - rmin) * rng.uniform();
            const Complex candidate = center + std::polar(rho * radius, rng.uniform(0.0, kTwoPi));
            bool clear = true;
            for (const Complex& existing : values)
                if (std::abs(candidate - existing) < min_sep) {
                    clear = false;
                    break;
                }
            if (clear) {
                values.push_back(candidate);
                return;
            }
        }
        values.push_back(center + std::polar(0.5 * (rmin + rmax) * radius,
                                             rng.uniform(0.0, kTwoPi)));
    };

    for (std::size_t i = 0; i < options.inside_count; ++i)
        place(options.inside_radius_min, options.inside_radius_max);

    std::vector<SpectrumRing> rings = options.outside_rings;
    if (rings.empty()) rings.push_back({options.n - options.inside_count, 8.0, 16.0});
    for (const SpectrumRing& ring : rings)
        for (std::size_t i = 0; i < ring.count; ++i) place(ring.radius_min, ring.radius_max);

    if (values.size() != options.n)
        throw Error("synth: ring counts plus inside count must equal n");
    return values;
}

SparseMatrix banded_mass(std::size_t n, Rng& rng) {
    // Diagonally dominant banded mass keeps the pencil regular and M_F nonzero
    // after reordering.
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, Complex(1.0, 0.0)});
        for (std::size_t off = 1; off <= 2; ++off)
            if (i + off < n) {
                if (rng.uniform() < 0.6) t.push_back({i, i + off, 0.15 * rng.complex_gaussian()});
                if (rng.uniform() < 0.6) t.push_back({i + off, i, 0.15 * rng.complex_gaussian()});
            }
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

namespace {

// T-space description: a strictly upper-triangular sparse matrix, the
// eigenvector columns in the same coordinates, and the planted value order.
struct TriangularPlant {
    SparseMatrix t_mat;
    DenseMatrix eigenvectors;  // column i pairs with spectrum[i]
};

// Banded upper-triangular layout: the sought values go to middle diagonal
// slots because a triangular eigenvector only touches indices up to its slot
// (and its left partner from the slot on); extreme slots would leave them
// supported on a handful of vertices.
TriangularPlant build_banded(const SynthOptions& options, const std::vector<Complex>& spectrum,
                             Rng& rng) {
    const std::size_t n = options.n;
    std::vector<std::size_t> diag_slot(n);
    {
        std::vector<std::size_t> slots(n);
        for (std::size_t i = 0; i < n; ++i) slots[i] = i;
        for (std::size_t i = n; i-- > 1;) std::swap(slots[i], slots[rng.index(i + 1)]);
        const std::size_t lo = n / 3;
        const std::size_t hi = std::max(lo + 1, (2 * n) / 3);
        std::vector<std::size_t> middle, rest;
        for (std::size_t slot : slots)
            (slot >= lo && slot < hi ? middle : rest).push_back(slot);
        std::vector<std::size_t> value_of_slot(n, 0);
        std::size_t mid_next = 0, rest_next = 0;
        for (std::size_t value = 0; value < n; ++value) {
            const bool sought = value < options.inside_count && mid_next < middle.size();
            const std::size_t slot = sought ? middle[mid_next++]
                                            : (rest_next < rest.size() ? rest[rest_next++]
                                                                       : middle[mid_next++]);
            value_of_slot[slot] = value;
        }
        for (std::size_t j = 0; j < n; ++j) diag_slot[j] = value_of_slot[j];
    }

    DenseMatrix t_band(options.bandwidth + 1, n);  // t_band(k, j) = T(j-k, j)
    std::vector<SparseMatrix::Triplet> t_triplets;
    const double radius = options.disk.radius;
    for (std::size_t j = 0; j < n; ++j) {
        t_triplets.push_back({j, j, spectrum[diag_slot[j]]});
        t_band(0, j) = spectrum[diag_slot[j]];
        for (std::size_t k = 1; k <= options.bandwidth && k <= j; ++k) {
            if (rng.uniform() < 0.8) {
                double scale = options.coupling_scale * radius;
                if (options.gap_scaled_coupling) {
                    const double row_gap =
                        std::abs(spectrum[diag_slot[j - k]] - options.disk.center);
                    scale = options.coupling_scale * std::max(row_gap, 0.5 * radius) /
                            std::sqrt(double(options.bandwidth));
                }
                const Complex value = scale * rng.complex_gaussian();
                t_triplets.push_back({j - k, j, value});
                t_band(k, j) = value;
            }
        }
    }

    TriangularPlant plant;
    plant.t_mat = SparseMatrix::from_triplets(n, n, std::move(t_triplets));
    plant.eigenvectors = DenseMatrix(n, n);
    std::vector<std::size_t> position_of(n);
    for (std::size_t j = 0; j < n; ++j) position_of[diag_slot[j]] = j;
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pos = position_of[i];
        const Complex lambda = spectrum[i];
        std::fill(y.begin(), y.begin() + pos + 1, Complex(0.0, 0.0));
        y[pos] = 1.0;
        for (std::size_t k = pos; k-- > 0;) {
            Complex rhs(0.0, 0.0);
            const std::size_t reach = std::min(pos, k + options.bandwidth);
            for (std::size_t j = k + 1; j <= reach; ++j) {
                const Complex coupling = t_band(j - k, j);
                if (coupling != Complex(0.0, 0.0)) rhs += coupling * y[j];
            }
            if (rhs == Complex(0.0, 0.0)) {
                y[k] = 0.0;
                continue;
            }
            Complex den = t_band(0, k) - lambda;
            if (std::abs(den) < 1e-300) den = Complex(1e-300, 0.0);
            y[k] = -rhs / den;
        }
        double norm2 = 0.0;
        for (std::size_t k = 0; k <= pos; ++k) norm2 += std::norm(y[k]);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t k = 0; k <= pos; ++k) plant.eigenvectors(k, i) = y[k] * inv;
    }
    return plant;
}

// Hub layout: T = [[T_far, G], [0, C_in]] with the sought values on the
// trailing block's diagonal and a dense coupling strip G. Sought right
// eigenvectors are [(lambda I - T_far)^{-1} G c; c], delocalized over the
// whole space, and the hub columns touch most rows so those vertices land on
// every partition boundary.
TriangularPlant build_hub(const SynthOptions& options, const std::vector<Complex>& spectrum,
                          Rng& rng) {
    const std::size_t n = options.n;
    const std::size_t k = options.inside_count;
    const std::size_t nf = n - k;
    const double radius = options.disk.radius;

    // Far block: banded upper triangular over slots 0..nf-1, values shuffled.
    std::vector<std::size_t> far_slot(nf);
    for (std::size_t i = 0; i < nf; ++i) far_slot[i] = i;
    for (std::size_t i = nf; i-- > 1;) std::swap(far_slot[i], far_slot[rng.index(i + 1)]);

    DenseMatrix t_band(options.bandwidth + 1, nf);
    std::vector<SparseMatrix::Triplet> t_triplets;
    for (std::size_t j = 0; j < nf; ++j) {
        const Complex diag = spectrum[k + far_slot[j]];
        t_triplets.push_back({j, j, diag});
        t_band(0, j) = diag;
        for (std::size_t off = 1; off <= options.bandwidth && off <= j; ++off)
            if (rng.uniform() < 0.8) {
                const Complex value = options.coupling_scale * radius * rng.complex_gaussian();
                t_triplets.push_back({j - off, j, value});
                t_band(off, j) = value;
            }
    }
    // Trailing sought block: upper triangular with mild couplings.
    DenseMatrix c_in(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        c_in(j, j) = spectrum[j];
        t_triplets.push_back({nf + j, nf + j, spectrum[j]});
        for (std::size_t i = 0; i < j; ++i)
            if (rng.uniform() < 0.5) {
                c_in(i, j) = 0.1 * radius * rng.complex_gaussian();
                t_triplets.push_back({nf + i, nf + j, c_in(i, j)});
            }
    }
    // Sparse coupling strip from the sought block into the far rows: a few
    // scattered couplings per hub column keep every hub on a partition
    // boundary without turning the whole graph into interface.
    const double strip_density = std::min(1.0, 8.0 / double(std::max<std::size_t>(nf, 1)));
    DenseMatrix strip(nf, k);
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t placed = 0;
        for (std::size_t i = 0; i < nf; ++i)
            if (rng.uniform() < strip_density) {
                strip(i, j) = 0.3 * radius * rng.complex_gaussian();
                t_triplets.push_back({i, nf + j, strip(i, j)});
                ++placed;
            }
        if (placed == 0 && nf > 0) {
            const std::size_t i = rng.index(nf);
            strip(i, j) = 0.3 * radius * rng.complex_gaussian();
            t_triplets.push_back({i, nf + j, strip(i, j)});
        }
    }

    TriangularPlant plant;
    plant.t_mat = SparseMatrix::from_triplets(n, n, std::move(t_triplets));
    plant.eigenvectors = DenseMatrix(n, n);

    // Sought family: back-substitution inside C_in, then the far part through
    // the (triangular) shifted far block.
    std::vector<Complex> c(k), rhs(nf), x1(nf);
    for (std::size_t i = 0; i < k; ++i) {
        std::fill(c.begin(), c.end(), Complex(0.0, 0.0));
        c[i] = 1.0;
        for (std::size_t kk = i; kk-- > 0;) {
            Complex acc(0.0, 0.0);
            for (std::size_t j = kk + 1; j <= i; ++j) acc += c_in(kk, j) * c[j];
            if (acc == Complex(0.0, 0.0)) continue;
            Complex den = c_in(kk, kk) - spectrum[i];
            if (std::abs(den) < 1e-300) den = Complex(1e-300, 0.0);
            c[kk] = -acc / den;
        }
        // rhs = G c, then solve (lambda I - T_far) x1 = rhs backwards.
        for (std::size_t r = 0; r < nf; ++r) {
            Complex acc(0.0, 0.0);
            for (std::size_t j = 0; j < k; ++j)
                if (strip(r, j) != Complex(0.0, 0.0)) acc += strip(r, j) * c[j];
            rhs[r] = acc;
        }
        for (std::size_t r = nf; r-- > 0;) {
            Complex acc = rhs[r];
            const std::size_t reach = std::min(nf - 1, r + options.bandwidth);
            for (std::size_t j = r + 1; j <= reach; ++j) {
                const Complex coupling = t_band(j - r, j);
                if (coupling != Complex(0.0, 0.0)) acc += coupling * x1[j];
            }
            x1[r] = acc / (spectrum[i] - t_band(0, r));
        }
        double norm2 = 0.0;
        for (std::size_t r = 0; r < nf; ++r) norm2 += std::norm(x1[r]);
        for (std::size_t j = 0; j < k; ++j) norm2 += std::norm(c[j]);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < nf; ++r) plant.eigenvectors(r, i) = x1[r] * inv;
        for (std::size_t j = 0; j < k; ++j) plant.eigenvectors(nf + j, i) = c[j] * inv;
    }
    // Far family: plain triangular back-substitution, zero hub part.
    std::vector<Complex> y(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        std::size_t pos = 0;
        for (std::size_t j = 0; j < nf; ++j)
            if (far_slot[j] == i) pos = j;
        const Complex lambda = spectrum[k + i];
        std::fill(y.begin(), y.begin() + pos + 1, Complex(0.0, 0.0));
        y[pos] = 1.0;
        for (std::size_t kk = pos; kk-- > 0;) {
            Complex acc(0.0, 0.0);
            const std::size_t reach = std::min(pos, kk + options.bandwidth);
            for (std::size_t j = kk + 1; j <= reach; ++j) {
                const Complex coupling = t_band(j - kk, j);
                if (coupling != Complex(0.0, 0.0)) acc += coupling * y[j];
            }
            if (acc == Complex(0.0, 0.0)) {
                y[kk] = 0.0;
                continue;
            }
            Complex den = t_band(0, kk) - lambda;
            if (std::abs(den) < 1e-300) den = Complex(1e-300, 0.0);
            y[kk] = -acc / den;
        }
        double norm2 = 0.0;
        for (std::size_t kk = 0; kk <= pos; ++kk) norm2 += std::norm(y[kk]);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t kk = 0; kk <= pos; ++kk) plant.eigenvectors(kk, k + i) = y[kk] * inv;
    }
    return plant;
}

}  // namespace

SynthPencil make_planted_pencil(const SynthOptions& options) {
    const std::size_t n = options.n;
    if (options.inside_count > n) throw Error("synth: inside count exceeds dimension");
    Rng rng(options.seed);

    std::vector<Complex> spectrum = sample_spectrum(options, rng);
    TriangularPlant plant = options.hub_coupled_inside ? build_hub(options, spectrum, rng)
                                                       : build_banded(options, spectrum, rng);

    // Random symmetric permutation hides the triangular structure.
    std::vector<std::size_t> forward(n);
    for (std::size_t i = 0; i < n; ++i) forward[i] = i;
    if (options.scramble)
        for (std::size_t i = n; i-- > 1;) std::swap(forward[i], forward[rng.index(i + 1)]);
    const Permutation perm(forward);
    const SparseMatrix scrambled = permute_symmetric(plant.t_mat, perm);

    SynthPencil out;
    if (options.identity_mass) {
        out.pencil = SparsePencil(scrambled, SparseMatrix::identity(n));
    } else {
        // The mass band must live in the same coordinates as T so the pencil
        // graph keeps its structure under the shared permutation.
        const SparseMatrix mass_t = banded_mass(n, rng);
        out.pencil = SparsePencil(permute_symmetric(sparse_multiply(mass_t, plant.t_mat), perm),
                                  permute_symmetric(mass_t, perm));
    }

    out.eigenvalues = spectrum;
    out.eigenvectors = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < n; ++r)
            out.eigenvectors(perm(r), i) = plant.eigenvectors(r, i);

    for (std::size_t i = 0; i < n; ++i)
        if (options.disk.contains(spectrum[i])) out.inside_indices.push_back(i);
    return out;
}

namespace {

Disk circle_two(Complex a, Complex b) {
    const Complex center = 0.5 * (a + b);
    return Disk{center, std::abs(a - center)};
}

bool circumcircle(Complex a, Complex b, Complex c, Disk& out) {
    const double ax = a.real(), ay = a.imag();
    const double bx = b.real(), by = b.imag();
    const double cx = c.real(), cy = c.imag();
    const double det = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (std::abs(det) < 1e-14 * (std::abs(a) + std::abs(b) + std::abs(c) + 1.0)) return false;
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const Complex center((a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / det,
                         (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / det);
    out = Disk{center, std::abs(a - center)};
    return true;
}

bool inside(const Disk& disk, Complex p) {
    return std::abs(p - disk.center) <= disk.radius * (1.0 + 1e-12) + 1e-300;
}

Disk welzl(std::vector<Complex>& points, std::size_t limit, std::vector<Complex>& boundary) {
    if (limit == 0 || boundary.size() == 3) {
        switch (boundary.size()) {
            case 0:
                return Disk{Complex(0.0, 0.0), 0.0};
            case 1:
                return Disk{boundary[0], 0.0};
            case 2:
                return circle_two(boundary[0], boundary[1]);
            default: {
                Disk disk;
                if (circumcircle(boundary[0], boundary[1], boundary[2], disk)) return disk;
                // Collinear support: widest two-point circle.
                Disk best = circle_two(boundary[0], boundary[1]);
                for (const Disk candidate :
                     {circle_two(boundary[0], boundary[2]), circle_two(boundary[1], boundary[2])})
                    if (candidate.radius > best.radius) best = candidate;
                return best;
            }
        }
    }
    const Complex p = points[limit - 1];
    Disk disk = welzl(points, limit - 1, boundary);
    if (inside(disk, p)) return disk;
    boundary.push_back(p);
    disk = welzl(points, limit - 1, boundary);
    boundary.pop_back();
    return disk;
}

}  // namespace

Disk minimal_enclosing_disk(const std::vector<Complex>& points) {
    if (points.empty()) return Disk{Complex(0.0, 0.0), 0.0};
    std::vector<Complex> shuffled = points;
    Rng rng(0x5eed);
    for (std::size_t i = shuffled.size(); i-- > 1;) std::swap(shuffled[i], shuffled[rng.index(i + 1)]);
    std::vector<Complex> boundary;
    return welzl(shuffled, shuffled.size(), boundary);
}

}  // namespace rfeig
