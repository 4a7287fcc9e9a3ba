#pragma once

#include <cstddef>
#include <vector>

#include "rfeig/util.hpp"

namespace rfeig {

// Search region: the disk of the eigenvalue problem and its counter-clockwise
// boundary circle.
struct Disk {
    Complex center;
    double radius = 1.0;

    bool contains(Complex z) const { return std::abs(z - center) <= radius; }
};

// Poles and weights of the rational filter rho(z) = sum_j w_j / (z - z_j)
// discretizing the Cauchy projector on the disk boundary.
struct QuadratureRule {
    Disk disk;
    std::size_t order = 0;
    std::vector<Complex> poles;
    std::vector<Complex> weights;
};

// Pole phase placement on the circle. Midpoint keeps poles off the positive
// real axis so real-axis eigenvalues of real pencils cannot collide with one;
// the root-of-unity variant admits the closed form rho(z) = 1/(1 - z^N) on the
// unit disk and backs the filter tests.
enum class PhaseConvention { midpoint, root_of_unity };

QuadratureRule trapezoidal_rule(const Disk& disk, std::size_t order,
                                PhaseConvention convention = PhaseConvention::midpoint,
                                double extra_rotation = 0.0);

Complex rho_eval(const QuadratureRule& rule, Complex z);

// Same rule with every pole phase advanced by delta radians (weights follow).
// Used to step off a spectrum collision.
QuadratureRule rotate_rule(const QuadratureRule& rule, double delta);

struct GridSpec {
    double x_min, x_max, y_min, y_max;
    std::size_t nx = 2;
    std::size_t ny = 2;
};

struct GridPoint {
    double x, y, modulus;
};

// Row-major sample table of |rho| over a rectangle; points within 1e-14*r of a
// pole carry +inf.
std::vector<GridPoint> filter_grid(const QuadratureRule& rule, const GridSpec& grid);

}  // namespace rfeig
