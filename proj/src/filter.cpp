#include "rfeig/filter.hpp"

#include <cmath>
#include <limits>

#include "rfeig/errors.hpp"

namespace rfeig {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
}

QuadratureRule trapezoidal_rule(const Disk& disk, std::size_t order, PhaseConvention convention,
                                double extra_rotation) {
    if (order < 2) throw InvalidOrder("trapezoidal rule needs at least 2 poles");
    if (!(disk.radius > 0.0)) throw InvalidOrder("disk radius must be positive");
    QuadratureRule rule;
    rule.disk = disk;
    rule.order = order;
    rule.poles.resize(order);
    rule.weights.resize(order);
    const double base = convention == PhaseConvention::midpoint ? 0.5 : 0.0;
    const double inv_n = 1.0 / static_cast<double>(order);
    for (std::size_t j = 0; j < order; ++j) {
        const double theta = kTwoPi * (static_cast<double>(j) + base) * inv_n + extra_rotation;
        const Complex direction = std::polar(1.0, theta);
        rule.poles[j] = disk.center + disk.radius * direction;
        // Sign fixed by rho(center) = +1 with counter-clockwise integration.
        rule.weights[j] = -disk.radius * inv_n * direction;
    }
    return rule;
}

QuadratureRule rotate_rule(const QuadratureRule& rule, double delta) {
    QuadratureRule out = rule;
    const Complex twist = std::polar(1.0, delta);
    for (std::size_t j = 0; j < rule.order; ++j) {
        out.poles[j] = rule.disk.center + (rule.poles[j] - rule.disk.center) * twist;
        out.weights[j] = rule.weights[j] * twist;
    }
    return out;
}

Complex rho_eval(const QuadratureRule& rule, Complex z) {
    const double cutoff = 1e-14 * rule.disk.radius;
    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < rule.order; ++j) {
        const Complex gap = z - rule.poles[j];
        if (std::abs(gap) < cutoff) throw PoleHit();
        sum += rule.weights[j] / gap;
    }
    return sum;
}

std::vector<GridPoint> filter_grid(const QuadratureRule& rule, const GridSpec& grid) {
    if (grid.nx < 2 || grid.ny < 2)
        throw InvalidOrder("filter grid needs at least 2 samples per axis");
    std::vector<GridPoint> table;
    table.reserve(grid.nx * grid.ny);
    const double dx = (grid.x_max - grid.x_min) / static_cast<double>(grid.nx - 1);
    const double dy = (grid.y_max - grid.y_min) / static_cast<double>(grid.ny - 1);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y_min + dy * static_cast<double>(iy);
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_min + dx * static_cast<double>(ix);
            double modulus;
            try {
                modulus = std::abs(rho_eval(rule, Complex(x, y)));
            } catch (const PoleHit&) {
                modulus = std::numeric_limits<double>::infinity();
            }
            table.push_back({x, y, modulus});
        }
    }
    return table;
}

}  // namespace rfeig
