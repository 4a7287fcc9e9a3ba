#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rfeig/errors.hpp"
#include "rfeig/filter.hpp"

using namespace rfeig;

namespace {
const Disk kUnit{Complex(0.0, 0.0), 1.0};
}

TEST_CASE("filter equals one at the center for any order") {
    for (std::size_t n : {2, 3, 8, 16, 33}) {
        const auto rule = trapezoidal_rule(kUnit, n);
        CHECK(std::abs(rho_eval(rule, kUnit.center) - Complex(1.0, 0.0)) < 1e-14);
        // Poles on the circle and exactness at the center.
        for (std::size_t j = 0; j < n; ++j)
            CHECK(std::abs(std::abs(rule.poles[j] - kUnit.center) - 1.0) < 1e-14);
    }
}

TEST_CASE("root-of-unity phases reproduce the closed form 1/(1 - z^N)") {
    const auto rule = trapezoidal_rule(kUnit, 8, PhaseConvention::root_of_unity);
    const Complex z(2.0, 0.0);
    const Complex expected = 1.0 / (1.0 - std::pow(z, 8.0));
    CHECK(std::abs(rho_eval(rule, z) - expected) < 1e-13);
    CHECK(std::abs(std::abs(rho_eval(rule, z)) - 1.0 / 255.0) < 1e-13);

    Rng rng(301);
    for (int trial = 0; trial < 40; ++trial) {
        const Complex zeta = Complex(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        bool near_pole = false;
        for (const Complex& pole : rule.poles)
            if (std::abs(zeta - pole) < 0.05) near_pole = true;
        if (near_pole) continue;
        const Complex closed = 1.0 / (1.0 - std::pow(zeta, 8.0));
        CHECK(std::abs(rho_eval(rule, zeta) - closed) < 1e-12 * (1.0 + std::abs(closed)));
    }
}

TEST_CASE("midpoint phases satisfy the rotated closed form 1/(1 + z^N)") {
    const auto rule = trapezoidal_rule(kUnit, 16);
    Rng rng(307);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex zeta = Complex(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5));
        bool near_pole = false;
        for (const Complex& pole : rule.poles)
            if (std::abs(zeta - pole) < 0.05) near_pole = true;
        if (near_pole) continue;
        const Complex closed = 1.0 / (1.0 + std::pow(zeta, 16.0));
        CHECK(std::abs(rho_eval(rule, zeta) - closed) < 1e-12 * (1.0 + std::abs(closed)));
    }
}

TEST_CASE("larger order decays faster outside the boundary") {
    const auto rule8 = trapezoidal_rule(kUnit, 8);
    const auto rule16 = trapezoidal_rule(kUnit, 16);
    const Complex z(1.5, 0.0);
    CHECK(std::abs(rho_eval(rule16, z)) < std::abs(rho_eval(rule8, z)));
}

TEST_CASE("filter is negligible far outside") {
    const auto rule = trapezoidal_rule(kUnit, 16);
    CHECK(std::abs(rho_eval(rule, Complex(100.0, 0.0))) < 1e-12);
}

TEST_CASE("pole collision raises, near-pole evaluation stays finite") {
    const auto rule = trapezoidal_rule(kUnit, 8);
    CHECK_THROWS_AS(rho_eval(rule, rule.poles[3] + Complex(1e-16, 0.0)), PoleHit);
    const Complex near = rule.poles[3] + Complex(2e-13, 0.0);
    const Complex value = rho_eval(rule, near);
    CHECK(std::isfinite(value.real()));
    CHECK(std::isfinite(value.imag()));
    CHECK(std::abs(value) > 1e10);
}

TEST_CASE("order below two is rejected") {
    CHECK_THROWS_AS(trapezoidal_rule(kUnit, 1), InvalidOrder);
    CHECK_THROWS_AS(trapezoidal_rule(kUnit, 0), InvalidOrder);
}

TEST_CASE("filter grid shape, center value, and outer decay in N") {
    const GridSpec corners{-2.0, 2.0, -2.0, 2.0, 2, 2};
    const auto rule8 = trapezoidal_rule(kUnit, 8);
    CHECK(filter_grid(rule8, corners).size() == 4);

    const GridSpec spec{-2.0, 2.0, -2.0, 2.0, 41, 41};
    double previous_outer_max = 0.0;
    bool first = true;
    for (std::size_t n : {8, 16, 32}) {
        const auto rule = trapezoidal_rule(kUnit, n);
        const auto table = filter_grid(rule, spec);
        double outer_max = 0.0;
        bool center_checked = false;
        for (const auto& point : table) {
            const double dist = std::hypot(point.x, point.y);
            if (dist >= 1.5) outer_max = std::max(outer_max, point.modulus);
            if (point.x == 0.0 && point.y == 0.0) {
                CHECK(point.modulus == doctest::Approx(1.0).epsilon(1e-13));
                center_checked = true;
            }
        }
        CHECK(center_checked);
        if (!first) CHECK(outer_max < previous_outer_max);
        previous_outer_max = outer_max;
        first = false;
    }
}

TEST_CASE("conjugate symmetry for disks centered on the real axis") {
    const Disk disk{Complex(0.7, 0.0), 2.3};
    const auto rule = trapezoidal_rule(disk, 12);
    Rng rng(311);
    for (int trial = 0; trial < 25; ++trial) {
        const Complex z(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0));
        bool near_pole = false;
        for (const Complex& pole : rule.poles)
            if (std::abs(z - pole) < 0.1 || std::abs(std::conj(z) - pole) < 0.1) near_pole = true;
        if (near_pole) continue;
        const Complex a = rho_eval(rule, z);
        const Complex b = rho_eval(rule, std::conj(z));
        CHECK(std::abs(a - std::conj(b)) < 1e-13 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("interior approximation error shrinks geometrically as N doubles") {
    Rng rng(313);
    std::vector<Complex> samples;
    for (int k = 0; k < 30; ++k)
        samples.push_back(std::polar(0.5 * rng.uniform(), rng.uniform(0.0, 6.28)));
    double previous = 1e300;
    for (std::size_t n : {4, 8, 16, 32}) {
        const auto rule = trapezoidal_rule(kUnit, n);
        double worst = 0.0;
        for (const Complex& z : samples)
            worst = std::max(worst, std::abs(rho_eval(rule, z) - Complex(1.0, 0.0)));
        if (previous < 1e299) CHECK(worst < 0.51 * previous);
        previous = worst;
    }
}

TEST_CASE("rule is affinely covariant") {
    const Disk disk{Complex(-1.5, 2.0), 3.7};
    const auto mapped = trapezoidal_rule(disk, 16);
    const auto unit = trapezoidal_rule(kUnit, 16);
    for (std::size_t j = 0; j < 16; ++j) {
        const Complex expected_pole = disk.center + disk.radius * unit.poles[j];
        CHECK(std::abs(mapped.poles[j] - expected_pole) < 1e-13 * disk.radius);
        CHECK(std::abs(mapped.weights[j] - disk.radius * unit.weights[j]) < 1e-14 * disk.radius);
    }
    Rng rng(317);
    for (int trial = 0; trial < 10; ++trial) {
        const Complex w(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        bool near_pole = false;
        for (const Complex& pole : unit.poles)
            if (std::abs(w - pole) < 0.1) near_pole = true;
        if (near_pole) continue;
        const Complex via_unit = rho_eval(unit, w);
        const Complex via_mapped = rho_eval(mapped, disk.center + disk.radius * w);
        CHECK(std::abs(via_unit - via_mapped) < 1e-13 * (1.0 + std::abs(via_unit)));
    }
}
