#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <iostream>
#include <random>
#include <vector>

#include "bergman/carleson.hpp"

using namespace bergman;
using Catch::Approx;

namespace {

const BergmanLattice& unit_lattice() {
    // deep enough that the plateau transient of the area factor has
    // settled inside the slope-fit window (bands ~5..10)
    static const BergmanLattice lat = build_lattice(1.0, 0.9995);
    return lat;
}

const QuadratureRule& measure_grid() {
    static const QuadratureRule rule = graded_disk_rule(13, 3, 2.0);
    return rule;
}

const QuadratureRule& light_grid() {
    static const QuadratureRule rule = graded_disk_rule(13, 2, 3.0);
    return rule;
}

} // namespace

TEST_CASE("indexed disk mass equals the brute-force sum") {
    std::mt19937_64 rng(999);
    std::uniform_real_distribution<double> u(-0.98, 0.98);
    std::vector<MeasureAtom> atoms;
    for (int i = 0; i < 4000; ++i) {
        Complex z;
        do {
            z = Complex{u(rng), u(rng)};
        } while (std::abs(z) >= 0.98);
        atoms.push_back({z, std::abs(u(rng))});
    }
    // add exact radius groups like a quadrature grid produces
    for (double rho : {0.25, 0.7, 0.925}) {
        for (int j = 0; j < 64; ++j) {
            const double th = 2.0 * std::numbers::pi * j / 64;
            atoms.push_back({Complex{rho * std::cos(th), rho * std::sin(th)}, 0.01});
        }
    }
    const auto mu = DiscreteMeasure::from_atoms(atoms);
    for (int trial = 0; trial < 40; ++trial) {
        Complex a;
        do {
            a = Complex{u(rng), u(rng)};
        } while (std::abs(a) >= 0.98);
        const double r = 0.3 + 0.5 * std::abs(u(rng));
        const EuclideanDisk disk = bergman_disk(a, r);
        double brute = 0.0;
        for (const auto& atom : atoms)
            if (disk.contains(atom.z)) brute += atom.weight;
        REQUIRE(mu.measure_of_disk(a, r) == Approx(brute).margin(1e-12));
    }
}

TEST_CASE("measure construction contracts") {
    REQUIRE_THROWS_AS(DiscreteMeasure::from_atoms({{Complex{0.2, 0.0}, -1.0}}),
                      contract_error);
    REQUIRE_THROWS_AS(DiscreteMeasure::from_atoms({{Complex{1.0, 0.0}, 1.0}}), domain_error);
}

TEST_CASE("area measure: statistic matches the closed form and stays bounded") {
    const auto& lat = unit_lattice();
    const auto mu = radial_power_measure(0.0, measure_grid());
    const double s = std::tanh(lat.r);
    double mean_err = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < lat.size(); j += 17) {
        const Complex a = lat.points[j];
        const double expect = s / (1.0 - s * s * std::norm(a));
        const double mass = mu.measure_of_disk(a, lat.r);
        const double stat = std::sqrt(mass) / (1.0 - std::norm(a));
        REQUIRE(stat == Approx(expect).epsilon(0.15));
        mean_err += std::abs(stat - expect) / expect;
        ++count;
    }
    REQUIRE(mean_err / count <= 0.04);
    const auto rep = carleson_statistic(mu, 0, 2.0, 2.0, lat);
    REQUIRE(rep.verdict == CarlesonVerdict::bounded);
    REQUIRE(rep.statistic <= s / (1.0 - s * s) * 1.15);
}

TEST_CASE("radial power measures hit the three verdicts") {
    const auto& lat = unit_lattice();
    const auto grid = measure_grid();
    REQUIRE(carleson_statistic(radial_power_measure(0.5, grid), 0, 2.0, 2.0, lat).verdict ==
            CarlesonVerdict::vanishing);
    REQUIRE(carleson_statistic(radial_power_measure(-0.5, grid), 0, 2.0, 2.0, lat).verdict ==
            CarlesonVerdict::diverging);
}

TEST_CASE("point mass is vanishing with the right statistic at the origin") {
    const auto mu = DiscreteMeasure::from_atoms({{Complex{0.0, 0.0}, 0.49}});
    const auto rep = carleson_statistic(mu, 0, 2.0, 2.0, unit_lattice());
    REQUIRE(rep.verdict == CarlesonVerdict::vanishing);
    REQUIRE(rep.statistic == Approx(0.7)); // weight^{1/q} at a = 0
    REQUIRE(rep.band_sup.back() == 0.0);
}

TEST_CASE("scaling the measure scales the statistic by lambda^{1/q}") {
    const auto& lat = unit_lattice();
    const auto mu = radial_power_measure(0.5, measure_grid());
    const double lambda = 3.7;
    const auto base = carleson_statistic(mu, 0, 2.0, 2.0, lat);
    const auto scaled = carleson_statistic(mu.scaled(lambda), 0, 2.0, 2.0, lat);
    REQUIRE(scaled.statistic ==
            Approx(base.statistic * std::pow(lambda, 0.5)).epsilon(1e-10));
    REQUIRE(scaled.verdict == base.verdict);
}

TEST_CASE("verdicts are stable in the lattice radius") {
    static const BergmanLattice half = build_lattice(0.5, 0.9995);
    const auto grid = measure_grid();
    for (double t : {0.0, 0.5, -0.5}) {
        const auto mu = radial_power_measure(t, grid);
        const auto v1 = carleson_statistic(mu, 0, 2.0, 2.0, unit_lattice()).verdict;
        const auto v2 = carleson_statistic(mu, 0, 2.0, 2.0, half).verdict;
        REQUIRE(v1 == v2);
    }
}

TEST_CASE("regime routing errors") {
    const auto mu = radial_power_measure(0.0, measure_grid());
    REQUIRE_THROWS_AS(carleson_statistic(mu, 0, 2.0, 1.0, unit_lattice()), regime_error);
    const auto rule = disk_rule(32, 32, 0.99);
    REQUIRE_THROWS_AS(carleson_integral_statistic(mu, 0, 2.0, 2.0, 1.0, rule, rule),
                      regime_error);
}

TEST_CASE("integral statistic: bounded and diverging densities") {
    const auto grid = graded_disk_rule(13, 4, 8);
    const auto lo = disk_rule(128, 256, 0.99);
    const auto hi = disk_rule(128, 256, 0.999);
    const auto dA = radial_power_measure(0.0, grid);
    const auto rep = carleson_integral_statistic(dA, 0, 2.0, 1.0, 1.0, lo, hi);
    REQUIRE(rep.verdict == CarlesonVerdict::bounded);
    REQUIRE(rep.statistic > 0.0);

    const auto point = DiscreteMeasure::from_atoms({{Complex{0.0, 0.0}, 1.0}});
    REQUIRE(carleson_integral_statistic(point, 0, 2.0, 1.0, 1.0, lo, hi).verdict ==
            CarlesonVerdict::bounded);

    const auto bad = radial_power_measure(-1.5, grid);
    REQUIRE(carleson_integral_statistic(bad, 0, 2.0, 1.0, 1.0, lo, hi).verdict ==
            CarlesonVerdict::diverging);
}

TEST_CASE("sobolev rigidity: single component reduces to the plain tester") {
    const auto& lat = unit_lattice();
    const auto mu = radial_power_measure(0.0, light_grid());
    const std::vector<AnalyticFunction> u{AnalyticFunction::constant({1.0, 0.0}),
                                          AnalyticFunction::zero()};
    const auto lo = disk_rule(96, 192, 0.99);
    const auto hi = disk_rule(96, 192, 0.999);
    SobolevFamilyOptions fam;
    fam.per_band_cap = 6;
    const auto rep = sobolev_rigidity_check(mu, u, 2.0, 2.0, lat, lo, hi, fam);
    REQUIRE(rep.agree);
    REQUIRE(rep.combined_verdict == CarlesonVerdict::bounded);
    REQUIRE(rep.components.size() == 2);
    REQUIRE(rep.components[0].verdict == CarlesonVerdict::bounded);
    REQUIRE(rep.components[1].verdict == CarlesonVerdict::vanishing);
    REQUIRE(rep.ratio > 0.0);
}

TEST_CASE("sobolev rigidity: compact support vanishes consistently") {
    const auto& lat = unit_lattice();
    const auto core = disk_rule(48, 64, 0.5);
    const auto mu = radial_power_measure(0.0, core); // dA restricted to |z| <= 0.5
    const std::vector<AnalyticFunction> u{AnalyticFunction::constant({1.0, 0.0}),
                                          AnalyticFunction::constant({0.5, 0.5})};
    const auto lo = disk_rule(96, 192, 0.99);
    const auto hi = disk_rule(96, 192, 0.999);
    SobolevFamilyOptions fam;
    fam.per_band_cap = 6;
    const auto rep = sobolev_rigidity_check(mu, u, 2.0, 2.0, lat, lo, hi, fam);
    REQUIRE(rep.agree);
    REQUIRE(rep.combined_verdict == CarlesonVerdict::vanishing);
}

TEST_CASE("sobolev rigidity in the integral regime") {
    const auto& lat = unit_lattice();
    const auto mu = radial_power_measure(0.0, light_grid());
    const std::vector<AnalyticFunction> u{AnalyticFunction::constant({1.0, 0.0})};
    const auto lo = disk_rule(96, 192, 0.99);
    const auto hi = disk_rule(96, 192, 0.999);
    SobolevFamilyOptions fam;
    fam.per_band_cap = 6;
    const auto rep = sobolev_rigidity_check(mu, u, 2.0, 1.0, lat, lo, hi, fam);
    REQUIRE(rep.agree);
    REQUIRE(rep.combined_verdict == CarlesonVerdict::bounded);
    REQUIRE(rep.components[0].regime == "integral");
}
