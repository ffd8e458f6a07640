#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bergman/numeric.hpp"
#include "bergman/quadrature.hpp"

using namespace bergman;
using Catch::Approx;

TEST_CASE("disk rule integrates 1 to the sub-disk mass") {
    for (double c : {0.5, 0.9, 0.9999}) {
        const auto rule = disk_rule(32, 16, c);
        std::vector<double> ones(rule.size(), 1.0);
        REQUIRE(integrate_real(ones, rule) == Approx(c * c).epsilon(1e-13));
    }
}

TEST_CASE("disk rule: rotational symmetry and monomial masses") {
    const auto rule = disk_rule(48, 32, 0.9999);
    std::vector<Complex> zvals(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) zvals[j] = rule.nodes[j];
    REQUIRE(std::abs(integrate(zvals, rule)) <= 1e-14);

    // |z|^{2k} masses over |z| <= c: c^{2k+2} / (k+1)
    const double c = rule.r_cut;
    for (int k : {1, 3, 7}) {
        std::vector<double> vals(rule.size());
        for (std::size_t j = 0; j < rule.size(); ++j)
            vals[j] = std::pow(std::norm(rule.nodes[j]), k);
        REQUIRE(integrate_real(vals, rule) ==
                Approx(std::pow(c, 2.0 * k + 2.0) / (k + 1)).epsilon(1e-12));
    }
}

TEST_CASE("mixed monomials are exact up to the declared degree") {
    const int rn = 10, an = 20;
    const auto rule = disk_rule(rn, an, 0.95);
    const int deg = rule.exactness_degree;
    REQUIRE(deg == std::min(2 * rn - 1, an - 1));
    const double c2 = rule.r_cut * rule.r_cut;
    for (int a = 0; a <= 5; ++a) {
        for (int b = 0; b <= 5 && a + b <= deg; ++b) {
            std::vector<Complex> vals(rule.size());
            for (std::size_t j = 0; j < rule.size(); ++j)
                vals[j] = std::pow(rule.nodes[j], a) * std::pow(std::conj(rule.nodes[j]), b);
            const Complex got = integrate(vals, rule);
            const Complex expect =
                a == b ? Complex{std::pow(c2, a + 1) / (a + 1), 0.0} : Complex{0.0, 0.0};
            REQUIRE(std::abs(got - expect) <= 1e-12 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("full-disk monomial A^p masses via the extrapolation pair") {
    // integral of |z|^s over the disk is 2/(s+2); includes odd powers,
    // whose radial profile t^{s/2} is not polynomial
    for (double s : {1.0, 2.0, 5.0, 17.0, 40.0}) {
        const auto lo = disk_rule(160, 8, 0.999);
        const auto hi = disk_rule(160, 8, 0.9999);
        auto mass = [&](const QuadratureRule& r) {
            std::vector<double> vals(r.size());
            for (std::size_t j = 0; j < r.size(); ++j)
                vals[j] = std::pow(std::abs(r.nodes[j]), s);
            return integrate_real(vals, r);
        };
        const double v = rcut_extrapolate(mass(lo), 0.999, mass(hi), 0.9999);
        REQUIRE(v == Approx(2.0 / (s + 2.0)).epsilon(1e-6));
    }
}

TEST_CASE("refinement stability for a smooth integrand") {
    auto f = [](Complex z) { return std::exp(-std::norm(z)) * (1.0 + z.real()); };
    const auto coarse = disk_rule(64, 64, 0.999);
    const auto fine = disk_rule(128, 128, 0.999);
    const double a = integrate_fn(coarse, f);
    const double b = integrate_fn(fine, f);
    REQUIRE(std::abs(a - b) <= 1e-8 * std::abs(b));
}

TEST_CASE("integrate enforces the length contract") {
    const auto rule = disk_rule(4, 4, 0.9);
    std::vector<double> short_vals(3, 1.0);
    REQUIRE_THROWS_AS(integrate_real(short_vals, rule), contract_error);
    std::vector<double> zeros(rule.size(), 0.0);
    REQUIRE(integrate_real(zeros, rule) == 0.0);
}

TEST_CASE("graded rule covers the boundary region with positive cells") {
    const auto rule = graded_disk_rule(10, 4, 8);
    double mass = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        REQUIRE(rule.weights[j] > 0.0);
        REQUIRE(std::abs(rule.nodes[j]) < 1.0);
        mass += rule.weights[j];
    }
    // total mass = 1 - 2^-octaves in the t variable
    REQUIRE(mass == Approx(1.0 - std::pow(2.0, -10.0)).epsilon(1e-12));
    // a radial density integrates to its exact mass within the cell error
    std::vector<double> vals(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j)
        vals[j] = std::sqrt(1.0 - std::norm(rule.nodes[j]));
    // midpoint cells are a percent-level statistics device, not Gauss
    const double got = integrate_real(vals, rule);
    const double expect = (2.0 / 3.0) * (1.0 - std::pow(std::pow(2.0, -10.0), 1.5));
    REQUIRE(got == Approx(expect).epsilon(1e-3));
}

TEST_CASE("rule construction contracts") {
    REQUIRE_THROWS_AS(disk_rule(0, 4, 0.9), contract_error);
    REQUIRE_THROWS_AS(disk_rule(4, 4, 1.0), contract_error);
    REQUIRE_THROWS_AS(graded_disk_rule(200, 4, 8), resolution_error);
}
