#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <random>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"

using namespace bergman;
using Catch::Approx;

namespace {

Complex involution(Complex a, Complex z) {
    return (a - z) / (Complex{1.0, 0.0} - std::conj(a) * z);
}

/// Normalized area of D(a,r) measured with beta evaluations only:
/// radial slices, membership arcs located by bisection, then
/// Gauss-Legendre over the radial pieces between the regime changes.
double disk_area_oracle(Complex a, double r) {
    auto inside = [&](Complex z) { return bergman_metric(a, z) < r; };
    const double psi = std::abs(a) > 0.0 ? std::arg(a) : 0.0;
    auto ray = [&](double rho, double delta) {
        return Complex{rho * std::cos(psi + delta), rho * std::sin(psi + delta)};
    };
    auto bisect = [&](auto pred, double lo, double hi) {
        // pred(lo) true, pred(hi) false
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (pred(mid) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double eps = 1e-15;
    // nearest/farthest points of the disk from the origin lie on the ray
    double rho_in = 0.0, rho_out = 0.0, rho_full = -1.0;
    if (inside(Complex{0.0, 0.0})) {
        rho_in = 0.0;
        rho_full = bisect([&](double t) { return inside(ray(t, std::numbers::pi)); }, 0.0,
                          1.0 - eps);
    } else {
        rho_in = bisect([&](double t) { return !inside(ray(t, 0.0)); }, 0.0,
                        std::abs(a));
    }
    rho_out = bisect([&](double t) { return inside(ray(t, 0.0)); }, std::abs(a), 1.0 - eps);

    auto arc_fraction = [&](double rho) {
        if (!inside(ray(rho, 0.0))) return 0.0;
        if (inside(ray(rho, std::numbers::pi))) return 1.0;
        const double delta = bisect([&](double d) { return inside(ray(rho, d)); }, 0.0,
                                    std::numbers::pi);
        return delta / std::numbers::pi;
    };

    // integrate the angular fraction in t = rho^2 over the smooth pieces
    std::vector<double> breaks;
    breaks.push_back(rho_in * rho_in);
    if (rho_full > 0.0) breaks.push_back(rho_full * rho_full);
    breaks.push_back(rho_out * rho_out);
    std::vector<double> x, w;
    bergman::detail::gauss_legendre_01(64, x, w);
    double area = (rho_full > 0.0) ? rho_full * rho_full : 0.0; // full-circle core
    for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
        const double lo = breaks[piece], hi = breaks[piece + 1];
        if (piece == 0 && rho_full > 0.0) continue; // core handled exactly
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += w[i] * arc_fraction(std::sqrt(lo + (hi - lo) * x[i]));
        area += (hi - lo) * acc;
    }
    return area;
}

} // namespace

TEST_CASE("pseudo-hyperbolic metric: closed-form cases") {
    REQUIRE(pseudo_hyperbolic({0.0, 0.0}, {0.3, -0.4}) == Approx(0.5));
    REQUIRE(pseudo_hyperbolic({0.21, 0.4}, {0.21, 0.4}) == Approx(0.0).margin(1e-15));
    REQUIRE(pseudo_hyperbolic({0.5, 0.0}, {-0.5, 0.0}) == Approx(0.8));
    REQUIRE_THROWS_AS(pseudo_hyperbolic({1.0, 0.0}, {0.0, 0.0}), domain_error);
    REQUIRE_THROWS_AS(pseudo_hyperbolic({0.0, 0.0}, {0.8, 0.8}), domain_error);
}

TEST_CASE("bergman metric: closed-form cases") {
    REQUIRE(bergman_metric({0.0, 0.0}, {0.5, 0.0}) == Approx(0.5 * std::log(3.0)));
    REQUIRE(bergman_metric({0.3, 0.3}, {0.3, 0.3}) == Approx(0.0).margin(1e-15));
    REQUIRE(bergman_metric({0.0, 0.0}, {0.9, 0.0}) == Approx(0.5 * std::log(19.0)));
}

TEST_CASE("metric properties on random triples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-0.97, 0.97);
    auto draw = [&] {
        Complex z;
        do {
            z = Complex{u(rng), u(rng)};
        } while (std::abs(z) >= 0.97);
        return z;
    };
    for (int trial = 0; trial < 300; ++trial) {
        const Complex z = draw(), w = draw(), v = draw();
        const double zw = pseudo_hyperbolic(z, w);
        REQUIRE(zw == Approx(pseudo_hyperbolic(w, z)).margin(1e-14));
        REQUIRE(zw >= 0.0);
        REQUIRE(zw < 1.0);
        // Moebius invariance under the involution exchanging 0 and v
        REQUIRE(pseudo_hyperbolic(involution(v, z), involution(v, w)) ==
                Approx(zw).margin(1e-12));
        // triangle-type bound
        const double zv = pseudo_hyperbolic(z, v), vw = pseudo_hyperbolic(v, w);
        REQUIRE(zw <= (zv + vw) / (1.0 + zv * vw) + 1e-12);
    }
}

TEST_CASE("bergman disk is the euclidean image disk") {
    for (Complex a : {Complex{0.0, 0.0}, Complex{0.5, 0.2}, Complex{-0.8, 0.1}}) {
        for (double r : {0.5, 1.0}) {
            const EuclideanDisk d = bergman_disk(a, r);
            for (int k = 0; k < 8; ++k) {
                const double th = 2.0 * std::numbers::pi * k / 8;
                const Complex edge =
                    d.center + d.radius * Complex{std::cos(th), std::sin(th)};
                REQUIRE(bergman_metric(a, edge) == Approx(r).margin(1e-9));
            }
        }
    }
}

TEST_CASE("normalized area of D(a,r): formula vs beta-only oracle") {
    for (Complex a : {Complex{0.0, 0.0}, Complex{0.4, 0.1}, Complex{-0.2, 0.75},
                      Complex{0.9, 0.0}}) {
        for (double r : {0.5, 1.0}) {
            const double formula = bergman_disk_area(a, r);
            const double measured = disk_area_oracle(a, r);
            REQUIRE(measured == Approx(formula).epsilon(1e-4));
        }
    }
}

TEST_CASE("lattice: one disk covers a small region") {
    const auto lat = build_lattice(2.0, 0.5);
    REQUIRE(lat.size() == 1);
    REQUIRE(std::abs(lat.points[0]) == Approx(0.0).margin(1e-15));
    REQUIRE(lat.multiplicity_bound == 1);
}

TEST_CASE("lattice invariants at r = 0.5 up to 0.99") {
    const auto lat = build_lattice(0.5, 0.99);
    REQUIRE(lat.size() > 10);

    // separation verified exhaustively; the pairwise check is its own oracle
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lat.size(); ++i)
        for (std::size_t j = i + 1; j < lat.size(); ++j)
            min_sep = std::min(min_sep, bergman_metric(lat.points[i], lat.points[j]));
    REQUIRE(min_sep >= lat.r - 1e-12);
    REQUIRE(lat.min_separation == Approx(min_sep).margin(1e-12));

    // covering of the construction grid
    REQUIRE(lat.max_covering < lat.r);

    // finite overlap, stable under grid refinement; covering of an
    // independent grid may exceed r by one construction-grid quantum
    const auto cert8 = certify_lattice(lat, 8);
    REQUIRE(std::abs(cert8.multiplicity_bound - lat.multiplicity_bound) <=
            0.05 * lat.multiplicity_bound);
    REQUIRE(cert8.max_covering < lat.r * (1.0 + 1.0 / 4.0));
    REQUIRE(lat.multiplicity_bound < 400);
}

TEST_CASE("comparability window over lattice disks (logged)") {
    const double r = 1.0;
    const auto lat = build_lattice(r, 0.995);
    double worst = 1.0;
    for (const Complex& a : lat.points) {
        if (std::abs(a) > 0.99) continue;
        const EuclideanDisk d = bergman_disk(a, r);
        std::vector<Complex> samples{d.center};
        for (int k = 0; k < 6; ++k) {
            const double th = std::numbers::pi * k / 3.0;
            samples.push_back(d.center + 0.8 * d.radius * Complex{std::cos(th), std::sin(th)});
        }
        for (const Complex& w : samples) {
            const double q[4] = {std::pow(1.0 - std::norm(a), 2.0),
                                 std::pow(1.0 - std::norm(w), 2.0),
                                 std::norm(Complex{1.0, 0.0} - std::conj(w) * a),
                                 bergman_disk_area(a, r)};
            for (double x : q)
                for (double y : q) worst = std::max(worst, x / y);
        }
    }
    std::cout << "[eq2.3] comparability constant C(r=1) <= " << worst << "\n";
    REQUIRE(worst < 100.0);
    REQUIRE(worst > 1.0);
}

TEST_CASE("lattice construction contracts") {
    REQUIRE_THROWS_AS(build_lattice(0.0, 0.9), contract_error);
    REQUIRE_THROWS_AS(build_lattice(1.0, 1.0), contract_error);
    LatticeOptions tiny;
    tiny.max_grid_points = 100;
    REQUIRE_THROWS_AS(build_lattice(0.1, 0.9999, tiny), resolution_error);
}
