#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bergman/ode.hpp"

using namespace bergman;
using Catch::Approx;

namespace {

const QuadratureRule& ode_rule() {
    static const QuadratureRule rule = disk_rule(64, 32, 0.999);
    return rule;
}

} // namespace

TEST_CASE("construct_F0 matches the closed forms") {
    {
        OdeProblem prob;
        prob.coefficients = {AnalyticFunction::zero()};
        prob.initial = {{1.0, 0.0}};
        const auto F0 = construct_F0(prob);
        REQUIRE(F0.taylor_coefficient(0).real() == Approx(1.0));
        REQUIRE(std::abs(F0.taylor_coefficient(1)) == 0.0);
    }
    {
        OdeProblem prob;
        prob.coefficients = {AnalyticFunction::zero(), AnalyticFunction::zero()};
        prob.forcing = AnalyticFunction::constant({2.0, 0.0});
        prob.initial = {{0.0, 0.0}, {0.0, 0.0}};
        const auto F0 = construct_F0(prob);
        REQUIRE(F0.taylor_coefficient(2).real() == Approx(1.0)); // I^2(2) = z^2
        REQUIRE(std::abs(F0.taylor_coefficient(0)) == 0.0);
    }
    {
        OdeProblem prob;
        prob.coefficients = {AnalyticFunction::zero(), AnalyticFunction::zero()};
        prob.initial = {{1.0, 0.0}, {2.0, 0.0}};
        const auto F0 = construct_F0(prob);
        REQUIRE(F0.taylor_coefficient(0).real() == Approx(1.0));
        REQUIRE(F0.taylor_coefficient(1).real() == Approx(2.0));
    }
    OdeProblem bad;
    bad.coefficients = {AnalyticFunction::zero()};
    REQUIRE_THROWS_AS(construct_F0(bad), contract_error);
}

TEST_CASE("zero symbols converge in one iteration") {
    OdeProblem prob;
    prob.coefficients = {AnalyticFunction::zero(), AnalyticFunction::zero()};
    prob.forcing = AnalyticFunction::constant({2.0, 0.0});
    prob.initial = {{0.0, 0.0}, {0.0, 0.0}};
    const auto res = neumann_solve(prob, 2.0, 50, 1e-12, ode_rule());
    REQUIRE(res.certificate.converged);
    REQUIRE(res.certificate.iterations == 1);
    REQUIRE(res.solution.has_value());
    REQUIRE(res.solution->taylor_coefficient(2).real() == Approx(1.0));
}

TEST_CASE("f' + 0.1 f = 0, f(0) = 1 solves to exp(-0.1 z)") {
    OdeProblem prob;
    prob.coefficients = {AnalyticFunction::constant({0.1, 0.0})};
    prob.initial = {{1.0, 0.0}};
    const auto res = neumann_solve(prob, 2.0, 200, 1e-13, ode_rule());
    REQUIRE(res.certificate.converged);
    const auto& f = *res.solution;
    double coeff = 1.0; // (-0.1)^k / k!
    for (int k = 0; k <= 30; ++k) {
        REQUIRE(std::abs(f.taylor_coefficient(static_cast<std::size_t>(k)) -
                         Complex{coeff, 0.0}) <= 1e-10);
        coeff *= -0.1 / (k + 1);
    }
    // certificate reports the advisory symbol norms
    REQUIRE(res.certificate.bloch_norms.size() == 1);
    REQUIRE(res.certificate.bloch_norms[0] == Approx(0.1).epsilon(1e-6));

    // independent oracle agreement
    const auto oracle = taylor_ode_oracle(prob, 40);
    for (int k = 0; k <= 30; ++k)
        REQUIRE(std::abs(f.taylor_coefficient(static_cast<std::size_t>(k)) -
                         oracle.taylor_coefficient(static_cast<std::size_t>(k))) <= 1e-10);
}

TEST_CASE("second-order problem with a small boundary-vanishing symbol") {
    OdeProblem prob;
    prob.coefficients = {AnalyticFunction::zero(),
                         AnalyticFunction::taylor({{0.2, 0.0}, {-0.2, 0.0}})};
    prob.forcing = AnalyticFunction::constant({1.0, 0.0});
    prob.initial = {{0.0, 0.0}, {0.0, 0.0}};
    const double tol = 1e-12;
    const auto res = neumann_solve(prob, 2.0, 100, tol, ode_rule());
    REQUIRE(res.certificate.converged);
    REQUIRE(res.certificate.residual_sup <= 10.0 * tol);

    const auto oracle = taylor_ode_oracle(prob, 60);
    for (int k = 0; k <= 30; ++k)
        REQUIRE(std::abs(res.solution->taylor_coefficient(static_cast<std::size_t>(k)) -
                         oracle.taylor_coefficient(static_cast<std::size_t>(k))) <= 1e-8);

    // contraction ratios eventually decrease (no sustained ratio >= 1)
    const auto& ratios = res.certificate.ratios;
    REQUIRE_FALSE(ratios.empty());
    int sustained = 0, worst = 0;
    for (double r : ratios) {
        sustained = r >= 1.0 ? sustained + 1 : 0;
        worst = std::max(worst, sustained);
    }
    REQUIRE(worst < 5);
}

TEST_CASE("oracle handles simple closed forms") {
    {
        OdeProblem prob;
        prob.coefficients = {AnalyticFunction::zero()};
        prob.forcing = AnalyticFunction::taylor({{0.0, 0.0}, {1.0, 0.0}});
        prob.initial = {{0.0, 0.0}};
        const auto f = taylor_ode_oracle(prob, 10); // f' = z, f(0) = 0
        REQUIRE(f.taylor_coefficient(2).real() == Approx(0.5));
    }
    {
        OdeProblem prob;
        prob.coefficients = {AnalyticFunction::constant({3.0, 0.0}),
                             AnalyticFunction::zero()};
        prob.initial = {{0.0, 0.0}, {0.0, 0.0}};
        REQUIRE(taylor_ode_oracle(prob, 20).is_identically_zero());
    }
}

TEST_CASE("non-contractive symbol yields a divergence report, no solution") {
    OdeProblem prob;
    prob.coefficients = {AnalyticFunction::power_kernel({1.0, 0.0}, 0, 1.0, {20.0, 0.0})};
    prob.initial = {{1.0, 0.0}};
    const auto res = neumann_solve(prob, 2.0, 60, 1e-12, ode_rule());
    REQUIRE_FALSE(res.certificate.converged);
    REQUIRE_FALSE(res.solution.has_value());
    REQUIRE_FALSE(res.certificate.message.empty());
}
