#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/numeric.hpp"

namespace bergman {

/// Nodes and weights for integrals against the normalized area measure
/// dA = dx dy / pi over {|z| <= r_cut}. Weights are positive and sum to
/// the normalized mass of the covered region.
struct QuadratureRule {
    std::vector<Complex> nodes;
    std::vector<double> weights;
    int radial_count = 0;
    int angular_count = 0;     // 0 for graded rules with per-ring counts
    double r_cut = 0.0;
    int exactness_degree = 0;  // max a+b with z^a conj(z)^b integrated exactly
    std::string grading;       // human-readable descriptor

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

/// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
inline void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw contract_error("gauss_legendre_01: need n >= 1");
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        const double wi = 2.0 / ((1.0 - t * t) * pp * pp);
        x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - t);
        x[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + t);
        w[static_cast<std::size_t>(i)] = 0.5 * wi;
        w[static_cast<std::size_t>(n - 1 - i)] = 0.5 * wi;
    }
}

} // namespace detail

/// Tensor rule: Gauss-Legendre in t = r^2 on [0, r_cut^2], uniform
/// angles starting at theta = 0. Exact for z^a conj(z)^b with
/// a+b <= min(2 radial_n - 1, angular_n - 1) over {|z| <= r_cut}.
inline QuadratureRule disk_rule(int radial_n, int angular_n, double r_cut = 0.9999) {
    if (radial_n < 1 || angular_n < 1)
        throw contract_error("disk_rule: node counts must be >= 1");
    if (!(r_cut > 0.0 && r_cut < 1.0))
        throw contract_error("disk_rule: r_cut must lie in (0,1)");
    std::vector<double> t, wt;
    detail::gauss_legendre_01(radial_n, t, wt);
    const double T = r_cut * r_cut;

    QuadratureRule rule;
    rule.radial_count = radial_n;
    rule.angular_count = angular_n;
    rule.r_cut = r_cut;
    rule.exactness_degree = std::min(2 * radial_n - 1, angular_n - 1);
    rule.grading = "gauss_legendre_t[" + std::to_string(radial_n) + "]x uniform_theta[" +
                   std::to_string(angular_n) + "], r_cut=" + std::to_string(r_cut);
    rule.nodes.reserve(static_cast<std::size_t>(radial_n) * angular_n);
    rule.weights.reserve(rule.nodes.capacity());
    const double wtheta = 1.0 / static_cast<double>(angular_n);
    for (int i = 0; i < radial_n; ++i) {
        const double rho = std::sqrt(T * t[static_cast<std::size_t>(i)]);
        const double wr = T * wt[static_cast<std::size_t>(i)];
        for (int j = 0; j < angular_n; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / angular_n;
            rule.nodes.emplace_back(rho * std::cos(theta), rho * std::sin(theta));
            rule.weights.push_back(wr * wtheta);
        }
    }
    return rule;
}

/// Boundary-graded midpoint rule: radial cells dyadic in 1 - t (t = r^2),
/// rings_per_octave cells per halving, angular counts chosen so cells
/// are isotropic in the Bergman metric (cell_aspect stretches them
/// angularly). Meant for measure statistics, not polynomial exactness.
inline QuadratureRule graded_disk_rule(int octaves, int rings_per_octave = 4,
                                       double cell_aspect = 1.0,
                                       std::size_t max_atoms = 8'000'000) {
    if (octaves < 1 || rings_per_octave < 1 || !(cell_aspect > 0.0))
        throw contract_error("graded_disk_rule: invalid grading parameters");
    const int total_rings = octaves * rings_per_octave;
    const double beta_cell = 0.5 * std::numbers::ln2 / rings_per_octave;

    QuadratureRule rule;
    rule.radial_count = total_rings;
    rule.angular_count = 0;
    rule.r_cut = std::sqrt(1.0 - std::pow(2.0, -static_cast<double>(octaves)));
    rule.exactness_degree = 0;
    rule.grading = "dyadic_t[" + std::to_string(octaves) + " octaves x " +
                   std::to_string(rings_per_octave) + "], cell_aspect=" +
                   std::to_string(cell_aspect);
    const double step = 1.0 / rings_per_octave;
    for (int i = 0; i < total_rings; ++i) {
        const double lo = 1.0 - std::pow(2.0, -step * i);
        const double hi = 1.0 - std::pow(2.0, -step * (i + 1));
        const double tc = 0.5 * (lo + hi);
        const double rho = std::sqrt(tc);
        // angular beta extent of a cell: dtheta * rho / (1 - t)
        const int na = std::max(
            4, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho /
                                          ((1.0 - tc) * cell_aspect * beta_cell))));
        if (rule.nodes.size() + static_cast<std::size_t>(na) > max_atoms)
            throw resolution_error(
                "graded_disk_rule: atom budget exceeded; lower octaves or raise cell_aspect");
        const double cell_mass = (hi - lo) / static_cast<double>(na);
        for (int j = 0; j < na; ++j) {
            const double theta = 2.0 * std::numbers::pi * (j + 0.5) / na;
            rule.nodes.emplace_back(rho * std::cos(theta), rho * std::sin(theta));
            rule.weights.push_back(cell_mass);
        }
    }
    return rule;
}

/// Weighted sum with deterministic pairwise reduction.
inline Complex integrate(std::span<const Complex> values, const QuadratureRule& rule) {
    if (values.size() != rule.size())
        throw contract_error("integrate: one value per node required");
    std::vector<Complex> terms(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) terms[j] = values[j] * rule.weights[j];
    return pairwise_sum<Complex>(terms);
}

inline double integrate_real(std::span<const double> values, const QuadratureRule& rule) {
    if (values.size() != rule.size())
        throw contract_error("integrate: one value per node required");
    std::vector<double> terms(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) terms[j] = values[j] * rule.weights[j];
    return pairwise_sum<double>(terms);
}

/// Integrates f over the rule region without materializing a vector.
template <typename F>
double integrate_fn(const QuadratureRule& rule, F&& f) {
    std::vector<double> terms(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j)
        terms[j] = f(rule.nodes[j]) * rule.weights[j];
    return pairwise_sum<double>(terms);
}

} // namespace bergman
