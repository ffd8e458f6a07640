#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/errors.hpp"
#include "bergman/norms.hpp"
#include "bergman/numeric.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// Exponent offset gamma for the test-kernel family; must exceed 1 + 2/p.
inline double default_gamma(double p) { return p >= 2.0 ? 4.0 : 3.0 + 2.0 / p; }

/// K_w^{[i]}(z) = z^i / (1 - conj(w) z)^{gamma+i}.
inline AnalyticFunction kernel(Complex w, int i, double gamma) {
    if (i < 0) throw contract_error("kernel: order must be >= 0");
    return AnalyticFunction::power_kernel(w, i, gamma + i);
}

/// Normalized variant k_w^{[i]} = (1-|w|^2)^{gamma+i-2/p} K_w^{[i]},
/// comparable to a unit vector of A^p.
inline AnalyticFunction normalized_kernel(Complex w, int i, double gamma, double p) {
    const double factor = std::pow(1.0 - std::norm(w), gamma + i - 2.0 / p);
    return AnalyticFunction::power_kernel(w, i, gamma + i, Complex{factor, 0.0});
}

/// A^2 reproducing kernel of order i at z, as a function of w:
/// d^i/d conj(z)^i (1 - conj(z) w)^{-2} = (i+1)! w^i (1 - conj(z) w)^{-(2+i)}.
inline AnalyticFunction reproducing_kernel(Complex z, int i = 0) {
    if (i < 0) throw contract_error("reproducing_kernel: order must be >= 0");
    return AnalyticFunction::power_kernel(z, i, 2.0 + i, Complex{factorial(i + 1), 0.0});
}

/// ||K_w^{[i]}||_p * (1-|w|^2)^{gamma+i-2/p}: the two-sided-estimate
/// ratio, to be window-bounded in w.
inline double kernel_norm_ratio(Complex w, int i, double gamma, double p,
                                const QuadratureRule& rule) {
    if (!(gamma > 1.0 + 2.0 / p))
        throw contract_error("kernel_norm_ratio: gamma must exceed 1 + 2/p");
    const double norm = ap_norm(kernel(w, i, gamma), p, rule);
    return norm * std::pow(1.0 - std::norm(w), gamma + i - 2.0 / p);
}

/// Gamma_beta^{n,m} = prod_{j=n}^{m} (beta + j).
inline double gamma_product(double beta, int n, int m) {
    if (!(beta > 0.0)) throw contract_error("gamma_product: need beta > 0");
    if (n < 0 || m < n) throw contract_error("gamma_product: need 0 <= n <= m");
    double p = 1.0;
    for (int j = n; j <= m; ++j) p *= beta + j;
    return p;
}

/// The alternating product identity behind the kernel elimination:
///
///   b_j = Gamma_beta^{n,2n-j}
///       + sum_{i=1}^{n-j} (-1)^i C(n+1-j,i) Gamma_beta^{n-i+1,n} Gamma_beta^{n,2n-i-j}
///       + (-1)^{n-j+1} Gamma_beta^{j,n}
///
/// vanishes identically (it is the (n+1-j)-th derivative at 0 of the
/// constant function (1-x)^{-(beta+n)} (1-x)^{beta+n}). The individual
/// terms reach 1e12 while the sum is 0, so terms are sorted by
/// magnitude and added with compensated summation.
inline double bj_residual(double beta, int n, int j) {
    if (n < 1) throw contract_error("bj_residual: need n >= 1");
    if (j < 0 || j > n - 1) throw contract_error("bj_residual: need 0 <= j <= n-1");
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(n - j) + 2);
    terms.push_back(gamma_product(beta, n, 2 * n - j));
    for (int i = 1; i <= n - j; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        terms.push_back(sign * binomial(n + 1 - j, i) * gamma_product(beta, n - i + 1, n) *
                        gamma_product(beta, n, 2 * n - i - j));
    }
    terms.push_back(((n - j + 1) % 2 == 0 ? 1.0 : -1.0) * gamma_product(beta, j, n));
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    CompensatedSum s;
    for (double t : terms) s.add(t);
    return s.value();
}

/// || sum_i alpha_i K_w^{[i]} ||_p / sum_i |alpha_i| ||K_w^{[i]}||_p,
/// in (0, 1]. The lower estimate asserts a uniform positive bound; this
/// returns the ratio for sweep testing.
inline double combination_lower_ratio(Complex w, std::span<const Complex> alphas,
                                      double gamma, double p, const QuadratureRule& rule) {
    if (alphas.empty()) throw contract_error("combination_lower_ratio: empty combination");
    for (const Complex& a : alphas)
        if (std::abs(a) == 0.0)
            throw contract_error("combination_lower_ratio: coefficients must be nonzero");
    const int n = static_cast<int>(alphas.size()) - 1;
    std::vector<AnalyticFunction> ks;
    for (int i = 0; i <= n; ++i) ks.push_back(kernel(w, i, gamma));
    const double numerator = std::pow(
        integrate_fn(rule,
                     [&](Complex z) {
                         Complex sum{0.0, 0.0};
                         for (int i = 0; i <= n; ++i)
                             sum += alphas[static_cast<std::size_t>(i)] * ks[i].evaluate(z);
                         return std::pow(std::abs(sum), p);
                     }),
        1.0 / p);
    double denominator = 0.0;
    for (int i = 0; i <= n; ++i)
        denominator += std::abs(alphas[static_cast<std::size_t>(i)]) * ap_norm(ks[i], p, rule);
    return numerator / denominator;
}

/// Same ratio through the exact A^2 coefficient route (p = 2 only);
/// quadrature-free, valid for |w| away from the boundary.
inline double combination_lower_ratio_a2(Complex w, std::span<const Complex> alphas,
                                         double gamma) {
    if (alphas.empty()) throw contract_error("combination_lower_ratio_a2: empty combination");
    const int n = static_cast<int>(alphas.size()) - 1;
    // series degree from the geometric tail of |w|
    const double aw = std::abs(w);
    std::size_t degree = 256;
    if (aw > 0.0) {
        const double need = std::log(1e-16) / std::log(std::max(aw, 0.1));
        degree = std::min<std::size_t>(kMaxSeriesDegree,
                                       std::max<std::size_t>(256, static_cast<std::size_t>(need) * 2));
    }
    std::vector<Complex> combo(degree + 1, Complex{0.0, 0.0});
    double denominator = 0.0;
    for (int i = 0; i <= n; ++i) {
        const AnalyticFunction ki = kernel(w, i, gamma);
        for (std::size_t k = 0; k <= degree; ++k)
            combo[k] += alphas[static_cast<std::size_t>(i)] * ki.taylor_coefficient(k);
        denominator += std::abs(alphas[static_cast<std::size_t>(i)]) * a2_norm_coefficient(ki);
    }
    const double numerator = a2_norm_coefficient(AnalyticFunction::taylor(std::move(combo)));
    return numerator / denominator;
}

} // namespace bergman
