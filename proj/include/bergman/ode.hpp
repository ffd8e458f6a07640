#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/errors.hpp"
#include "bergman/norms.hpp"
#include "bergman/operators.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// f^{(n)} + g_{n-1} f^{(n-1)} + ... + g_0 f = F with prescribed
/// derivatives at the origin.
struct OdeProblem {
    std::vector<AnalyticFunction> coefficients; // g_0 .. g_{n-1}
    AnalyticFunction forcing = AnalyticFunction::zero();
    std::vector<Complex> initial; // f(0), f'(0), ..., f^{(n-1)}(0)

    int order() const { return static_cast<int>(coefficients.size()); }

    void validate() const {
        if (coefficients.empty()) throw contract_error("ode problem needs order >= 1");
        if (initial.size() != coefficients.size())
            throw contract_error("ode problem needs exactly n initial values");
    }
};

/// F_0 = I^n F + sum_{i<n} f^{(i)}(0)/i! z^i: the unique right-hand
/// side for the fixed-point form, matching the initial data.
inline AnalyticFunction construct_F0(const OdeProblem& problem,
                                     std::size_t degree = kDefaultSeriesDegree) {
    problem.validate();
    const int n = problem.order();
    AnalyticFunction F0 = integrate_n(problem.forcing, n, degree);
    std::vector<Complex> head(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        head[static_cast<std::size_t>(i)] = problem.initial[static_cast<std::size_t>(i)] /
                                            factorial(i);
    return add(F0, AnalyticFunction::taylor(std::move(head)), degree + n);
}

struct NeumannCertificate {
    bool converged = false;
    int iterations = 0;
    std::vector<double> distances;   // A^p distance between successive iterates
    std::vector<double> ratios;      // contraction ratios distances[m]/distances[m-1]
    std::vector<double> bloch_norms; // ||g_k||_{0,n-k}, advisory only
    double residual_sup = 0.0;       // max |f^{(n)} + sum g_k f^{(k)} - F| on |z| <= 0.9
    double tol = 0.0;
    std::string message;
};

struct NeumannResult {
    std::optional<AnalyticFunction> solution;
    NeumannCertificate certificate;
};

/// Fixed-point iteration f <- F_0 - I_g^{(n)} f from f = F_0; stops
/// when successive iterates are closer than tol in A^p. Convergence of
/// the iteration itself is the operative criterion; the Bloch norms of
/// the symbols are reported so the sufficient smallness condition can
/// be audited, not enforced.
inline NeumannResult neumann_solve(const OdeProblem& problem, double p, int max_iter,
                                   double tol, const QuadratureRule& rule,
                                   std::size_t degree = kDefaultSeriesDegree) {
    problem.validate();
    if (!(p > 0.0)) throw contract_error("neumann_solve: need p > 0");
    if (!(tol > 0.0)) throw contract_error("neumann_solve: need tol > 0");
    const int n = problem.order();
    const VolterraSpec volterra = VolterraSpec::general(problem.coefficients);

    NeumannResult res;
    res.certificate.tol = tol;
    for (int k = 0; k < n; ++k)
        res.certificate.bloch_norms.push_back(
            bloch_norm(problem.coefficients[static_cast<std::size_t>(k)], 0,
                       static_cast<double>(n - k))
                .norm);

    const AnalyticFunction F0 = construct_F0(problem, degree);
    AnalyticFunction f = F0;
    int consecutive_expanding = 0;
    for (int m = 1; m <= max_iter; ++m) {
        const AnalyticFunction next = add(F0, scale(apply_volterra(volterra, f, degree),
                                                    Complex{-1.0, 0.0}),
                                          degree);
        const AnalyticFunction diff = add(next, scale(f, Complex{-1.0, 0.0}), degree);
        const double dist = ap_norm(diff, p, rule);
        res.certificate.iterations = m;
        if (!res.certificate.distances.empty()) {
            const double prev = res.certificate.distances.back();
            res.certificate.ratios.push_back(prev > 0.0 ? dist / prev : 0.0);
            consecutive_expanding = res.certificate.ratios.back() >= 1.0
                                        ? consecutive_expanding + 1
                                        : 0;
        }
        res.certificate.distances.push_back(dist);
        f = next;
        if (dist < tol) {
            res.certificate.converged = true;
            break;
        }
        if (consecutive_expanding >= 5 && dist > 1e6) {
            res.certificate.message = "sustained expansion: no contraction after " +
                                      std::to_string(m) + " iterations";
            return res;
        }
    }
    if (!res.certificate.converged) {
        if (res.certificate.message.empty())
            res.certificate.message = "no convergence within max_iter";
        return res;
    }

    // equation residual on the inner region
    double residual = 0.0;
    for (std::size_t idx = 0; idx < rule.size(); ++idx) {
        const Complex z = rule.nodes[idx];
        if (std::abs(z) > 0.9) continue;
        Complex lhs = f.evaluate(z, n);
        for (int k = 0; k < n; ++k)
            lhs += problem.coefficients[static_cast<std::size_t>(k)].evaluate(z) *
                   f.evaluate(z, k);
        residual = std::max(residual, std::abs(lhs - problem.forcing.evaluate(z)));
    }
    res.certificate.residual_sup = residual;
    res.solution = f;
    return res;
}

/// Independent oracle: the standard coefficient recurrence for
/// f^{(n)} = F - sum_k g_k f^{(k)}, solved upward from the initial
/// data. Exact for polynomial data up to the truncation degree.
inline AnalyticFunction taylor_ode_oracle(const OdeProblem& problem, std::size_t N) {
    problem.validate();
    const int n = problem.order();
    if (N + 1 < static_cast<std::size_t>(n))
        throw contract_error("taylor_ode_oracle: degree below the order");
    std::vector<std::vector<Complex>> g(problem.coefficients.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = problem.coefficients[k].truncated(N).coefficients();
    const std::vector<Complex> F = problem.forcing.truncated(N).coefficients();

    std::vector<Complex> c(N + 1, Complex{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        c[static_cast<std::size_t>(i)] = problem.initial[static_cast<std::size_t>(i)] /
                                         factorial(i);
    for (std::size_t m = 0; m + n <= N; ++m) {
        // coefficient of z^m in F - sum_k g_k f^{(k)}
        Complex rhs = m < F.size() ? F[m] : Complex{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
            Complex conv{0.0, 0.0};
            for (std::size_t a = 0; a <= m; ++a) {
                const std::size_t b = m - a;
                conv += g[static_cast<std::size_t>(k)][a] *
                        falling_factorial(static_cast<double>(b + k), k) * c[b + k];
            }
            rhs -= conv;
        }
        // (m+n)! / m! c_{m+n} = rhs
        c[m + n] = rhs / rising_factorial(static_cast<double>(m + 1), n);
    }
    return AnalyticFunction::taylor(std::move(c));
}

} // namespace bergman
