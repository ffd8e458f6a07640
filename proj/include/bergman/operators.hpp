#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/carleson.hpp"
#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/kernels.hpp"
#include "bergman/norms.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// Symbols (g_0, ..., g_{n-1}) of the order-n integral operator
/// f -> I^n(f g_0 + f' g_1 + ... + f^{(n-1)} g_{n-1}).
class VolterraSpec {
public:
    static VolterraSpec general(std::vector<AnalyticFunction> symbols) {
        if (symbols.empty()) throw contract_error("volterra spec needs n >= 1 symbols");
        VolterraSpec s;
        s.symbols_ = std::move(symbols);
        return s;
    }

    /// Single-symbol form: g_j = a_j g^{(n-j)}, expanded at construction.
    static VolterraSpec chalmoukis(const AnalyticFunction& g, std::vector<Complex> a,
                                   std::size_t degree = kDefaultSeriesDegree) {
        if (a.empty()) throw contract_error("chalmoukis spec needs n >= 1 coefficients");
        const int n = static_cast<int>(a.size());
        std::vector<AnalyticFunction> symbols;
        symbols.reserve(a.size());
        for (int j = 0; j < n; ++j)
            symbols.push_back(scale(g.nth_derivative(n - j, degree), a[static_cast<std::size_t>(j)]));
        VolterraSpec s;
        s.symbols_ = std::move(symbols);
        s.single_ = g;
        s.weights_ = std::move(a);
        return s;
    }

    int order() const { return static_cast<int>(symbols_.size()); }
    const std::vector<AnalyticFunction>& symbols() const { return symbols_; }
    bool is_chalmoukis() const { return single_.has_value(); }
    const AnalyticFunction& single_symbol() const {
        if (!single_) throw contract_error("not a chalmoukis-form spec");
        return *single_;
    }

private:
    std::vector<AnalyticFunction> symbols_;
    std::optional<AnalyticFunction> single_;
    std::vector<Complex> weights_;
};

/// sum_k g_k(z) f^{(k)}(z) at z; equals the n-th derivative of the
/// operator output, with no series truncation.
inline Complex volterra_inner_value(const VolterraSpec& spec, const AnalyticFunction& f,
                                    Complex z) {
    const int n = spec.order();
    const auto jet = evaluate_jet(f, z, n - 1);
    Complex s{0.0, 0.0};
    for (int k = 0; k < n; ++k)
        s += spec.symbols()[static_cast<std::size_t>(k)].evaluate(z) *
             jet[static_cast<std::size_t>(k)];
    return s;
}

/// Series route: products and n-fold integration in truncated
/// arithmetic. The result has vanishing derivatives of order < n at 0.
inline AnalyticFunction apply_volterra(const VolterraSpec& spec, const AnalyticFunction& f,
                                       std::size_t degree = kDefaultSeriesDegree) {
    const int n = spec.order();
    const AnalyticFunction ft = f.is_taylor() ? f : f.truncated(degree);
    AnalyticFunction acc = AnalyticFunction::zero();
    AnalyticFunction fk = ft;
    for (int k = 0; k < n; ++k) {
        acc = add(acc, multiply(fk, spec.symbols()[static_cast<std::size_t>(k)], degree), degree);
        if (k + 1 < n) fk = fk.derivative();
    }
    return integrate_n(acc, n, degree);
}

/// Symbols (u_0, ..., u_n) and the self-map phi of the sum
/// f -> sum_k u_k (f^{(k)} o phi).
struct CompositionSumSpec {
    std::vector<AnalyticFunction> u;
    SelfMap phi;

    CompositionSumSpec(std::vector<AnalyticFunction> symbols, SelfMap map)
        : u(std::move(symbols)), phi(std::move(map)) {
        if (u.empty()) throw contract_error("composition sum needs n+1 >= 1 symbols");
    }

    int order() const { return static_cast<int>(u.size()) - 1; }
};

inline Complex comp_sum_value(const CompositionSumSpec& spec, const AnalyticFunction& f,
                              Complex z) {
    const int n = spec.order();
    const Complex w = spec.phi(z);
    const auto jet = evaluate_jet(f, w, n);
    Complex s{0.0, 0.0};
    for (int k = 0; k <= n; ++k)
        s += spec.u[static_cast<std::size_t>(k)].evaluate(z) * jet[static_cast<std::size_t>(k)];
    return s;
}

/// Pointwise application on grid nodes.
inline std::vector<Complex> apply_comp_sum(const CompositionSumSpec& spec,
                                           const AnalyticFunction& f,
                                           std::span<const Complex> nodes) {
    std::vector<Complex> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) out[j] = comp_sum_value(spec, f, nodes[j]);
    return out;
}

// ---------------------------------------------------------------------------
// symbol criteria

enum class SymbolVerdict { compact, bounded, must_be_zero, fail };

inline std::string to_string(SymbolVerdict v) {
    switch (v) {
        case SymbolVerdict::compact: return "COMPACT";
        case SymbolVerdict::bounded: return "BOUNDED";
        case SymbolVerdict::must_be_zero: return "MUST_BE_ZERO";
        default: return "FAIL";
    }
}

struct SymbolCheck {
    int k = 0;
    double alpha = 0.0;
    SymbolVerdict verdict = SymbolVerdict::fail;
    BlochReport bloch; // empty for forced-zero symbols
};

struct GrowthCriterionReport {
    double p = 0.0, q = 0.0;
    std::vector<SymbolCheck> symbols;
    bool bounded = false;
    bool compact = false;
};

/// Weighted-sup criterion for p <= q: symbol k must lie in the
/// Bloch-type class with exponent (n-k) - 2/p + 2/q, and must vanish
/// outright when that exponent is negative (strictly: also at zero, for
/// compactness).
inline GrowthCriterionReport criterion_T13(const VolterraSpec& spec, double p, double q,
                                           const BoundaryGrid& grid = {},
                                           const ProfileThresholds& th = {}) {
    if (!(p > 0.0 && q > 0.0)) throw contract_error("criterion_T13: need p, q > 0");
    if (p > q)
        throw regime_error("criterion_T13 handles p <= q; use criterion_T14 for q < p");
    const int n = spec.order();
    const double tau = 2.0 / p - 2.0 / q;
    GrowthCriterionReport rep;
    rep.p = p;
    rep.q = q;
    rep.bounded = true;
    rep.compact = true;
    for (int k = 0; k < n; ++k) {
        SymbolCheck chk;
        chk.k = k;
        chk.alpha = (n - k) - tau;
        const auto& g = spec.symbols()[static_cast<std::size_t>(k)];
        const bool zero = g.is_identically_zero();
        if (chk.alpha < 1e-12) {
            // nonpositive exponent: boundedness forces g_k = 0 when it is
            // negative; at exactly 0 boundedness needs sup |g_k| finite
            // and compactness still forces g_k = 0
            if (zero) {
                chk.verdict = SymbolVerdict::must_be_zero;
            } else if (chk.alpha < -1e-12) {
                chk.verdict = SymbolVerdict::fail;
                rep.bounded = false;
                rep.compact = false;
            } else {
                chk.bloch = bloch_norm(g, 0, 1e-9, grid, th); // sup profile, no weight
                const bool sup_finite = chk.bloch.verdict != BoundaryClass::unbounded;
                chk.verdict = sup_finite ? SymbolVerdict::bounded : SymbolVerdict::fail;
                rep.bounded = rep.bounded && sup_finite;
                rep.compact = false;
            }
        } else if (zero) {
            chk.verdict = SymbolVerdict::compact;
        } else {
            chk.bloch = bloch_norm(g, 0, chk.alpha, grid, th);
            switch (chk.bloch.verdict) {
                case BoundaryClass::little: chk.verdict = SymbolVerdict::compact; break;
                case BoundaryClass::big_only:
                    chk.verdict = SymbolVerdict::bounded;
                    rep.compact = false;
                    break;
                default:
                    chk.verdict = SymbolVerdict::fail;
                    rep.bounded = false;
                    rep.compact = false;
            }
        }
        rep.symbols.push_back(chk);
    }
    return rep;
}

struct IntegralSymbolCheck {
    int k = 0;
    double value_lo = 0.0, value_hi = 0.0;
    bool stable = false;
};

struct IntegralCriterionReport {
    double p = 0.0, q = 0.0, exponent = 0.0;
    std::vector<IntegralSymbolCheck> symbols;
    bool bounded = false; // == compact in this regime
    // Chalmoukis reduction: direct membership of g in A^{pq/(p-q)}
    bool has_single_check = false;
    double single_lo = 0.0, single_hi = 0.0;
    bool single_stable = false;
};

/// Integral criterion for q < p: finite mass of
/// |g_k(z) (1-|z|^2)^{n-k}|^{pq/(p-q)}, certified by r_cut stability.
inline IntegralCriterionReport criterion_T14(const VolterraSpec& spec, double p, double q,
                                             const QuadratureRule& rule_lo,
                                             const QuadratureRule& rule_hi,
                                             double stability_tol = 0.05) {
    if (!(p > 0.0 && q > 0.0)) throw contract_error("criterion_T14: need p, q > 0");
    if (q >= p)
        throw regime_error("criterion_T14 handles q < p; use criterion_T13 for p <= q");
    const int n = spec.order();
    const double e = p * q / (p - q);
    IntegralCriterionReport rep;
    rep.p = p;
    rep.q = q;
    rep.exponent = e;
    rep.bounded = true;
    for (int k = 0; k < n; ++k) {
        const auto& g = spec.symbols()[static_cast<std::size_t>(k)];
        auto mass = [&](const QuadratureRule& rule) {
            return integrate_fn(rule, [&](Complex z) {
                return std::pow(std::abs(g.evaluate(z)) * std::pow(1.0 - std::norm(z), n - k),
                                e);
            });
        };
        IntegralSymbolCheck chk;
        chk.k = k;
        chk.value_lo = mass(rule_lo);
        chk.value_hi = mass(rule_hi);
        chk.stable = std::abs(chk.value_hi - chk.value_lo) <=
                     stability_tol * std::max(chk.value_hi, 1e-300);
        rep.bounded = rep.bounded && chk.stable;
        rep.symbols.push_back(chk);
    }
    if (spec.is_chalmoukis()) {
        const auto& g = spec.single_symbol();
        auto mass = [&](const QuadratureRule& rule) {
            return integrate_fn(
                rule, [&](Complex z) { return std::pow(std::abs(g.evaluate(z)), e); });
        };
        rep.has_single_check = true;
        rep.single_lo = mass(rule_lo);
        rep.single_hi = mass(rule_hi);
        rep.single_stable = std::abs(rep.single_hi - rep.single_lo) <=
                            stability_tol * std::max(rep.single_hi, 1e-300);
    }
    return rep;
}

struct C15Report {
    double p = 0.0, q = 0.0, alpha = 0.0;
    SymbolVerdict verdict = SymbolVerdict::fail;
    BlochReport bloch;
};

/// Single-symbol criterion for p <= q with 2/p - 2/q < 1: membership of
/// g in the order-1 Bloch-type class with exponent 1 - 2/p + 2/q.
inline C15Report criterion_C15(const AnalyticFunction& g, double p, double q,
                               const BoundaryGrid& grid = {},
                               const ProfileThresholds& th = {}) {
    if (!(p > 0.0 && q > 0.0)) throw contract_error("criterion_C15: need p, q > 0");
    if (p > q)
        throw regime_error("criterion_C15 handles p <= q; use criterion_T14 for q < p");
    const double tau = 2.0 / p - 2.0 / q;
    if (tau >= 1.0)
        throw regime_error("criterion_C15 requires 2/p - 2/q < 1");
    C15Report rep;
    rep.p = p;
    rep.q = q;
    rep.alpha = 1.0 - tau;
    rep.bloch = bloch_norm(g, 1, rep.alpha, grid, th);
    switch (rep.bloch.verdict) {
        case BoundaryClass::little: rep.verdict = SymbolVerdict::compact; break;
        case BoundaryClass::big_only: rep.verdict = SymbolVerdict::bounded; break;
        default: rep.verdict = SymbolVerdict::fail;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// empirical norms

struct EmpiricalNormOptions {
    int max_octave = 8;  // witnesses at |w| = 1 - 2^-m, m = 1..max_octave
    int i_max = 2;       // kernel orders in the family
    int poly_count = 8;
    int poly_degree = 10;
    unsigned seed = 20240902;
    double growth_ratio = 1.3; // tail growth over 3 octaves flags blow-up
    // quadrature for the numerators; the angular count scales with the
    // witness depth so every peak stays resolved
    int radial_n = 192;
    int angular_base = 24;
    double r_cut = 0.9999;
};

struct WitnessSample {
    Complex w;
    int i = 0;
    double ratio = 0.0;
};

struct EmpiricalNormReport {
    double estimate = 0.0;              // max ratio over the family
    std::vector<double> octave_profile; // max kernel-witness ratio per octave
    std::vector<WitnessSample> witnesses;
    std::vector<double> poly_ratios;
    bool growing = false;
    std::string numerator_norm; // "littlewood_paley" (volterra) or "direct"
    double p = 0.0, q = 0.0, gamma = 0.0;
};

namespace detail {

template <typename Numerator>
EmpiricalNormReport empirical_norm_impl(Numerator&& op_norm_q, double p, double q,
                                        const EmpiricalNormOptions& opt,
                                        std::string numerator_name) {
    EmpiricalNormReport rep;
    rep.p = p;
    rep.q = q;
    rep.gamma = default_gamma(p);
    rep.numerator_norm = std::move(numerator_name);
    rep.octave_profile.assign(static_cast<std::size_t>(opt.max_octave) + 1, 0.0);

    const QuadratureRule base_rule = disk_rule(opt.radial_n, 8 * opt.angular_base, opt.r_cut);
    auto f_norm = [&](const AnalyticFunction& f, const QuadratureRule& rule) {
        return p == 2.0 ? a2_norm_coefficient(f) : ap_norm(f, p, rule);
    };

    for (int m = 1; m <= opt.max_octave; ++m) {
        const QuadratureRule rule =
            disk_rule(opt.radial_n,
                      std::max(8 * opt.angular_base,
                               opt.angular_base * (1 << std::min(m, 24))),
                      opt.r_cut);
        const Complex w{1.0 - std::pow(2.0, -m), 0.0};
        for (int i = 0; i <= opt.i_max; ++i) {
            const AnalyticFunction f = normalized_kernel(w, i, rep.gamma, p);
            const double ratio = op_norm_q(f, rule) / f_norm(f, rule);
            rep.witnesses.push_back({w, i, ratio});
            rep.octave_profile[static_cast<std::size_t>(m)] =
                std::max(rep.octave_profile[static_cast<std::size_t>(m)], ratio);
            rep.estimate = std::max(rep.estimate, ratio);
        }
    }

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < opt.poly_count; ++t) {
        std::vector<Complex> c(static_cast<std::size_t>(opt.poly_degree) + 1);
        for (Complex& x : c) x = Complex{g(rng), g(rng)};
        const AnalyticFunction f = AnalyticFunction::taylor(std::move(c));
        const double ratio = op_norm_q(f, base_rule) / f_norm(f, base_rule);
        rep.poly_ratios.push_back(ratio);
        rep.estimate = std::max(rep.estimate, ratio);
    }

    const std::size_t last = rep.octave_profile.size() - 1;
    const std::size_t back = last >= 3 ? last - 3 : 1;
    rep.growing = rep.octave_profile[back] > 0.0 &&
                  rep.octave_profile[last] >= opt.growth_ratio * rep.octave_profile[back];
    return rep;
}

} // namespace detail

/// Lower-bound style estimate of ||T f||_q / ||f||_p over kernel
/// witnesses marching to the boundary plus seeded polynomials. The
/// Volterra numerator uses the derivative form
/// sum_{j<n}|(Tf)^{(j)}(0)| + ||(1-|z|^2)^n sum_k g_k f^{(k)}||_q
/// (head terms vanish), which is exact pointwise for kernel witnesses
/// at any |w| -- an equivalent norm, so trends and saturation are
/// meaningful rather than the absolute scale.
inline EmpiricalNormReport empirical_operator_norm(const VolterraSpec& spec, double p, double q,
                                                   const EmpiricalNormOptions& opt = {}) {
    const int n = spec.order();
    auto op_norm_q = [&](const AnalyticFunction& f, const QuadratureRule& rule) {
        const double integral = integrate_fn(rule, [&](Complex z) {
            const double wgt = std::pow(1.0 - std::norm(z), n);
            return std::pow(wgt * std::abs(volterra_inner_value(spec, f, z)), q);
        });
        return std::pow(integral, 1.0 / q);
    };
    return detail::empirical_norm_impl(op_norm_q, p, q, opt, "littlewood_paley");
}

inline EmpiricalNormReport empirical_operator_norm(const CompositionSumSpec& spec, double p,
                                                   double q,
                                                   const EmpiricalNormOptions& opt = {}) {
    auto op_norm_q = [&](const AnalyticFunction& f, const QuadratureRule& rule) {
        const double integral = integrate_fn(rule, [&](Complex z) {
            return std::pow(std::abs(comp_sum_value(spec, f, z)), q);
        });
        return std::pow(integral, 1.0 / q);
    };
    return detail::empirical_norm_impl(op_norm_q, p, q, opt, "direct");
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt and rigidity

struct HSReport {
    int basis_size = 0;
    std::vector<double> basis_terms; // ||L e_k||_2^2, extrapolated to the full disk
    double basis_sum = 0.0;
    double tail_ratio = 0.0; // last-terms ratio; < 1 certifies a convergent tail
    std::vector<double> integrals;   // per j, extrapolated
    std::vector<double> integrals_lo, integrals_hi;
    bool integrals_stable = false;
    bool hilbert_schmidt = false;
    double adjoint_residual = 0.0; // max relative residual of the adjoint identity
};

/// A^2 Hilbert-Schmidt test: basis sum over e_k = sqrt(k+1) z^k,
/// the per-order integrals |u_j|^2 / (1-|phi|^2)^{2+2j}, and the
/// kernel adjoint identity at random samples.
inline HSReport hilbert_schmidt_check(const CompositionSumSpec& spec, int basis_size,
                                      const QuadratureRule& rule_lo,
                                      const QuadratureRule& rule_hi, int adjoint_samples = 50,
                                      unsigned seed = 20240903, double stability_tol = 0.05) {
    if (basis_size < 4) throw contract_error("hilbert_schmidt_check: need basis_size >= 4");
    const int n = spec.order();
    HSReport rep;
    rep.basis_size = basis_size;

    // precompute u_j and phi on both rules
    auto prep = [&](const QuadratureRule& rule) {
        std::vector<Complex> phi(rule.size());
        std::vector<std::vector<Complex>> u(spec.u.size(), std::vector<Complex>(rule.size()));
        for (std::size_t idx = 0; idx < rule.size(); ++idx) {
            phi[idx] = spec.phi(rule.nodes[idx]);
            for (std::size_t j = 0; j < spec.u.size(); ++j)
                u[j][idx] = spec.u[j].evaluate(rule.nodes[idx]);
        }
        return std::make_pair(std::move(phi), std::move(u));
    };
    const auto [phi_lo, u_lo] = prep(rule_lo);
    const auto [phi_hi, u_hi] = prep(rule_hi);

    auto basis_term = [&](int k, const QuadratureRule& rule, const std::vector<Complex>& phi,
                          const std::vector<std::vector<Complex>>& u) {
        std::vector<double> terms(rule.size());
        const double scale = std::sqrt(static_cast<double>(k + 1));
        for (std::size_t idx = 0; idx < rule.size(); ++idx) {
            Complex s{0.0, 0.0};
            for (int j = 0; j <= n; ++j) {
                if (j > k) break;
                s += u[static_cast<std::size_t>(j)][idx] * falling_factorial(k, j) *
                     cpow_int(phi[idx], k - j);
            }
            terms[idx] = std::norm(scale * s) * rule.weights[idx];
        }
        return pairwise_sum<double>(terms);
    };

    for (int k = 0; k < basis_size; ++k) {
        const double lo = basis_term(k, rule_lo, phi_lo, u_lo);
        const double hi = basis_term(k, rule_hi, phi_hi, u_hi);
        rep.basis_terms.push_back(lo > 0.0 && hi > 0.0
                                      ? rcut_extrapolate(lo, rule_lo.r_cut, hi, rule_hi.r_cut)
                                      : hi);
        rep.basis_sum += rep.basis_terms.back();
    }
    const std::size_t K = rep.basis_terms.size();
    const double head = rep.basis_terms[K - 4] + rep.basis_terms[K - 3];
    const double tail = rep.basis_terms[K - 2] + rep.basis_terms[K - 1];
    rep.tail_ratio = head > 0.0 ? tail / head : 0.0;

    rep.integrals_stable = true;
    for (int j = 0; j <= n; ++j) {
        auto mass = [&](const QuadratureRule& rule, const std::vector<Complex>& phi,
                        const std::vector<std::vector<Complex>>& u) {
            std::vector<double> terms(rule.size());
            for (std::size_t idx = 0; idx < rule.size(); ++idx)
                terms[idx] = std::norm(u[static_cast<std::size_t>(j)][idx]) /
                             std::pow(1.0 - std::norm(phi[idx]), 2.0 + 2.0 * j) *
                             rule.weights[idx];
            return pairwise_sum<double>(terms);
        };
        const double lo = mass(rule_lo, phi_lo, u_lo);
        const double hi = mass(rule_hi, phi_hi, u_hi);
        rep.integrals_lo.push_back(lo);
        rep.integrals_hi.push_back(hi);
        rep.integrals.push_back(lo > 0.0 && hi > 0.0
                                    ? rcut_extrapolate(lo, rule_lo.r_cut, hi, rule_hi.r_cut)
                                    : hi);
        rep.integrals_stable =
            rep.integrals_stable && std::abs(hi - lo) <= stability_tol * std::max(hi, 1e-300);
    }
    rep.hilbert_schmidt = rep.tail_ratio < 1.0 && rep.integrals_stable;

    // adjoint identity <Lf, K_z> = <f, sum_j conj(u_j(z)) K_{phi(z)}^{[j]}>
    // checked pointwise-vs-series at random samples
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> ur(0.0, 0.8);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * std::numbers::pi);
    for (int s = 0; s < adjoint_samples; ++s) {
        std::vector<Complex> c(13);
        for (Complex& x : c) x = Complex{g(rng), g(rng)};
        const AnalyticFunction f = AnalyticFunction::taylor(std::move(c));
        const double rr = ur(rng), th = ua(rng);
        const Complex z{rr * std::cos(th), rr * std::sin(th)};
        const Complex lhs = comp_sum_value(spec, f, z);
        Complex rhs{0.0, 0.0};
        for (int j = 0; j <= n; ++j)
            rhs += spec.u[static_cast<std::size_t>(j)].evaluate(z) *
                   a2_inner_coefficient(f, reproducing_kernel(spec.phi(z), j), 1024);
        rep.adjoint_residual = std::max(
            rep.adjoint_residual, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return rep;
}

struct RigidityReport {
    std::vector<CarlesonReport> components; // pull-back measure of each order
    CarlesonVerdict component_aggregate = CarlesonVerdict::bounded;
    EmpiricalNormReport empirical;
    bool agree = false;
    double p = 0.0, q = 0.0;
};

/// Pull-back rigidity: each mu_k = |u_k|^q dA pushed through phi gets
/// the (k,p,q)-Carleson verdict; the combined operator's empirical
/// witness profile must match the aggregate (growth iff some component
/// diverges).
inline RigidityReport rigidity_T18(const CompositionSumSpec& spec, double p, double q,
                                   const BergmanLattice& lattice,
                                   const QuadratureRule& push_rule,
                                   const QuadratureRule& integral_rule_lo,
                                   const QuadratureRule& integral_rule_hi,
                                   const EmpiricalNormOptions& opt = {},
                                   const ProfileThresholds& th = {}) {
    if (!(p > 0.0 && q > 0.0)) throw contract_error("rigidity_T18: need p, q > 0");
    RigidityReport rep;
    rep.p = p;
    rep.q = q;
    const int n = spec.order();

    std::vector<Complex> phi_vals(push_rule.size());
    for (std::size_t idx = 0; idx < push_rule.size(); ++idx)
        phi_vals[idx] = spec.phi(push_rule.nodes[idx]);

    for (int k = 0; k <= n; ++k) {
        std::vector<MeasureAtom> atoms(push_rule.size());
        for (std::size_t idx = 0; idx < push_rule.size(); ++idx) {
            const double w =
                std::pow(std::abs(spec.u[static_cast<std::size_t>(k)].evaluate(
                             push_rule.nodes[idx])),
                         q) *
                push_rule.weights[idx];
            atoms[idx] = {phi_vals[idx], w};
        }
        const DiscreteMeasure mu_k = DiscreteMeasure::from_atoms(std::move(atoms));
        rep.components.push_back(
            p <= q ? carleson_statistic(mu_k, k, p, q, lattice, th)
                   : carleson_integral_statistic(mu_k, k, p, q, lattice.r, integral_rule_lo,
                                                 integral_rule_hi));
    }
    rep.component_aggregate = detail::aggregate_components(rep.components, q < p);
    rep.empirical = empirical_operator_norm(spec, p, q, opt);
    rep.agree = rep.empirical.growing == (rep.component_aggregate == CarlesonVerdict::diverging);
    return rep;
}

} // namespace bergman
