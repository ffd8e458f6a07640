#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/numeric.hpp"

namespace bergman {

/// Working truncation degree for series arithmetic.
inline constexpr std::size_t kDefaultSeriesDegree = 256;
/// Hard cap; exceeding it is a configuration error, not silent loss.
inline constexpr std::size_t kMaxSeriesDegree = 16384;

/// An analytic function on the unit disk, either a truncated Taylor
/// series or the closed form  scale * z^i / (1 - conj(w) z)^s.
///
/// The closed form keeps |w| <= 1 so that boundary-singular symbols
/// like (1-z)^{-s} are expressible; evaluation stays finite for every
/// |z| < 1 either way.
class AnalyticFunction {
public:
    struct Taylor {
        std::vector<Complex> coeffs; // coeffs[k] multiplies z^k
    };
    struct PowerKernel {
        Complex w;
        int zpow = 0;      // i in z^i
        double exponent = 1.0; // s > 0
        Complex scale{1.0, 0.0};
    };

    static AnalyticFunction taylor(std::vector<Complex> coeffs) {
        if (coeffs.empty()) coeffs.push_back(Complex{0.0, 0.0});
        if (coeffs.size() - 1 > kMaxSeriesDegree)
            throw config_error("taylor degree exceeds configured cap");
        for (const Complex& c : coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw contract_error("taylor coefficients must be finite");
        AnalyticFunction f;
        f.repr_ = Taylor{std::move(coeffs)};
        return f;
    }

    static AnalyticFunction power_kernel(Complex w, int zpow, double exponent,
                                         Complex scale = Complex{1.0, 0.0}) {
        if (std::abs(w) > 1.0 + 1e-15)
            throw domain_error("power kernel parameter w must satisfy |w| <= 1");
        if (zpow < 0) throw contract_error("power kernel needs zpow >= 0");
        if (!(exponent > 0.0)) throw contract_error("power kernel needs exponent > 0");
        AnalyticFunction f;
        f.repr_ = PowerKernel{w, zpow, exponent, scale};
        return f;
    }

    static AnalyticFunction zero() { return taylor({Complex{0.0, 0.0}}); }
    static AnalyticFunction constant(Complex c) { return taylor({c}); }

    bool is_taylor() const { return std::holds_alternative<Taylor>(repr_); }
    bool is_power_kernel() const { return std::holds_alternative<PowerKernel>(repr_); }

    const std::vector<Complex>& coefficients() const {
        if (!is_taylor())
            throw contract_error("coefficients() requires a Taylor representation");
        return std::get<Taylor>(repr_).coeffs;
    }

    const PowerKernel& kernel_form() const {
        if (!is_power_kernel())
            throw contract_error("kernel_form() requires a power-kernel representation");
        return std::get<PowerKernel>(repr_);
    }

    std::size_t degree() const {
        return is_taylor() ? std::get<Taylor>(repr_).coeffs.size() - 1 : kMaxSeriesDegree;
    }

    /// Value of f^(deriv_order) at z, |z| < 1.
    ///
    /// Taylor: coefficient-shifted Horner. Power kernel: product rule on
    /// z^i and (1 - conj(w) z)^{-s}, exact to machine precision.
    Complex evaluate(Complex z, int deriv_order = 0) const {
        if (std::abs(z) >= 1.0)
            throw domain_error("evaluate: point must lie inside the unit disk");
        if (deriv_order < 0) throw contract_error("evaluate: negative derivative order");
        if (is_taylor()) {
            const auto& c = std::get<Taylor>(repr_).coeffs;
            const int n = static_cast<int>(c.size()) - 1;
            if (deriv_order > n) return Complex{0.0, 0.0};
            Complex acc{0.0, 0.0};
            for (int k = n; k >= deriv_order; --k)
                acc = acc * z + c[static_cast<std::size_t>(k)] * falling_factorial(k, deriv_order);
            return acc;
        }
        const auto& pk = std::get<PowerKernel>(repr_);
        const Complex wbar = std::conj(pk.w);
        const Complex base = Complex{1.0, 0.0} - wbar * z;
        Complex sum{0.0, 0.0};
        const Complex base_pow = std::pow(base, -pk.exponent - deriv_order);
        const int mmax = std::min(deriv_order, pk.zpow);
        for (int m = 0; m <= mmax; ++m) {
            const int kd = deriv_order - m; // derivatives landing on the kernel factor
            Complex term = binomial(deriv_order, m) * falling_factorial(pk.zpow, m) *
                           rising_factorial(pk.exponent, kd);
            term *= cpow_int(wbar, kd);
            term *= cpow_int(z, pk.zpow - m);
            term *= base_pow * cpow_int(base, m); // base^{-(s+kd)}
            sum += term;
        }
        return pk.scale * sum;
    }

    /// True when every coefficient (or the closed-form scale) vanishes.
    bool is_identically_zero() const {
        if (is_power_kernel()) return std::abs(std::get<PowerKernel>(repr_).scale) == 0.0;
        for (const Complex& c : std::get<Taylor>(repr_).coeffs)
            if (std::abs(c) != 0.0) return false;
        return true;
    }

    /// Taylor coefficient of z^k, valid for either representation.
    Complex taylor_coefficient(std::size_t k) const {
        if (is_taylor()) {
            const auto& c = std::get<Taylor>(repr_).coeffs;
            return k < c.size() ? c[k] : Complex{0.0, 0.0};
        }
        const auto& pk = std::get<PowerKernel>(repr_);
        if (k < static_cast<std::size_t>(pk.zpow)) return Complex{0.0, 0.0};
        const std::size_t m = k - static_cast<std::size_t>(pk.zpow);
        // (1-cz)^{-s} = sum_m rising(s,m)/m! (cz)^m
        double binom = 1.0;
        for (std::size_t j = 1; j <= m; ++j)
            binom *= (pk.exponent - 1.0 + static_cast<double>(j)) / static_cast<double>(j);
        return pk.scale * binom * cpow_int(std::conj(pk.w), static_cast<int>(m));
    }

    /// Truncation to a Taylor polynomial of the given degree; second
    /// member is the magnitude of the first dropped coefficient.
    std::pair<AnalyticFunction, double> truncated_with_residual(std::size_t degree) const {
        if (degree > kMaxSeriesDegree)
            throw config_error("truncation degree exceeds configured cap");
        std::vector<Complex> c(degree + 1);
        for (std::size_t k = 0; k <= degree; ++k) c[k] = taylor_coefficient(k);
        const double tail = std::abs(taylor_coefficient(degree + 1));
        return {taylor(std::move(c)), tail};
    }

    AnalyticFunction truncated(std::size_t degree = kDefaultSeriesDegree) const {
        return truncated_with_residual(degree).first;
    }

    /// Exact derivative where the representation permits it (Taylor, or
    /// kernel with zpow = 0); otherwise the derivative of the truncation
    /// at the given degree.
    AnalyticFunction derivative(std::size_t fallback_degree = kDefaultSeriesDegree) const {
        if (is_power_kernel()) {
            const auto& pk = std::get<PowerKernel>(repr_);
            if (pk.zpow == 0) {
                return power_kernel(pk.w, 0, pk.exponent + 1.0,
                                    pk.scale * pk.exponent * std::conj(pk.w));
            }
            return truncated(fallback_degree + 1).derivative();
        }
        const auto& c = std::get<Taylor>(repr_).coeffs;
        if (c.size() == 1) return zero();
        std::vector<Complex> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
        return taylor(std::move(d));
    }

    AnalyticFunction nth_derivative(int order,
                                    std::size_t fallback_degree = kDefaultSeriesDegree) const {
        AnalyticFunction f = *this;
        for (int j = 0; j < order; ++j) f = f.derivative(fallback_degree);
        return f;
    }

private:
    std::variant<Taylor, PowerKernel> repr_;
};

/// f, f', ..., f^(max_order) at z in one pass; kernel powers are shared
/// across the orders, so this is the cheap way to drive symbol sums.
inline std::vector<Complex> evaluate_jet(const AnalyticFunction& f, Complex z, int max_order) {
    if (max_order < 0) throw contract_error("evaluate_jet: negative order");
    std::vector<Complex> jet(static_cast<std::size_t>(max_order) + 1);
    if (f.is_taylor()) {
        for (int d = 0; d <= max_order; ++d) jet[static_cast<std::size_t>(d)] = f.evaluate(z, d);
        return jet;
    }
    if (std::abs(z) >= 1.0)
        throw domain_error("evaluate_jet: point must lie inside the unit disk");
    const auto& pk = f.kernel_form();
    const Complex wbar = std::conj(pk.w);
    const Complex base = Complex{1.0, 0.0} - wbar * z;
    std::vector<Complex> pows(static_cast<std::size_t>(max_order) + 1);
    pows[static_cast<std::size_t>(max_order)] = std::pow(base, -pk.exponent - max_order);
    for (int k = max_order; k > 0; --k)
        pows[static_cast<std::size_t>(k - 1)] = pows[static_cast<std::size_t>(k)] * base;
    for (int d = 0; d <= max_order; ++d) {
        Complex sum{0.0, 0.0};
        const int mmax = std::min(d, pk.zpow);
        for (int m = 0; m <= mmax; ++m) {
            const int kd = d - m;
            sum += binomial(d, m) * falling_factorial(pk.zpow, m) *
                   rising_factorial(pk.exponent, kd) * cpow_int(wbar, kd) *
                   cpow_int(z, pk.zpow - m) * pows[static_cast<std::size_t>(kd)];
        }
        jet[static_cast<std::size_t>(d)] = pk.scale * sum;
    }
    return jet;
}

/// Antiderivative vanishing at the origin. Power-kernel inputs are
/// truncated to the working degree first.
inline AnalyticFunction integrate_once(const AnalyticFunction& f,
                                       std::size_t degree = kDefaultSeriesDegree) {
    const AnalyticFunction g = f.is_taylor() ? f : f.truncated(degree);
    const auto& c = g.coefficients();
    if (c.size() >= kMaxSeriesDegree)
        throw config_error("integrate_once: series degree cap exceeded");
    std::vector<Complex> out(c.size() + 1, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < c.size(); ++k)
        out[k + 1] = c[k] / static_cast<double>(k + 1);
    return AnalyticFunction::taylor(std::move(out));
}

inline AnalyticFunction integrate_n(const AnalyticFunction& f, int n,
                                    std::size_t degree = kDefaultSeriesDegree) {
    AnalyticFunction g = f;
    for (int j = 0; j < n; ++j) g = integrate_once(g, degree);
    return g;
}

inline AnalyticFunction add(const AnalyticFunction& a, const AnalyticFunction& b,
                            std::size_t degree = kDefaultSeriesDegree) {
    const auto ca = (a.is_taylor() ? a : a.truncated(degree)).coefficients();
    const auto cb = (b.is_taylor() ? b : b.truncated(degree)).coefficients();
    std::vector<Complex> out(std::max(ca.size(), cb.size()), Complex{0.0, 0.0});
    for (std::size_t k = 0; k < ca.size(); ++k) out[k] += ca[k];
    for (std::size_t k = 0; k < cb.size(); ++k) out[k] += cb[k];
    return AnalyticFunction::taylor(std::move(out));
}

inline AnalyticFunction scale(const AnalyticFunction& a, Complex factor,
                              std::size_t degree = kDefaultSeriesDegree) {
    if (a.is_power_kernel()) {
        const auto& pk = a.kernel_form();
        return AnalyticFunction::power_kernel(pk.w, pk.zpow, pk.exponent, pk.scale * factor);
    }
    std::vector<Complex> c = a.truncated(std::min(degree, a.degree())).coefficients();
    for (Complex& x : c) x *= factor;
    return AnalyticFunction::taylor(std::move(c));
}

/// Truncated Cauchy product.
inline AnalyticFunction multiply(const AnalyticFunction& a, const AnalyticFunction& b,
                                 std::size_t degree = kDefaultSeriesDegree) {
    const auto ca = (a.is_taylor() ? a : a.truncated(degree)).coefficients();
    const auto cb = (b.is_taylor() ? b : b.truncated(degree)).coefficients();
    const std::size_t out_deg = std::min(degree, ca.size() + cb.size() - 2);
    std::vector<Complex> out(out_deg + 1, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < ca.size() && i <= out_deg; ++i) {
        if (std::abs(ca[i]) == 0.0) continue;
        for (std::size_t j = 0; j < cb.size() && i + j <= out_deg; ++j)
            out[i + j] += ca[i] * cb[j];
    }
    return AnalyticFunction::taylor(std::move(out));
}

/// An analytic self-map of the disk. Validity (sup |phi| < 1) is
/// certified on a caller-supplied node set, not proven globally.
class SelfMap {
public:
    static SelfMap checked(AnalyticFunction phi, std::span<const Complex> nodes) {
        double sup = 0.0;
        for (const Complex& z : nodes) sup = std::max(sup, std::abs(phi.evaluate(z)));
        if (sup >= 1.0)
            throw domain_error("self-map invariant violated: sup |phi| = " +
                               std::to_string(sup) + " >= 1 on the check grid");
        SelfMap m;
        m.phi_ = std::move(phi);
        m.checked_sup_ = sup;
        return m;
    }

    /// For maps whose sup is known analytically (identity, c z, ...).
    static SelfMap unchecked(AnalyticFunction phi) {
        SelfMap m;
        m.phi_ = std::move(phi);
        m.checked_sup_ = -1.0;
        return m;
    }

    Complex operator()(Complex z) const {
        const Complex v = phi_.evaluate(z);
        if (std::abs(v) >= 1.0)
            throw domain_error("self-map left the unit disk at a grid node");
        return v;
    }

    const AnalyticFunction& function() const { return phi_; }
    double checked_sup() const { return checked_sup_; }

private:
    AnalyticFunction phi_ = AnalyticFunction::zero();
    double checked_sup_ = -1.0;
};

/// f(phi(z_j)) at every node; pointwise, exact wherever evaluate is.
inline std::vector<Complex> compose(const AnalyticFunction& f, const SelfMap& phi,
                                    std::span<const Complex> nodes, int deriv_order = 0) {
    std::vector<Complex> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j)
        out[j] = f.evaluate(phi(nodes[j]), deriv_order);
    return out;
}

} // namespace bergman
