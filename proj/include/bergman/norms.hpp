#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/errors.hpp"
#include "bergman/numeric.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// (integral of |f|^p over the rule region)^(1/p).
inline double ap_norm(const AnalyticFunction& f, double p, const QuadratureRule& rule) {
    if (!(p > 0.0)) throw contract_error("ap_norm: need p > 0");
    const double integral =
        integrate_fn(rule, [&](Complex z) { return std::pow(std::abs(f.evaluate(z)), p); });
    return std::pow(integral, 1.0 / p);
}

/// Full-disk A^p norm via the r_cut extrapolation pair.
inline double ap_norm_extrapolated(const AnalyticFunction& f, double p, int radial_n,
                                   int angular_n, double c1 = 0.999, double c2 = 0.9999) {
    const QuadratureRule lo = disk_rule(radial_n, angular_n, c1);
    const QuadratureRule hi = disk_rule(radial_n, angular_n, c2);
    const double v1 =
        integrate_fn(lo, [&](Complex z) { return std::pow(std::abs(f.evaluate(z)), p); });
    const double v2 =
        integrate_fn(hi, [&](Complex z) { return std::pow(std::abs(f.evaluate(z)), p); });
    return std::pow(rcut_extrapolate(v1, c1, v2, c2), 1.0 / p);
}

/// Exact A^2 norm from Taylor coefficients: (sum |c_k|^2 / (k+1))^(1/2).
/// Power kernels are summed adaptively; their coefficient tails are
/// geometric in |w|^2, so |w| must stay away from 1.
inline double a2_norm_coefficient(const AnalyticFunction& f) {
    if (f.is_taylor()) {
        const auto& c = f.coefficients();
        CompensatedSum s;
        for (std::size_t k = 0; k < c.size(); ++k)
            s.add(std::norm(c[k]) / static_cast<double>(k + 1));
        return std::sqrt(s.value());
    }
    const auto& pk = f.kernel_form();
    const double aw = std::abs(pk.w);
    if (aw > 0.99995)
        throw contract_error("a2_norm_coefficient: kernel parameter too close to the "
                             "boundary for series summation; use quadrature");
    const double s2 = std::norm(pk.scale);
    double binom = 1.0; // rising(s,m)/m!
    CompensatedSum acc;
    double wpow = 1.0;
    for (std::size_t m = 0;; ++m) {
        const double term =
            s2 * binom * binom * wpow / static_cast<double>(m + pk.zpow + 1);
        acc.add(term);
        const double ratio = (pk.exponent + static_cast<double>(m)) /
                             static_cast<double>(m + 1) * aw;
        if (ratio < 1.0 && term < 1e-17 * std::max(acc.value(), 1e-300)) break;
        if (m > 4'000'000)
            throw config_error("a2_norm_coefficient: series failed to converge");
        binom *= (pk.exponent + static_cast<double>(m)) / static_cast<double>(m + 1);
        wpow *= aw * aw;
    }
    return std::sqrt(acc.value());
}

/// A^2 inner product from coefficients: sum f_k conj(g_k) / (k+1),
/// both factors truncated at the given degree.
inline Complex a2_inner_coefficient(const AnalyticFunction& f, const AnalyticFunction& g,
                                    std::size_t degree = 2048) {
    std::vector<Complex> terms(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k)
        terms[k] = f.taylor_coefficient(k) * std::conj(g.taylor_coefficient(k)) /
                   static_cast<double>(k + 1);
    return pairwise_sum<Complex>(terms);
}

/// sum_{i<n} |f^(i)(0)| + || (1-|z|^2)^n f^(n) ||_{L^p}, the equivalent
/// norm built from the n-th derivative.
inline double littlewood_paley_norm(const AnalyticFunction& f, double p, int n,
                                    const QuadratureRule& rule) {
    if (n < 1) throw contract_error("littlewood_paley_norm: need n >= 1");
    if (!(p > 0.0)) throw contract_error("littlewood_paley_norm: need p > 0");
    double head = 0.0;
    for (int i = 0; i < n; ++i) head += std::abs(f.evaluate(Complex{0.0, 0.0}, i));
    const double integral = integrate_fn(rule, [&](Complex z) {
        const double wgt = std::pow(1.0 - std::norm(z), n);
        return std::pow(wgt * std::abs(f.evaluate(z, n)), p);
    });
    return head + std::pow(integral, 1.0 / p);
}

/// Boundary-graded sampling set: rings 1 - 2^{-m} for dyadic exponents
/// m <= max_octave refined rings_per_octave times, with angular counts
/// growing like 2^m (angles start at 0, so real-axis singularities are
/// sampled exactly on-peak).
struct BoundaryGrid {
    int max_octave = 14;
    int rings_per_octave = 4;
    int angular_base = 4;

    int ring_count() const { return max_octave * rings_per_octave + 1; }
    double ring_exponent(int idx) const {
        return static_cast<double>(idx) / rings_per_octave;
    }
    double ring_radius(int idx) const {
        return 1.0 - std::pow(2.0, -ring_exponent(idx));
    }
    int ring_angles(int idx) const {
        return std::max(1, static_cast<int>(std::ceil(
                               angular_base * std::pow(2.0, ring_exponent(idx)))));
    }
};

enum class BoundaryClass { little, big_only, unbounded };

inline std::string to_string(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::little: return "LITTLE";
        case BoundaryClass::big_only: return "BIG_ONLY";
        default: return "UNBOUNDED";
    }
}

/// Thresholds for reading a boundary profile; echoed into reports so
/// the cutoffs are auditable. A profile is declared decaying either by
/// the absolute rule (last two octaves below little_frac of the sup) or
/// by the tail slope of log2(profile) per octave; slow power decays are
/// only reachable through the slope.
struct ProfileThresholds {
    double little_frac = 0.05; // absolute rule on the last two octaves
    double slope_tol = 0.1;    // |log2 slope| below this is a plateau
    int slope_window = 5;      // octaves entering the tail fit
};

struct BlochReport {
    double norm = 0.0;                  // sampled sup of |f^(m)| (1-|z|^2)^alpha
    std::vector<double> profile;        // per-octave maxima, m = 0..max_octave
    BoundaryClass verdict = BoundaryClass::little;
    int deriv_order = 0;
    double alpha = 0.0;
    ProfileThresholds thresholds;
};

/// Least-squares slope of log2(profile[m]) per octave over the tail.
inline double profile_tail_slope(const std::vector<double>& profile, int window) {
    const std::size_t last = profile.size() - 1;
    const std::size_t first =
        last > static_cast<std::size_t>(window) ? last - static_cast<std::size_t>(window) : 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t m = first; m <= last; ++m) {
        if (!(profile[m] > 0.0)) continue;
        const double x = static_cast<double>(m);
        const double y = std::log2(profile[m]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double denom = n * sxx - sx * sx;
    return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

inline BoundaryClass classify_boundary_profile(const std::vector<double>& profile,
                                               double sup, const ProfileThresholds& th) {
    if (sup <= 0.0 || profile.size() < 2) return BoundaryClass::little;
    const std::size_t last = profile.size() - 1;
    const double tail = std::max(profile[last], profile[last - 1]);
    if (tail < th.little_frac * sup) return BoundaryClass::little;
    const double slope = profile_tail_slope(profile, th.slope_window);
    if (slope <= -th.slope_tol) return BoundaryClass::little;
    if (slope >= th.slope_tol && profile[last] >= 0.99 * sup)
        return BoundaryClass::unbounded;
    return BoundaryClass::big_only;
}

/// Sampled Bloch-type norm ||f||_{m,alpha} with its boundary profile.
inline BlochReport bloch_norm(const AnalyticFunction& f, int deriv_order, double alpha,
                              const BoundaryGrid& grid = {},
                              const ProfileThresholds& th = {}) {
    if (deriv_order < 0) throw contract_error("bloch_norm: negative derivative order");
    if (!(alpha > 0.0)) throw contract_error("bloch_norm: need alpha > 0");
    BlochReport rep;
    rep.deriv_order = deriv_order;
    rep.alpha = alpha;
    rep.thresholds = th;
    rep.profile.assign(static_cast<std::size_t>(grid.max_octave) + 1, 0.0);
    double sup = 0.0;
    for (int idx = 0; idx < grid.ring_count(); ++idx) {
        const double rho = grid.ring_radius(idx);
        const double wgt = std::pow(1.0 - rho * rho, alpha);
        const int na = grid.ring_angles(idx);
        double ring_max = 0.0;
        for (int k = 0; k < na; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / na;
            const Complex z{rho * std::cos(theta), rho * std::sin(theta)};
            ring_max = std::max(ring_max, std::abs(f.evaluate(z, deriv_order)) * wgt);
        }
        const auto octave = static_cast<std::size_t>(
            std::min<double>(grid.max_octave, std::floor(grid.ring_exponent(idx))));
        rep.profile[octave] = std::max(rep.profile[octave], ring_max);
        sup = std::max(sup, ring_max);
    }
    rep.norm = sup;
    rep.verdict = classify_boundary_profile(rep.profile, sup, th);
    return rep;
}

} // namespace bergman
