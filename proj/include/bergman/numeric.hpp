#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "bergman/errors.hpp"

#ifdef __FAST_MATH__
#error "fast-math would break the compensated summation in this header"
#endif

namespace bergman {

using Complex = std::complex<double>;

/// Neumaier-compensated accumulator. Keeps the running error of every
/// add in a carry term, so alternating sums whose terms dwarf the
/// result still come out with full relative accuracy.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

namespace detail {

template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
    if (n <= 8) {
        T acc{};
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

} // namespace detail

/// Deterministic pairwise reduction in fixed order.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    return detail::pairwise_sum_impl(values.data(), values.size());
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values));
}

/// x (x+1) ... (x+k-1); empty product for k = 0.
inline double rising_factorial(double x, int k) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x + j;
    return p;
}

/// x (x-1) ... (x-k+1); empty product for k = 0.
inline double falling_factorial(double x, int k) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x - j;
    return p;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double p = 1.0;
    for (int j = 1; j <= k; ++j) p = p * (n - k + j) / j;
    return p;
}

inline double factorial(int n) { return rising_factorial(1.0, n); }

/// z^k for k >= 0 by repeated multiplication; unlike std::pow this is
/// exact at z = 0, k = 0 and cheap for the small exponents used here.
inline Complex cpow_int(Complex z, int k) {
    Complex r{1.0, 0.0};
    for (int j = 0; j < k; ++j) r *= z;
    return r;
}

/// Extrapolates a boundary-cut integral to the full disk.
///
/// For integrands with pure power growth the cut value obeys
/// V(c) = V_inf * exp(m log c), so a log-linear fit through two cuts
/// recovers V_inf exactly; for smooth mixtures the residual is
/// O((1-c)^2). Both cuts must be in (0,1) and the values positive.
inline double rcut_extrapolate(double v1, double c1, double v2, double c2) {
    if (!(c1 > 0.0 && c1 < 1.0 && c2 > 0.0 && c2 < 1.0) || c1 == c2)
        throw contract_error("rcut_extrapolate: cuts must be distinct and inside (0,1)");
    if (v1 <= 0.0 || v2 <= 0.0) return v2; // nothing to fit; zero-mass integrand
    const double x1 = std::log(c1);
    const double x2 = std::log(c2);
    const double slope = (std::log(v2) - std::log(v1)) / (x2 - x1);
    return std::exp(std::log(v2) - slope * x2);
}

} // namespace bergman
