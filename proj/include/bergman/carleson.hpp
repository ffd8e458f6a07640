#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/kernels.hpp"
#include "bergman/norms.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

struct MeasureAtom {
    Complex z;
    double weight = 0.0;
};

/// A positive measure as weighted atoms. Atoms are indexed by radius
/// group (exact-equal |z|, angle-sorted, prefix-summed), so the mass of
/// a Bergman disk is a few binary searches per radial ring rather than
/// a full sweep. Atom lists from arbitrary sources degenerate to
/// radius-windowed scans and stay correct.
class DiscreteMeasure {
public:
    static DiscreteMeasure from_atoms(std::vector<MeasureAtom> atoms) {
        for (const auto& a : atoms) {
            if (a.weight < 0.0) throw contract_error("measure weights must be >= 0");
            if (std::abs(a.z) >= 1.0)
                throw domain_error("measure atoms must lie inside the unit disk");
        }
        DiscreteMeasure mu;
        mu.atoms_ = std::move(atoms);
        mu.build_index();
        return mu;
    }

    /// density(z) dA sampled onto the rule's nodes.
    template <typename Density>
    static DiscreteMeasure from_density(const QuadratureRule& rule, Density&& density) {
        std::vector<MeasureAtom> atoms;
        atoms.reserve(rule.size());
        for (std::size_t j = 0; j < rule.size(); ++j)
            atoms.push_back({rule.nodes[j], density(rule.nodes[j]) * rule.weights[j]});
        return from_atoms(std::move(atoms));
    }

    const std::vector<MeasureAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const { return total_; }

    /// mu restricted-reweighted by a pointwise factor >= 0.
    template <typename Factor>
    DiscreteMeasure reweighted(Factor&& factor) const {
        std::vector<MeasureAtom> out = atoms_;
        for (auto& a : out) a.weight *= factor(a.z);
        return from_atoms(std::move(out));
    }

    DiscreteMeasure scaled(double lambda) const {
        if (lambda < 0.0) throw contract_error("measure scale must be >= 0");
        return reweighted([lambda](Complex) { return lambda; });
    }

    /// mu(D(a,r)) for the Bergman-metric disk.
    double measure_of_disk(Complex a, double r) const {
        return measure_of(bergman_disk(a, r));
    }

    double measure_of(const EuclideanDisk& disk) const {
        const double d = std::abs(disk.center);
        const double lo = d - disk.radius;
        const double hi = d + disk.radius;
        auto first = std::lower_bound(groups_.begin(), groups_.end(), lo,
                                      [](const Group& g, double v) { return g.rho < v; });
        double mass = 0.0;
        for (auto it = first; it != groups_.end() && it->rho <= hi; ++it)
            mass += group_mass(*it, disk);
        return mass;
    }

private:
    struct Group {
        double rho = 0.0;
        std::size_t begin = 0; // [begin, end) in atoms_/angles_/prefix_
        std::size_t end = 0;
    };

    void build_index() {
        std::sort(atoms_.begin(), atoms_.end(), [](const MeasureAtom& a, const MeasureAtom& b) {
            const double ra = std::abs(a.z), rb = std::abs(b.z);
            if (ra != rb) return ra < rb;
            return std::arg(a.z) < std::arg(b.z);
        });
        angles_.resize(atoms_.size());
        prefix_.assign(atoms_.size() + 1, 0.0);
        total_ = 0.0;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            angles_[i] = std::arg(atoms_[i].z); // in (-pi, pi]
            prefix_[i + 1] = prefix_[i] + atoms_[i].weight;
            total_ += atoms_[i].weight;
        }
        groups_.clear();
        std::size_t i = 0;
        while (i < atoms_.size()) {
            const double rho = std::abs(atoms_[i].z);
            std::size_t j = i + 1;
            while (j < atoms_.size() && std::abs(atoms_[j].z) == rho) ++j;
            groups_.push_back({rho, i, j});
            i = j;
        }
    }

    double range_mass(std::size_t b, std::size_t e) const { return prefix_[e] - prefix_[b]; }

    double group_mass(const Group& g, const EuclideanDisk& disk) const {
        if (g.end - g.begin == 1)
            return disk.contains(atoms_[g.begin].z) ? atoms_[g.begin].weight : 0.0;
        const auto arc = circle_disk_arc(g.rho, disk);
        if (!arc) return 0.0;
        if (arc->half_width >= std::numbers::pi - 1e-15) return range_mass(g.begin, g.end);
        // angles_ within a group are sorted in (-pi, pi]
        double lo = arc->psi - arc->half_width;
        double hi = arc->psi + arc->half_width;
        const double two_pi = 2.0 * std::numbers::pi;
        auto mass_between = [&](double a, double b) {
            const auto* base = angles_.data();
            const auto* s = base + g.begin;
            const auto* e = base + g.end;
            const std::size_t bi = static_cast<std::size_t>(std::lower_bound(s, e, a) - base);
            const std::size_t ei = static_cast<std::size_t>(std::upper_bound(s, e, b) - base);
            return bi < ei ? range_mass(bi, ei) : 0.0;
        };
        // unwrap into (-pi, pi] pieces
        if (lo < -std::numbers::pi && hi > std::numbers::pi) return range_mass(g.begin, g.end);
        if (lo < -std::numbers::pi)
            return mass_between(-std::numbers::pi, hi) + mass_between(lo + two_pi, std::numbers::pi);
        if (hi > std::numbers::pi)
            return mass_between(lo, std::numbers::pi) + mass_between(-std::numbers::pi, hi - two_pi);
        return mass_between(lo, hi);
    }

    std::vector<MeasureAtom> atoms_;
    std::vector<double> angles_;
    std::vector<double> prefix_;
    std::vector<Group> groups_;
    double total_ = 0.0;
};

/// (1-|z|^2)^t dA on the given sampling rule.
inline DiscreteMeasure radial_power_measure(double t, const QuadratureRule& rule) {
    return DiscreteMeasure::from_density(
        rule, [t](Complex z) { return std::pow(1.0 - std::norm(z), t); });
}

enum class CarlesonVerdict { bounded, vanishing, diverging };

inline std::string to_string(CarlesonVerdict v) {
    switch (v) {
        case CarlesonVerdict::bounded: return "BOUNDED";
        case CarlesonVerdict::vanishing: return "VANISHING";
        default: return "DIVERGING";
    }
}

inline CarlesonVerdict verdict_from_boundary(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::little: return CarlesonVerdict::vanishing;
        case BoundaryClass::big_only: return CarlesonVerdict::bounded;
        default: return CarlesonVerdict::diverging;
    }
}

struct CarlesonReport {
    double statistic = 0.0;              // sup of mu(D(a,r))^{1/q} / (1-|a|^2)^{k+2/p}
    std::vector<double> band_sup;        // per dyadic band of 1-|a|
    std::vector<double> band_mass_ratio; // q-th power quotient, per band
    CarlesonVerdict verdict = CarlesonVerdict::bounded;
    int k = 0;
    double p = 0.0, q = 0.0, r = 0.0;
    ProfileThresholds thresholds;
    double growth_factor = 0.0; // mass-ratio growth from band |a|~0.9 to |a|~0.999
    std::string regime;         // "geometric" or "integral"
    double value_lo = 0.0, value_hi = 0.0; // integral regime: the r_cut pair
};

inline std::size_t dyadic_band(Complex a) {
    const double gap = 1.0 - std::abs(a);
    return static_cast<std::size_t>(std::max(0.0, std::floor(-std::log2(gap))));
}

/// Geometric tester for the p <= q regime: the lattice sup of
/// mu(D(a,r))^{1/q} / (1-|a|^2)^{k+2/p} with its boundary profile.
inline CarlesonReport carleson_statistic(const DiscreteMeasure& mu, int k, double p, double q,
                                         const BergmanLattice& lattice,
                                         const ProfileThresholds& th = {}) {
    if (k < 0) throw contract_error("carleson_statistic: need k >= 0");
    if (!(p > 0.0 && q > 0.0)) throw contract_error("carleson_statistic: need p, q > 0");
    if (p > q)
        throw regime_error("carleson_statistic handles p <= q; "
                           "use carleson_integral_statistic for q < p");
    CarlesonReport rep;
    rep.k = k;
    rep.p = p;
    rep.q = q;
    rep.r = lattice.r;
    rep.thresholds = th;
    rep.regime = "geometric";
    std::size_t max_band = 0;
    for (const Complex& a : lattice.points) max_band = std::max(max_band, dyadic_band(a));
    rep.band_sup.assign(max_band + 1, 0.0);
    rep.band_mass_ratio.assign(max_band + 1, 0.0);
    double sup = 0.0;
    for (const Complex& a : lattice.points) {
        const double mass = mu.measure_of_disk(a, lattice.r);
        const double denom = std::pow(1.0 - std::norm(a), k + 2.0 / p);
        const double stat = std::pow(mass, 1.0 / q) / denom;
        const std::size_t band = dyadic_band(a);
        rep.band_sup[band] = std::max(rep.band_sup[band], stat);
        rep.band_mass_ratio[band] =
            std::max(rep.band_mass_ratio[band], mass / std::pow(denom, q));
        sup = std::max(sup, stat);
    }
    rep.statistic = sup;
    rep.verdict = verdict_from_boundary(classify_boundary_profile(rep.band_sup, sup, th));
    const std::size_t b_in = std::min<std::size_t>(3, max_band);   // |a| ~ 0.9
    const std::size_t b_out = std::min<std::size_t>(9, max_band);  // |a| ~ 0.999
    rep.growth_factor = rep.band_mass_ratio[b_in] > 0.0
                            ? rep.band_mass_ratio[b_out] / rep.band_mass_ratio[b_in]
                            : 0.0;
    return rep;
}

/// Integral tester for the q < p regime: the L^{p/(p-q)} norm of
/// z -> mu(D(z,r)) / (1-|z|^2)^{2+kq}, with an r_cut stability check.
/// In this regime BOUNDED and VANISHING coincide.
inline CarlesonReport carleson_integral_statistic(const DiscreteMeasure& mu, int k, double p,
                                                  double q, double r,
                                                  const QuadratureRule& rule_lo,
                                                  const QuadratureRule& rule_hi,
                                                  double stability_tol = 0.05) {
    if (k < 0) throw contract_error("carleson_integral_statistic: need k >= 0");
    if (!(p > 0.0 && q > 0.0))
        throw contract_error("carleson_integral_statistic: need p, q > 0");
    if (q >= p)
        throw regime_error("carleson_integral_statistic handles q < p; "
                           "use carleson_statistic for p <= q");
    const double e = p / (p - q);
    auto lnorm = [&](const QuadratureRule& rule) {
        const double integral = integrate_fn(rule, [&](Complex z) {
            const double mass = mu.measure_of_disk(z, r);
            return std::pow(mass / std::pow(1.0 - std::norm(z), 2.0 + k * q), e);
        });
        return std::pow(integral, 1.0 / e);
    };
    CarlesonReport rep;
    rep.k = k;
    rep.p = p;
    rep.q = q;
    rep.r = r;
    rep.regime = "integral";
    rep.value_lo = lnorm(rule_lo);
    rep.value_hi = lnorm(rule_hi);
    rep.statistic = rep.value_hi;
    const double drift = std::abs(rep.value_hi - rep.value_lo);
    rep.verdict = (drift <= stability_tol * std::max(rep.value_hi, 1e-300))
                      ? CarlesonVerdict::bounded
                      : CarlesonVerdict::diverging;
    return rep;
}

/// Test family for the combined Sobolev statistic: normalized kernels
/// anchored at (thinned) lattice points plus seeded random unit-norm
/// polynomials.
struct SobolevFamilyOptions {
    unsigned seed = 20240901;
    int poly_count = 16;
    int poly_degree = 12;
    int per_band_cap = 16; // lattice anchors kept per dyadic band
    double stability_tol = 0.05;
};

struct SobolevReport {
    double combined = 0.0;                 // sup over the test family
    std::vector<double> band_sup;          // kernel-anchor profile over |w| bands
    CarlesonVerdict combined_verdict = CarlesonVerdict::bounded;
    std::vector<CarlesonReport> components;
    CarlesonVerdict component_aggregate = CarlesonVerdict::bounded;
    bool agree = false;
    double ratio = 0.0; // combined / max component statistic
    double p = 0.0, q = 0.0, gamma = 0.0;
    ProfileThresholds thresholds;
    SobolevFamilyOptions family;
};

namespace detail {

inline CarlesonVerdict aggregate_components(const std::vector<CarlesonReport>& comps,
                                            bool collapse_vanishing) {
    bool any_div = false, all_van = true;
    for (const auto& c : comps) {
        if (c.verdict == CarlesonVerdict::diverging) any_div = true;
        if (c.verdict != CarlesonVerdict::vanishing) all_van = false;
    }
    if (any_div) return CarlesonVerdict::diverging;
    if (all_van && !collapse_vanishing) return CarlesonVerdict::vanishing;
    return CarlesonVerdict::bounded;
}

} // namespace detail

/// Rigidity comparison: the combined statistic
/// sup_f (int |sum_j u_j f^(j)|^q dmu)^{1/q} over the test family vs
/// the per-component (j,p,q)-Carleson statistics of |u_j|^q dmu.
/// The two sides must produce the same verdict.
inline SobolevReport sobolev_rigidity_check(
    const DiscreteMeasure& mu, std::span<const AnalyticFunction> u, double p, double q,
    const BergmanLattice& lattice, const QuadratureRule& integral_rule_lo,
    const QuadratureRule& integral_rule_hi, const SobolevFamilyOptions& fam = {},
    const ProfileThresholds& th = {}) {
    if (u.empty()) throw contract_error("sobolev_rigidity_check: empty symbol vector");
    if (!(p > 0.0 && q > 0.0)) throw contract_error("sobolev_rigidity_check: need p, q > 0");
    const int n = static_cast<int>(u.size()) - 1;
    const double gamma = default_gamma(p);

    SobolevReport rep;
    rep.p = p;
    rep.q = q;
    rep.gamma = gamma;
    rep.thresholds = th;
    rep.family = fam;

    // evaluate the symbols once per atom
    const auto& atoms = mu.atoms();
    std::vector<std::vector<Complex>> uvals(u.size(), std::vector<Complex>(atoms.size()));
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t i = 0; i < atoms.size(); ++i)
            uvals[j][i] = u[j].evaluate(atoms[i].z);

    auto combined_integral = [&](const AnalyticFunction& f) {
        std::vector<double> terms(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const auto jet = evaluate_jet(f, atoms[i].z, n);
            Complex s{0.0, 0.0};
            for (std::size_t j = 0; j < u.size(); ++j) s += uvals[j][i] * jet[j];
            terms[i] = std::pow(std::abs(s), q) * atoms[i].weight;
        }
        return std::pow(pairwise_sum<double>(terms), 1.0 / q);
    };

    // kernel anchors: thin the lattice to at most per_band_cap per band
    std::size_t max_band = 0;
    for (const Complex& a : lattice.points) max_band = std::max(max_band, dyadic_band(a));
    std::vector<int> band_taken(max_band + 1, 0);
    rep.band_sup.assign(max_band + 1, 0.0);
    double sup = 0.0;
    for (const Complex& w : lattice.points) {
        const std::size_t band = dyadic_band(w);
        if (band_taken[band] >= fam.per_band_cap) continue;
        ++band_taken[band];
        double val = 0.0;
        for (int i = 0; i <= n; ++i)
            val = std::max(val, combined_integral(normalized_kernel(w, i, gamma, p)));
        rep.band_sup[band] = std::max(rep.band_sup[band], val);
        sup = std::max(sup, val);
    }

    // seeded unit-norm polynomials round out the family
    std::mt19937_64 rng(fam.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const QuadratureRule norm_rule = disk_rule(96, 2 * fam.poly_degree + 2, 0.9999);
    for (int t = 0; t < fam.poly_count; ++t) {
        std::vector<Complex> c(static_cast<std::size_t>(fam.poly_degree) + 1);
        for (Complex& x : c) x = Complex{g(rng), g(rng)};
        AnalyticFunction f = AnalyticFunction::taylor(std::move(c));
        const double nf = ap_norm(f, p, norm_rule);
        if (nf <= 0.0) continue;
        f = scale(f, Complex{1.0 / nf, 0.0});
        sup = std::max(sup, combined_integral(f));
    }
    rep.combined = sup;
    rep.combined_verdict =
        verdict_from_boundary(classify_boundary_profile(rep.band_sup, sup, th));

    // per-component statistics, routed by regime
    double comp_max = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const DiscreteMeasure muj =
            mu.reweighted([&](Complex z) { return std::pow(std::abs(u[j].evaluate(z)), q); });
        CarlesonReport cr =
            p <= q ? carleson_statistic(muj, static_cast<int>(j), p, q, lattice, th)
                   : carleson_integral_statistic(muj, static_cast<int>(j), p, q, lattice.r,
                                                 integral_rule_lo, integral_rule_hi,
                                                 fam.stability_tol);
        comp_max = std::max(comp_max, cr.statistic);
        rep.components.push_back(std::move(cr));
    }
    const bool collapse = q < p; // BOUNDED and VANISHING coincide in that regime
    rep.component_aggregate = detail::aggregate_components(rep.components, collapse);
    CarlesonVerdict combined = rep.combined_verdict;
    if (collapse && combined == CarlesonVerdict::vanishing) combined = CarlesonVerdict::bounded;
    rep.combined_verdict = combined;
    rep.agree = combined == rep.component_aggregate;
    rep.ratio = comp_max > 0.0 ? rep.combined / comp_max : 0.0;
    return rep;
}

} // namespace bergman
