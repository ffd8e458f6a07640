#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/numeric.hpp"

namespace bergman {

/// rho(z,w) = |(z - w) / (1 - conj(z) w)|, the pseudo-hyperbolic metric.
inline double pseudo_hyperbolic(Complex z, Complex w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
        throw domain_error("pseudo_hyperbolic: arguments must lie inside the unit disk");
    return std::abs((z - w) / (Complex{1.0, 0.0} - std::conj(z) * w));
}

/// beta(z,w) = (1/2) log((1+rho)/(1-rho)) = atanh(rho).
inline double bergman_metric(Complex z, Complex w) {
    return std::atanh(pseudo_hyperbolic(z, w));
}

/// The Bergman-metric disk D(a,r) as a Euclidean disk. With s = tanh r:
/// center (1-s^2) a / (1 - s^2 |a|^2), radius s (1-|a|^2) / (1 - s^2 |a|^2).
struct EuclideanDisk {
    Complex center;
    double radius = 0.0;

    bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

inline EuclideanDisk bergman_disk(Complex a, double r) {
    if (std::abs(a) >= 1.0)
        throw domain_error("bergman_disk: center must lie inside the unit disk");
    if (!(r > 0.0)) throw contract_error("bergman_disk: radius must be positive");
    const double s = std::tanh(r);
    const double aa = std::norm(a);
    const double denom = 1.0 - s * s * aa;
    return {a * ((1.0 - s * s) / denom), s * (1.0 - aa) / denom};
}

/// Normalized area of D(a,r); the disk is a Euclidean disk, so this is
/// its radius squared under dA = dx dy / pi.
inline double bergman_disk_area(Complex a, double r) {
    const double R = bergman_disk(a, r).radius;
    return R * R;
}

/// Intersection of the circle |z| = rho with a Euclidean disk, as an
/// angular window. Returns the arc {psi - delta, psi + delta} around
/// psi = arg(center); delta = pi means the whole circle is inside,
/// no value means the circle misses the disk.
struct ArcWindow {
    double psi = 0.0;
    double half_width = 0.0; // in (0, pi]
};

inline std::optional<ArcWindow> circle_disk_arc(double rho, const EuclideanDisk& disk) {
    const double d = std::abs(disk.center);
    const double R = disk.radius;
    if (rho + d < R) return ArcWindow{0.0, std::numbers::pi}; // full circle inside
    if (rho > d + R || rho < d - R) return std::nullopt;      // no intersection
    if (d == 0.0 || rho == 0.0) return std::nullopt;          // grazing degenerate cases
    double c = (rho * rho + d * d - R * R) / (2.0 * rho * d);
    c = std::clamp(c, -1.0, 1.0);
    return ArcWindow{std::arg(disk.center), std::acos(c)};
}

/// An r-lattice in the Bergman metric: pairwise beta-separation >= r,
/// covering of the construction grid by D(a_j, r), finite overlap of
/// the D(a_j, 4r). The certificate fields record what was measured.
struct BergmanLattice {
    double r = 0.0;
    double r_max = 0.0;
    std::vector<Complex> points;
    int multiplicity_bound = 0;   // measured max overlap count of D(a_j, 4r)
    double min_separation = 0.0;  // measured min pairwise beta distance
    double max_covering = 0.0;    // measured max beta distance grid -> lattice
    std::size_t grid_size = 0;    // certification grid size

    std::size_t size() const { return points.size(); }
};

namespace detail {

struct GridRing {
    double rho = 0.0;    // Euclidean radius
    double beta = 0.0;   // hyperbolic radius
    int count = 1;
    double offset = 0.0; // stagger, in cells

    double angle(int k) const {
        return 2.0 * std::numbers::pi * (k + offset) / count;
    }
    Complex node(int k) const {
        const double th = angle(k);
        return {rho * std::cos(th), rho * std::sin(th)};
    }
};

/// Rings of constant hyperbolic width beta_step covering {|z| <= r_max};
/// ring j sits at hyperbolic radius j * beta_step (so 1 - rho halves
/// every ln 2 / beta_step rings) with angular spacing ~ beta_step.
inline std::vector<GridRing> hyperbolic_rings(double beta_step, double r_max,
                                              std::size_t max_points) {
    std::vector<GridRing> rings;
    rings.push_back(GridRing{0.0, 0.0, 1, 0.0});
    const double beta_max = std::atanh(r_max);
    const int n = static_cast<int>(std::floor(beta_max / beta_step));
    std::size_t total = 1;
    for (int j = 1; j <= n; ++j) {
        GridRing ring;
        ring.beta = j * beta_step;
        ring.rho = std::tanh(ring.beta);
        // hyperbolic circumference at radius beta is pi sinh(2 beta)
        const double circ = std::numbers::pi * std::sinh(2.0 * ring.beta);
        ring.count = std::max(4, static_cast<int>(std::ceil(circ / beta_step)));
        ring.offset = (j % 2 == 1) ? 0.5 : 0.0;
        total += static_cast<std::size_t>(ring.count);
        if (total > max_points)
            throw resolution_error(
                "hyperbolic grid: r_max too close to 1 for the configured budget of " +
                std::to_string(max_points) + " points; lower r_max or coarsen the grid");
        rings.push_back(ring);
    }
    return rings;
}

/// Accepted lattice points bucketed by construction ring, angle-sorted.
struct RingIndex {
    const std::vector<GridRing>* rings = nullptr;
    std::vector<std::vector<double>> angles; // accepted angles per ring
    std::vector<std::vector<Complex>> pts;

    explicit RingIndex(const std::vector<GridRing>& r)
        : rings(&r), angles(r.size()), pts(r.size()) {}

    void insert(std::size_t ring, double angle, Complex p) {
        angles[ring].push_back(angle); // construction order is angle-sorted
        pts[ring].push_back(p);
    }

    /// Visits every stored point inside the Euclidean disk; the visitor
    /// returns true to stop early. Returns true if stopped.
    template <typename Visitor>
    bool visit_in_disk(const EuclideanDisk& disk, double beta_center, double beta_radius,
                       Visitor&& visit) const {
        const auto& R = *rings;
        for (std::size_t j = 0; j < R.size(); ++j) {
            if (angles[j].empty()) continue;
            if (std::abs(R[j].beta - beta_center) > beta_radius) continue;
            const auto arc = circle_disk_arc(R[j].rho, disk);
            if (!arc) continue;
            const auto& as = angles[j];
            const auto& ps = pts[j];
            // the arc only accelerates; membership is re-checked exactly
            auto emit = [&](std::size_t k) {
                return disk.contains(ps[k]) && visit(ps[k]);
            };
            if (arc->half_width >= std::numbers::pi - 1e-15) {
                for (std::size_t k = 0; k < ps.size(); ++k)
                    if (emit(k)) return true;
                continue;
            }
            const double two_pi = 2.0 * std::numbers::pi;
            const double pad = 1e-9; // rounding slack at arc edges
            double lo = arc->psi - arc->half_width - pad;
            double hi = arc->psi + arc->half_width + pad;
            if (hi - lo >= two_pi) {
                for (std::size_t k = 0; k < ps.size(); ++k)
                    if (emit(k)) return true;
                continue;
            }
            lo -= two_pi * std::floor(lo / two_pi);
            hi -= two_pi * std::floor(hi / two_pi);
            auto scan = [&](double a, double b) {
                auto first = std::lower_bound(as.begin(), as.end(), a);
                for (auto it = first; it != as.end() && *it <= b; ++it)
                    if (emit(static_cast<std::size_t>(it - as.begin()))) return true;
                return false;
            };
            if (lo <= hi) {
                if (scan(lo, hi)) return true;
            } else {
                if (scan(0.0, hi)) return true;
                if (scan(lo, two_pi)) return true;
            }
        }
        return false;
    }
};

} // namespace detail

struct LatticeOptions {
    int grid_density = 4;                    // candidate rings per lattice radius r
    std::size_t max_grid_points = 4'000'000; // resolution budget
};

/// Greedy maximal packing over the graded candidate grid: a candidate
/// is accepted iff its beta distance to every accepted point is >= r.
/// All three lattice properties are then certified against the same
/// grid (whose density is grid_density times the lattice scale).
inline BergmanLattice build_lattice(double r, double r_max, const LatticeOptions& opt = {}) {
    if (!(r > 0.0 && r <= 2.0)) throw contract_error("build_lattice: need 0 < r <= 2");
    if (!(r_max > 0.0 && r_max < 1.0))
        throw contract_error("build_lattice: need 0 < r_max < 1");

    const double beta_step = r / opt.grid_density;
    const auto rings = detail::hyperbolic_rings(beta_step, r_max, opt.max_grid_points);

    BergmanLattice lat;
    lat.r = r;
    lat.r_max = r_max;

    detail::RingIndex index(rings);
    std::size_t grid_size = 0;
    for (std::size_t j = 0; j < rings.size(); ++j) {
        for (int k = 0; k < rings[j].count; ++k) {
            ++grid_size;
            const Complex c = rings[j].node(k);
            // beta(a,c) < r  <=>  a in the Euclidean image of D(c,r)
            const EuclideanDisk ball = bergman_disk(c, r);
            const bool blocked = index.visit_in_disk(
                ball, rings[j].beta, r + beta_step, [](Complex) { return true; });
            if (!blocked) {
                index.insert(j, rings[j].angle(k), c);
                lat.points.push_back(c);
            }
        }
    }
    lat.grid_size = grid_size;

    // separation certificate: exhaustive pairwise minimum via windows
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rings.size(); ++j) {
        for (std::size_t k = 0; k < index.pts[j].size(); ++k) {
            const Complex a = index.pts[j][k];
            // any other lattice point closer than 2r shows up in this window
            const EuclideanDisk ball = bergman_disk(a, 2.0 * r);
            index.visit_in_disk(ball, rings[j].beta, 2.0 * r + beta_step, [&](Complex b) {
                if (b != a) min_sep = std::min(min_sep, bergman_metric(a, b));
                return false;
            });
        }
    }
    lat.min_separation =
        lat.points.size() > 1 ? min_sep : std::numeric_limits<double>::infinity();

    // covering + multiplicity certificates over the full grid
    double max_cover = 0.0;
    int max_mult = 0;
    const double pad = beta_step;
    for (std::size_t j = 0; j < rings.size(); ++j) {
        for (int k = 0; k < rings[j].count; ++k) {
            const Complex g = rings[j].node(k);
            double nearest = std::numeric_limits<double>::infinity();
            const EuclideanDisk cover_ball = bergman_disk(g, r);
            index.visit_in_disk(cover_ball, rings[j].beta, r + pad, [&](Complex a) {
                nearest = std::min(nearest, bergman_metric(g, a));
                return false;
            });
            if (!(nearest < r))
                throw resolution_error("build_lattice: covering certificate failed; "
                                       "greedy grid too coarse");
            max_cover = std::max(max_cover, nearest);

            int mult = 0;
            const EuclideanDisk mult_ball = bergman_disk(g, 4.0 * r);
            index.visit_in_disk(mult_ball, rings[j].beta, 4.0 * r + pad, [&](Complex) {
                ++mult;
                return false;
            });
            max_mult = std::max(max_mult, mult);
        }
    }
    lat.max_covering = max_cover;
    lat.multiplicity_bound = max_mult;
    return lat;
}

/// Independent re-measurement of covering distance and overlap count
/// against a fresh grid of the given density. Covering of an
/// independent grid can exceed r by one grid quantum of the lattice's
/// own construction grid; the multiplicity bound must be stable.
struct LatticeCertificate {
    double max_covering = 0.0; // max over grid nodes of nearest lattice distance
    int multiplicity_bound = 0;
    std::size_t grid_size = 0;
};

inline LatticeCertificate certify_lattice(const BergmanLattice& lat, int grid_density,
                                          std::size_t max_grid_points = 4'000'000) {
    const double beta_step = lat.r / grid_density;
    const auto rings = detail::hyperbolic_rings(beta_step, lat.r_max, max_grid_points);
    std::vector<EuclideanDisk> near_disks, mult_disks;
    near_disks.reserve(lat.points.size());
    mult_disks.reserve(lat.points.size());
    for (const Complex& a : lat.points) {
        near_disks.push_back(bergman_disk(a, 2.0 * lat.r));
        mult_disks.push_back(bergman_disk(a, 4.0 * lat.r));
    }
    LatticeCertificate cert;
    for (const auto& ring : rings) {
        for (int k = 0; k < ring.count; ++k) {
            ++cert.grid_size;
            const Complex g = ring.node(k);
            double nearest = std::numeric_limits<double>::infinity();
            int mult = 0;
            for (std::size_t j = 0; j < lat.points.size(); ++j) {
                if (near_disks[j].contains(g))
                    nearest = std::min(nearest, bergman_metric(g, lat.points[j]));
                if (mult_disks[j].contains(g)) ++mult;
            }
            cert.max_covering = std::max(cert.max_covering, nearest);
            cert.multiplicity_bound = std::max(cert.multiplicity_bound, mult);
        }
    }
    return cert;
}

} // namespace bergman
