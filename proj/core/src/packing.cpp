#include "hypack/packing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "hypack/errors.hpp"
#include "hypack/montecarlo.hpp"
#include "hypack/sampling.hpp"
#include "hypack/tiling.hpp"

namespace hypack {

namespace {

KleinPoint interior_reference(const Polygon& poly) {
    if (poly.size() < 3) throw DomainError("fundamental domain needs at least three vertices");
    if (poly.has_ideal_vertex()) throw DomainError("packing domain must be compact");
    KleinPoint c{};
    for (auto v : poly.vertices) c = c + v;
    // Nudge off the centroid so the point is not fixed by a symmetry of the domain.
    c = (1.0 / static_cast<double>(poly.size())) * c;
    const KleinPoint toward = poly.vertices[0] - c;
    return c + 0.0137 * toward;
}

double polygon_diameter(const Polygon& poly) {
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, klein_distance(poly.vertices[i], poly.vertices[j]));
    return d;
}

}  // namespace

double disk_area(double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    const double h = std::sinh(0.5 * r);
    return 4.0 * kPi * h * h;
}

double min_separation(const std::vector<KleinPoint>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, klein_distance(pts[i], pts[j]));
    return best;
}

namespace {

std::vector<Isometry> side_pairing_elements(const PeriodicPacking& p, KleinPoint ref) {
    // Short non-backtracking words; the tile across each side is the image of
    // the domain under one of them.
    std::vector<Isometry> steps;
    for (const auto& g : p.generators) {
        steps.push_back(g);
        steps.push_back(g.inverse());
    }
    std::vector<Isometry> layer{Isometry{}}, words;
    std::vector<int> last{-1};
    for (int len = 1; len <= 4; ++len) {
        std::vector<Isometry> next;
        std::vector<int> next_last;
        for (std::size_t w = 0; w < layer.size(); ++w)
            for (std::size_t s = 0; s < steps.size(); ++s) {
                if (last[w] >= 0 && (static_cast<std::size_t>(last[w]) ^ 1u) == s) continue;
                next.push_back(layer[w] * steps[s]);
                next_last.push_back(static_cast<int>(s));
            }
        words.insert(words.end(), next.begin(), next.end());
        layer = std::move(next);
        last = std::move(next_last);
    }
    auto has_vertex = [](const Polygon& poly, KleinPoint v) {
        for (auto u : poly.vertices)
            if (norm2(u - v) < 1e-18) return true;
        return false;
    };
    std::vector<Isometry> out;
    const std::size_t n = p.domain.size();
    for (std::size_t i = 0; i < n; ++i) {
        const KleinPoint a = p.domain.vertices[i], b = p.domain.vertices[(i + 1) % n];
        bool found = false;
        for (const auto& w : words) {
            if (!(p.domain.edge_side(i, w.apply(ref)) < 0.0)) continue;
            const Polygon img = p.domain.transformed(w);
            if (has_vertex(img, a) && has_vertex(img, b)) {
                out.push_back(w);
                found = true;
                break;
            }
        }
        if (!found) throw DomainError("no group element pairs side " + std::to_string(i) + " of the domain");
    }
    return out;
}

}  // namespace

std::vector<Isometry> group_elements_within(const PeriodicPacking& p, KleinPoint ref, double radius) {
    // Tiles g(domain) meeting B(ref, radius) are connected across shared
    // sides, so a walk over side pairings with the exact tile-ball test needs
    // no slack. The test runs in the tile frame, where coordinates stay exact.
    const std::vector<Isometry> sides = side_pairing_elements(p, ref);
    PointIndex seen(1e-6);
    std::vector<Isometry> all{Isometry{}};
    seen.insert(ref);
    std::deque<std::size_t> queue{0};
    constexpr std::size_t kCap = 4'000'000;
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (const auto& s : sides) {
            Isometry h = all[cur] * s;
            const KleinPoint local = h.inverse().apply(ref);
            if (!in_open_disk(local) || point_polygon_distance(local, p.domain) > radius + 1e-9) continue;
            const KleinPoint img = h.apply(ref);
            if (!in_open_disk(img)) throw NumericError("group element carries the reference point off the disk");
            if (!seen.insert(img).second) continue;
            all.push_back(h);
            queue.push_back(all.size() - 1);
            if (all.size() > kCap) throw NumericError("group enumeration exceeded element cap");
        }
    }
    std::vector<Isometry> out;
    for (const auto& g : all)
        if (klein_distance(ref, g.apply(ref)) <= radius) out.push_back(g);
    return out;
}

OrbitLocator::OrbitLocator(const PeriodicPacking& p, double reach)
    : reach_(reach), domain_diam_(polygon_diameter(p.domain)), ref_(interior_reference(p.domain)) {
    elements_ = group_elements_within(p, ref_, reach_ + 2.0 * domain_diam_ + 1e-9);
    for (const auto& g : elements_) {
        const double d = klein_distance(ref_, g.apply(ref_));
        if (d > 1e-9 && d <= 2.0 * domain_diam_ + 1e-9) steps_.push_back(g);
    }
    PointIndex idx(1e-8);
    for (const auto& g : elements_)
        for (auto c : p.centers) {
            const KleinPoint q = g.apply(c);
            if (klein_distance(ref_, q) <= reach_ + domain_diam_ + 1e-9 && idx.insert(q).second)
                local_points_.push_back(q);
        }
}

Isometry OrbitLocator::reduce(KleinPoint q) const {
    Isometry gamma;
    double current = klein_distance(q, ref_);
    for (int iter = 0; iter < 100000; ++iter) {
        double best = current;
        bool moved = false;
        Isometry cand_best;
        for (const auto& s : steps_) {
            Isometry cand = gamma * s;
            const double d = klein_distance(q, cand.apply(ref_));
            if (d < best - 1e-12) {
                best = d;
                cand_best = cand;
                moved = true;
            }
        }
        if (!moved) return gamma;
        gamma = cand_best;
        current = best;
    }
    throw NumericError("orbit reduction did not terminate");
}

std::vector<KleinPoint> OrbitLocator::points_near(KleinPoint q, double radius) const {
    if (radius > reach_ + 1e-12) throw DomainError("query radius exceeds locator reach");
    const Isometry gamma = reduce(q);
    const KleinPoint local = gamma.inverse().apply(q);
    std::vector<KleinPoint> out;
    for (auto p : local_points_)
        if (klein_distance(local, p) <= radius) out.push_back(gamma.apply(p));
    return out;
}

int OrbitLocator::stabilizer_order(KleinPoint c) const {
    const double need = 2.0 * klein_distance(ref_, c) + 1e-6;
    int count = 0;
    for (const auto& g : elements_) {
        if (klein_distance(ref_, g.apply(ref_)) > need) continue;
        if (klein_distance(g.apply(c), c) < 1e-7) ++count;
    }
    return count;
}

WindowPacking window_packing(const PeriodicPacking& p, double W) {
    const OrbitLocator loc(p, W);
    return {p.radius, W, loc.points_near({}, W)};
}

DensityReport periodic_density(const PeriodicPacking& p) {
    if (p.centers.empty()) return {0.0, DensityMethod::exact, 0.0};
    const ValidationReport v = validate(p);
    if (!v.ok) throw ValidationError(v.message);
    double covered = 0.0;
    for (std::size_t i = 0; i < p.centers.size(); ++i) covered += disk_area(p.radius) / p.stabilizer(i);
    return {covered / polygon_area(p.domain), DensityMethod::exact, 0.0};
}

DensityReport mc_density(const PeriodicPacking& p, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw DomainError("sample count must be positive");
    if (p.centers.empty()) return {0.0, DensityMethod::monte_carlo, 0.0};
    const OrbitLocator loc(p, p.radius);
    const McEstimate e = run_streams_scalar(samples, seed, [&](Rng& rng) {
        const KleinPoint y = sample_point(p.domain, rng);
        return loc.points_near(y, p.radius).empty() ? 0.0 : 1.0;
    });
    return {e.mean, DensityMethod::monte_carlo, e.stderr_};
}

PeriodicPacking shrink(const PeriodicPacking& p, double s) {
    if (!(s > 0.0) || !(s < p.radius)) throw DomainError("shrink needs 0 < s < r");
    PeriodicPacking out = p;
    out.radius = s;
    return out;
}

double ft_bound(double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    // cos(alpha) = c/(1+c) with c = cosh 2r; atan2 keeps alpha accurate when
    // it is tiny (large r).
    const double c = std::cosh(2.0 * r);
    const double alpha = std::atan2(std::sqrt(1.0 + 2.0 * c), c);
    const double h = std::sinh(0.5 * r);
    return 3.0 * alpha * 2.0 * h * h / (kPi - 3.0 * alpha);
}

double tight_radius(int k) {
    if (k < 7) throw DomainError("tight radius needs k >= 7");
    const double c = std::cos(2.0 * kPi / k);
    return 0.5 * std::acosh(c / (1.0 - c));
}

PeriodicPacking build_tight_packing(int k) {
    const double r = tight_radius(k);
    const Polygon tile = build_tile(3, k);
    const KleinPoint v0 = tile.vertices[0], v1 = tile.vertices[1];
    PeriodicPacking p;
    p.radius = r;
    p.generators = {Isometry::rotation(2.0 * kPi / 3.0), Isometry::rotation_about(v0, 2.0 * kPi / k)};
    p.domain.vertices = {{0.0, 0.0}, v0, v1};
    p.centers = {v0};
    p.stabilizers = {k};
    return p;
}

PeriodicPacking build_tight_packing_index2(int k) {
    if (k % 2 != 0) throw DomainError("index-2 tight packing needs even k");
    const double r = tight_radius(k);
    const Polygon tile = build_tile(3, k);
    const KleinPoint v0 = tile.vertices[0], v1 = tile.vertices[1];
    const Isometry x = edge_half_turn(tiling_geometry(3, k), 0);
    const Isometry rho = Isometry::rotation(2.0 * kPi / 3.0);
    PeriodicPacking p;
    p.radius = r;
    p.generators = {rho, x * rho * x};
    p.domain.vertices = {{0.0, 0.0}, v0, x.apply({0.0, 0.0}), v1};
    p.centers = {v0};
    p.stabilizers = {k / 2};
    return p;
}

ValidationReport validate(const PeriodicPacking& p, int max_word, double tol) {
    ValidationReport rep;
    if (!(p.radius > 0.0)) return {false, 0.0, "radius must be positive"};
    for (std::size_t i = 0; i < p.centers.size(); ++i)
        if (!p.domain.contains(p.centers[i], 1e-9))
            return {false, 0.0, "center " + std::to_string(i) + " lies outside the domain"};
    std::vector<Isometry> steps;
    for (const auto& g : p.generators) {
        steps.push_back(g);
        steps.push_back(g.inverse());
    }
    // Words up to max_word, skipping immediate backtracks.
    std::vector<Isometry> layer{Isometry{}}, words{Isometry{}};
    std::vector<int> last{-1};
    for (int len = 1; len <= max_word; ++len) {
        std::vector<Isometry> next;
        std::vector<int> next_last;
        for (std::size_t w = 0; w < layer.size(); ++w)
            for (std::size_t s = 0; s < steps.size(); ++s) {
                if (last[w] >= 0 && (static_cast<std::size_t>(last[w]) ^ 1u) == s) continue;
                next.push_back(layer[w] * steps[s]);
                next_last.push_back(static_cast<int>(s));
            }
        words.insert(words.end(), next.begin(), next.end());
        layer = std::move(next);
        last = std::move(next_last);
    }
    // Every pair of orbit points is congruent to a pair (c_i, g c_j). Distances
    // are read off the hyperboloid, which stays accurate far from the origin.
    auto lift = [](KleinPoint c) {
        const double s = 1.0 / std::sqrt(1.0 - norm2(c));
        return std::array<double, 3>{c.x * s, c.y * s, s};
    };
    rep.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
        const auto X = lift(p.centers[i]);
        for (const auto& g : words)
            for (std::size_t j = 0; j < p.centers.size(); ++j) {
                const auto Z = lift(p.centers[j]);
                std::array<double, 3> Y{};
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) Y[static_cast<std::size_t>(r)] += g(r, c) * Z[static_cast<std::size_t>(c)];
                const double ch = Y[2] * X[2] - Y[0] * X[0] - Y[1] * X[1];
                const double d = std::acosh(std::max(1.0, ch));
                // g fixes the center; near d = 0 acosh resolves only ~sqrt(eps) cosh|c|.
                if (d < 1e-3 && i == j) continue;
                if (d < rep.min_separation) rep.min_separation = d;
                if (d < 2.0 * p.radius - tol && rep.ok) {
                    rep.ok = false;
                    rep.message = "images of centers " + std::to_string(i) + " and " + std::to_string(j) +
                                  " are " + std::to_string(d) + " apart (< 2r = " + std::to_string(2.0 * p.radius) +
                                  ")";
                }
            }
    }
    return rep;
}

}  // namespace hypack
