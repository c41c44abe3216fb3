#include "hypack/branched.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "hypack/errors.hpp"
#include "hypack/sampling.hpp"

namespace hypack {

namespace {

// Largest dilation over directions at x. As a function of cos^2 of the angle
// between v and x the squared ratio is a Moebius map, so it is extremal at
// the radial or tangential direction; a few extra directions are cheap.
double max_dilation_at(double k, KleinPoint x) {
    const double n = std::sqrt(norm2(x));
    if (n < 1e-300) return k;
    const KleinPoint radial{x.x / n, x.y / n};
    const KleinPoint tangent{-radial.y, radial.x};
    double best = std::max(dilation_ratio(k, x, radial), dilation_ratio(k, x, tangent));
    for (int j = 1; j < 8; ++j) {
        const double t = kPi * j / 8.0;
        best = std::max(best, dilation_ratio(k, x, std::cos(t) * radial + std::sin(t) * tangent));
    }
    return best;
}

struct FanPoint {
    int tri;
    double u;
    double w;
};

KleinPoint fan_point(const Polygon& tile, FanPoint f) {
    const KleinPoint a = tile.vertices[static_cast<std::size_t>(f.tri)];
    const KleinPoint b = tile.vertices[(static_cast<std::size_t>(f.tri) + 1) % tile.size()];
    return f.u * (a + f.w * (b - a));
}

}  // namespace

double dilation_ratio(double k, KleinPoint x, KleinPoint v) {
    return klein_vector_length(k * x, k * v) / klein_vector_length(x, v);
}

BranchedCover build_cover(int s, int a) {
    if (!is_hyperbolic_pair(s, a) || !is_hyperbolic_pair(s, 2 * a))
        throw DomainError("branched cover needs hyperbolic {" + std::to_string(s) + "," + std::to_string(a) + "}");
    BranchedCover cov;
    cov.s = s;
    cov.a = a;
    cov.fine = tiling_geometry(s, 2 * a);
    cov.coarse = tiling_geometry(s, a);
    cov.k = cov.coarse.euclid_circumradius / cov.fine.euclid_circumradius;
    cov.fine_tile = build_tile(s, 2 * a);
    cov.coarse_tile = build_tile(s, a);
    for (int i = 0; i < s; ++i) {
        cov.fine_half_turns.push_back(edge_half_turn(cov.fine, i));
        cov.coarse_half_turns.push_back(edge_half_turn(cov.coarse, i));
    }
    cov.c = contraction_factor(cov);
    return cov;
}

double contraction_factor(const BranchedCover& cov) {
    const int grid = 16;
    FanPoint best{0, 0.0, 0.0};
    double best_val = -1.0;
    for (int j = 0; j < cov.s; ++j)
        for (int iu = 0; iu <= grid; ++iu)
            for (int iw = 0; iw <= grid; ++iw) {
                const FanPoint f{j, double(iu) / grid, double(iw) / grid};
                const double v = max_dilation_at(cov.k, fan_point(cov.fine_tile, f));
                if (v > best_val) {
                    best_val = v;
                    best = f;
                }
            }
    double h = 1.0 / grid;
    double prev = best_val;
    double change = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        const FanPoint centre = best;
        for (int du = -2; du <= 2; ++du)
            for (int dw = -2; dw <= 2; ++dw) {
                const FanPoint f{centre.tri, std::clamp(centre.u + du * h, 0.0, 1.0),
                                 std::clamp(centre.w + dw * h, 0.0, 1.0)};
                const double v = max_dilation_at(cov.k, fan_point(cov.fine_tile, f));
                if (v > best_val) {
                    best_val = v;
                    best = f;
                }
            }
        change = best_val - prev;
        prev = best_val;
    }
    if (change > 1e-7) throw NumericError("contraction factor refinement did not converge");
    const double c = best_val + 1e-6;
    if (!(c < 1.0)) throw NumericError("contraction factor is not below 1");
    return c;
}

Isometry coarse_placement(const BranchedCover& cov, const std::vector<int>& word) {
    Isometry g;
    for (int e : word) g = g * cov.coarse_half_turns[static_cast<std::size_t>(e)];
    return g;
}

TileAddress locate_fine_tile(const BranchedCover& cov, KleinPoint p) {
    TileLocation loc = locate_tile(cov.fine, cov.fine_tile, cov.fine_half_turns, p);
    TileAddress t;
    t.coarse_placement = coarse_placement(cov, loc.word);
    t.word = std::move(loc.word);
    t.placement = loc.placement;
    return t;
}

KleinPoint apply_cover(const BranchedCover& cov, KleinPoint p) {
    const TileLocation loc = locate_tile(cov.fine, cov.fine_tile, cov.fine_half_turns, p);
    for (auto v : cov.fine_tile.vertices)
        if (klein_distance(v, loc.local) < 1e-8) throw DomainError("point lies on the branch locus");
    return coarse_placement(cov, loc.word).apply(cov.k * loc.local);
}

FiberIndex::FiberIndex(const BranchedCover& cov, double window)
    : cov_(&cov), window_(window), coarse_centers_(1e-7) {
    for (auto& t : enumerate_tiles(cov.s, 2 * cov.a, window + cov.fine.circumradius)) {
        if (point_polygon_distance(t.placement.inverse().apply({}), cov.fine_tile) > window) continue;
        TileAddress addr{t.word, t.placement, coarse_placement(cov, t.word)};
        const auto [idx, inserted] = coarse_centers_.insert(addr.coarse_placement.apply({}));
        if (inserted) by_coarse_.emplace_back();
        by_coarse_[static_cast<std::size_t>(idx)].push_back(tiles_.size());
        tiles_.push_back(std::move(addr));
    }
}

std::vector<KleinPoint> FiberIndex::fiber(KleinPoint q) const {
    const BranchedCover& cov = *cov_;
    const TileLocation loc = locate_tile(cov.coarse, cov.coarse_tile, cov.coarse_half_turns, q);
    std::vector<KleinPoint> out;
    const long idx = coarse_centers_.find(loc.placement.apply({}));
    if (idx < 0) return out;
    for (std::size_t t : by_coarse_[static_cast<std::size_t>(idx)]) {
        const TileAddress& addr = tiles_[t];
        const KleinPoint y = addr.coarse_placement.inverse().apply(q);
        const KleinPoint p = addr.placement.apply((1.0 / cov.k) * y);
        if (klein_distance({}, p) <= window_) out.push_back(p);
    }
    return out;
}

std::vector<KleinPoint> fiber(const BranchedCover& cov, KleinPoint q, double window) {
    return FiberIndex(cov, window).fiber(q);
}

bool near_coarse_vertex(const BranchedCover& cov, KleinPoint q, double r) {
    // The nearest tiling vertex is a vertex of the tile containing q (the
    // Voronoi cells of the vertices are unions of kites of the tiles).
    const TileLocation loc = locate_tile(cov.coarse, cov.coarse_tile, cov.coarse_half_turns, q);
    for (auto v : cov.coarse_tile.vertices)
        if (klein_distance(v, loc.local) <= r) return true;
    return false;
}

WindowPacking erase_near_vertices(const WindowPacking& p, const BranchedCover& cov) {
    WindowPacking out{p.radius, p.window, {}};
    for (auto c : p.centers)
        if (!near_coarse_vertex(cov, c, p.radius)) out.centers.push_back(c);
    return out;
}

WindowPacking lift_packing(const WindowPacking& p, const BranchedCover& cov) {
    WindowPacking out{p.radius, p.window, {}};
    if (p.centers.empty()) return out;
    const FiberIndex fib(cov, p.window);
    PointIndex seen(1e-8);
    for (auto c : p.centers)
        for (auto q : fib.fiber(c))
            if (seen.insert(q).second) out.centers.push_back(q);
    const double sep = min_separation(out.centers);
    const double need = 2.0 * p.radius / cov.c;
    if (sep < need - 1e-8)
        throw ValidationError("lifted centers are " + std::to_string(sep) + " apart, below 2r/c = " +
                              std::to_string(need) + "; was the packing erased?");
    return out;
}

WindowPacking expand_radius(const WindowPacking& p, double R) {
    if (!(R > 0.0)) throw DomainError("radius must be positive");
    const double sep = min_separation(p.centers);
    if (sep < 2.0 * R - 1e-9)
        throw ValidationError("centers are " + std::to_string(sep) + " apart, cannot hold radius " +
                              std::to_string(R));
    WindowPacking out = p;
    out.radius = R;
    return out;
}

HomothetyEstimate homothety_density_estimate(const PeriodicPacking& p, const BranchedCover& cov,
                                             const HomothetyOptions& opt) {
    if (opt.samples == 0) throw DomainError("sample count must be positive");
    HomothetyEstimate est;
    est.radius = p.radius;
    est.expanded_radius = p.radius / cov.c;
    const double r = est.radius, R = est.expanded_radius;
    const OrbitLocator orbit(p, r);
    // Preimages within R of a point of the fine base tile.
    const FiberIndex fib(cov, R + cov.fine.circumradius + 1e-6);
    auto res = run_streams(opt.samples, opt.seed, 2, [&](Rng& rng, std::vector<double>& out) {
        const KleinPoint x = sample_point(cov.fine_tile, rng);
        const KleinPoint y = sample_point(p.domain, rng);
        const Isometry h = Isometry::translation_to(y) * Isometry::rotation(rng.uniform(0.0, 2.0 * kPi));
        const KleinPoint bx = cov.k * x;
        // d(Bx, Bp) <= c d(x, p) <= cR = r, so candidates lie within r of Bx.
        for (auto z0 : orbit.points_near(h.inverse().apply(bx), r)) {
            const KleinPoint z = h.apply(z0);
            if (near_coarse_vertex(cov, z, r)) continue;
            for (auto q : fib.fiber(z)) {
                const double d = klein_distance(x, q);
                if (d <= r) out[0] = 1.0;
                if (d <= R) out[1] = 1.0;
            }
        }
    });
    est.density = res[0];
    est.expanded_density = res[1];
    return est;
}

double branch_exclusion_radius(const BranchedCover& cov, double delta, std::size_t samples, std::uint64_t seed) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    Rng rng(seed);
    double rho = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const KleinPoint p = sample_point(cov.fine_tile, rng);
        const KleinPoint q = sample_point(cov.fine_tile, rng);
        const double deficit = klein_distance(p, q) - klein_distance(cov.k * p, cov.k * q);
        if (deficit <= delta) continue;
        double m = std::numeric_limits<double>::infinity();
        for (auto v : cov.fine_tile.vertices) m = std::min({m, klein_distance(p, v), klein_distance(q, v)});
        rho = std::max(rho, m);
    }
    return rho;
}

}  // namespace hypack
