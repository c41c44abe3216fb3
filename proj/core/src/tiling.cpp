#include "hypack/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "hypack/errors.hpp"

namespace hypack {

bool is_hyperbolic_pair(int s, int a) { return s >= 3 && a >= 3 && (s - 2) * (a - 2) > 4; }

TilingGeometry tiling_geometry(int s, int a) {
    if (!is_hyperbolic_pair(s, a))
        throw DomainError("{" + std::to_string(s) + "," + std::to_string(a) + "} is not a hyperbolic tiling");
    TilingGeometry g;
    g.s = s;
    g.a = a;
    const double ps = kPi / s, pa = kPi / a;
    g.circumradius = std::acosh(1.0 / (std::tan(ps) * std::tan(pa)));
    g.inradius = std::acosh(std::cos(pa) / std::sin(ps));
    g.edge_length = 2.0 * std::acosh(std::cos(ps) / std::sin(pa));
    g.area = (s - 2.0 - 2.0 * s / a) * kPi;
    g.euclid_circumradius = std::tanh(g.circumradius);
    return g;
}

Polygon build_tile(int s, int a, KleinPoint center) {
    const TilingGeometry g = tiling_geometry(s, a);
    Polygon poly;
    poly.vertices.reserve(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) poly.vertices.push_back(polar_point(g.circumradius, 2.0 * kPi * j / s));
    if (center == KleinPoint{}) return poly;
    return poly.transformed(Isometry::translation_to(center));
}

Isometry edge_half_turn(const TilingGeometry& geom, int edge) {
    if (edge < 0 || edge >= geom.s) throw DomainError("edge index out of range");
    // The Euclidean chord midpoint is the foot of the perpendicular from the
    // origin, hence also the hyperbolic midpoint.
    const double t = std::tanh(geom.inradius);
    const double phi = (2.0 * edge + 1.0) * kPi / geom.s;
    return Isometry::rotation_about({t * std::cos(phi), t * std::sin(phi)}, kPi);
}

std::vector<TilePlacement> enumerate_tiles(int s, int a, double radius) {
    if (!(radius >= 0.0)) throw DomainError("radius must be non-negative");
    const TilingGeometry geom = tiling_geometry(s, a);
    std::vector<Isometry> half(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) half[static_cast<std::size_t>(i)] = edge_half_turn(geom, i);

    // Tiles meeting the ball are connected through shared edges and include
    // every tile whose center lies in the ball. Distinct centers are at least
    // twice the inradius apart, so a coarse dedup tolerance is safe.
    const Polygon base = build_tile(s, a);
    PointIndex seen(std::min(1e-4, 0.1 * geom.inradius));
    std::vector<TilePlacement> all;
    std::deque<std::size_t> queue;
    seen.insert({});
    all.push_back({{}, Isometry{}, {}});
    queue.push_back(0);
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (int i = 0; i < s; ++i) {
            Isometry g = all[cur].placement * half[static_cast<std::size_t>(i)];
            const KleinPoint c = g.apply({});
            if (!(norm2(c) < 1.0)) throw NumericError("tile enumeration left the representable disk");
            if (!seen.insert(c).second) continue;
            if (point_polygon_distance(g.inverse().apply({}), base) > radius) continue;
            std::vector<int> w = all[cur].word;
            w.push_back(i);
            all.push_back({std::move(w), g, c});
            queue.push_back(all.size() - 1);
        }
    }
    std::vector<TilePlacement> out;
    for (auto& t : all)
        if (klein_distance({}, t.center) <= radius) out.push_back(std::move(t));
    return out;
}

std::vector<KleinPoint> tiling_vertices_within(int s, int a, double rho) {
    const TilingGeometry geom = tiling_geometry(s, a);
    const Polygon base = build_tile(s, a);
    PointIndex idx(1e-8);
    std::vector<KleinPoint> out;
    for (const auto& t : enumerate_tiles(s, a, rho + geom.circumradius)) {
        for (auto v : base.vertices) {
            const KleinPoint w = t.placement.apply(v);
            if (klein_distance({}, w) <= rho && idx.insert(w).second) out.push_back(w);
        }
    }
    return out;
}

TileLocation locate_tile(const TilingGeometry& geom, const Polygon& base_tile,
                         const std::vector<Isometry>& half_turns, KleinPoint p) {
    if (!in_open_disk(p)) throw DomainError("locate_tile: point outside the disk");
    TileLocation loc{{}, Isometry{}, p};
    // Each step strictly decreases the distance to the tile center, so the walk
    // is finite; the cap only guards against numeric stalls.
    const int cap = 10000;
    for (int step = 0; step < cap; ++step) {
        int worst = -1;
        double worst_side = -1e-13;
        for (int i = 0; i < geom.s; ++i) {
            const double side = base_tile.edge_side(static_cast<std::size_t>(i), loc.local);
            if (side < worst_side) {
                worst_side = side;
                worst = i;
            }
        }
        if (worst < 0) return loc;
        const Isometry& h = half_turns[static_cast<std::size_t>(worst)];
        loc.local = h.apply(loc.local);
        loc.placement = loc.placement * h;
        loc.word.push_back(worst);
    }
    throw NumericError("locate_tile did not terminate");
}

}  // namespace hypack
