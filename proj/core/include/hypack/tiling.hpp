#pragma once

// Regular tilings {s,a}: regular s-gons with interior angle 2*pi/a, a of them
// around every vertex. The base tile is centered at the origin with vertex j
// at angle 2*pi*j/s; edge i joins vertex i and vertex i+1.

#include <vector>

#include "hypack/hyperbolic.hpp"

namespace hypack {

struct TilingGeometry {
    int s = 0;
    int a = 0;
    double circumradius = 0.0;
    double inradius = 0.0;
    double edge_length = 0.0;
    double area = 0.0;
    double euclid_circumradius = 0.0;  // tanh(circumradius)
};

/// True when (s-2)(a-2) > 4.
bool is_hyperbolic_pair(int s, int a);

/// Throws DomainError unless s, a >= 3 and (s-2)(a-2) > 4.
TilingGeometry tiling_geometry(int s, int a);

/// Regular tile of {s,a}; centered at `center` when given (translated along the
/// geodesic from the origin).
Polygon build_tile(int s, int a, KleinPoint center = {});

/// Half-turn about the midpoint of edge i of the base tile. It maps the base
/// tile onto its neighbour across edge i, and is an involution.
Isometry edge_half_turn(const TilingGeometry& geom, int edge);

struct TilePlacement {
    std::vector<int> word;  // edge crossings from the base tile
    Isometry placement;     // maps the base tile onto this tile
    KleinPoint center;
};

/// Breadth-first enumeration of the tiles whose center lies within `radius`
/// of the origin. Order is BFS order; tiles are identified by center.
std::vector<TilePlacement> enumerate_tiles(int s, int a, double radius);

/// Vertices of the tiling within hyperbolic distance rho of the origin,
/// deduplicated at 1e-8.
std::vector<KleinPoint> tiling_vertices_within(int s, int a, double rho);

/// Walks from the base tile toward p by repeated half-turns across the edge
/// that p violates most; stops when p lies in the (closed) base tile.
/// `local` receives the pulled-back point in the base tile.
struct TileLocation {
    std::vector<int> word;
    Isometry placement;
    KleinPoint local;
};
TileLocation locate_tile(const TilingGeometry& geom, const Polygon& base_tile,
                         const std::vector<Isometry>& half_turns, KleinPoint p);

}  // namespace hypack
