#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hypack/errors.hpp"
#include "hypack/tiling.hpp"

using namespace hypack;

TEST(Tiling, RejectsNonHyperbolicPairs) {
    EXPECT_FALSE(is_hyperbolic_pair(3, 6));
    EXPECT_FALSE(is_hyperbolic_pair(4, 4));
    EXPECT_TRUE(is_hyperbolic_pair(3, 7));
    EXPECT_THROW(tiling_geometry(3, 6), DomainError);
    EXPECT_THROW(tiling_geometry(2, 9), DomainError);
}

TEST(Tiling, AreaIdentityAgainstIntegratedArea) {
    for (auto [s, a] : {std::pair{3, 7}, {4, 5}, {5, 4}, {7, 3}, {6, 6}}) {
        const Polygon tile = build_tile(s, a);
        const double expected = (s - 2 - 2.0 * s / a) * kPi;
        EXPECT_NEAR(fixtures::integrated_area(tile.vertices), expected, 1e-8) << s << "," << a;
        EXPECT_NEAR(tiling_geometry(s, a).area, expected, 1e-12);
    }
}

TEST(Tiling, AnglesAndEdges) {
    const TilingGeometry g = tiling_geometry(4, 5);
    const Polygon tile = build_tile(4, 5);
    for (std::size_t i = 0; i < tile.size(); ++i) {
        EXPECT_NEAR(interior_angle(tile, i), 2 * kPi / 5, 1e-12);
        EXPECT_NEAR(fixtures::poincare_distance(tile.vertices[i], tile.vertices[(i + 1) % 4]), g.edge_length, 1e-10);
        EXPECT_NEAR(fixtures::poincare_distance({}, tile.vertices[i]), g.circumradius, 1e-10);
    }
}

TEST(Tiling, HalfTurnsAreInvolutionsOntoNeighbours) {
    const TilingGeometry g = tiling_geometry(3, 7);
    const Polygon tile = build_tile(3, 7);
    for (int e = 0; e < 3; ++e) {
        const Isometry h = edge_half_turn(g, e);
        EXPECT_LT((h * h).distance_to(Isometry{}), 1e-12);
        // The shared edge is fixed as a set, and the images lie outside the tile.
        const KleinPoint a = tile.vertices[static_cast<std::size_t>(e)], b = tile.vertices[static_cast<std::size_t>((e + 1) % 3)];
        EXPECT_NEAR(h(a).x, b.x, 1e-12);
        EXPECT_NEAR(h(a).y, b.y, 1e-12);
        EXPECT_FALSE(tile.contains(h({}), 1e-9));
        EXPECT_NEAR(klein_distance({}, h({})), 2 * g.inradius, 1e-10);
    }
}

TEST(Tiling, EnumerationCountsGrowAndStayDistinct) {
    const auto near = enumerate_tiles(3, 7, 1.0);
    const auto far = enumerate_tiles(3, 7, 3.0);
    EXPECT_GT(far.size(), near.size());
    PointIndex idx(1e-6);
    for (const auto& t : far) {
        EXPECT_TRUE(idx.insert(t.center).second);
        EXPECT_LE(point_polygon_distance({}, build_tile(3, 7).transformed(t.placement)), 3.0 + 1e-9);
    }
    // The base tile and its three neighbours.
    EXPECT_GE(near.size(), 4u);
    EXPECT_TRUE(near.front().word.empty());
}

TEST(Tiling, VerticesWithinRadius) {
    const TilingGeometry g = tiling_geometry(3, 7);
    const auto v = tiling_vertices_within(3, 7, g.circumradius + 1e-9);
    EXPECT_EQ(v.size(), 3u);
    for (auto p : tiling_vertices_within(3, 7, 2.5)) EXPECT_LE(klein_distance({}, p), 2.5 + 1e-9);
}

TEST(Tiling, LocateTileReturnsContainingTile) {
    const TilingGeometry g = tiling_geometry(4, 5);
    const Polygon base = build_tile(4, 5);
    std::vector<Isometry> turns;
    for (int e = 0; e < 4; ++e) turns.push_back(edge_half_turn(g, e));
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
        const KleinPoint p = polar_point(4.0 * rng.uniform(), 2 * kPi * rng.uniform());
        const TileLocation loc = locate_tile(g, base, turns, p);
        EXPECT_TRUE(base.contains(loc.local, 1e-9));
        const KleinPoint back = loc.placement(loc.local);
        EXPECT_NEAR(klein_distance(back, p), 0.0, 1e-7);
    }
}
