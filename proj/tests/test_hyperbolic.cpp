#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hypack/errors.hpp"
#include "hypack/hyperbolic.hpp"
#include "hypack/sampling.hpp"

using namespace hypack;

namespace {

KleinPoint random_point(Rng& rng, double max_d) {
    return polar_point(max_d * rng.uniform(), 2.0 * kPi * rng.uniform());
}

}  // namespace

TEST(KleinDistance, MatchesPoincareOracle) {
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const KleinPoint p = random_point(rng, 6.0), q = random_point(rng, 6.0);
        const double d = fixtures::poincare_distance(p, q);
        EXPECT_NEAR(klein_distance(p, q), d, 1e-9 * std::max(1.0, d));
    }
}

TEST(KleinDistance, NearlyCoincidentPoints) {
    const KleinPoint p{0.3, -0.2}, q{0.3 + 1e-12, -0.2};
    const double d = klein_distance(p, q);
    EXPECT_GT(d, 0.0);
    // The offset itself carries ~5e-5 relative rounding.
    EXPECT_NEAR(d, klein_vector_length(p, {1e-12, 0.0}), 1e-4 * d);
}

TEST(KleinDistance, RejectsPointsOffTheDisk) {
    EXPECT_THROW(klein_distance({1.0, 0.0}, {}), DomainError);
    EXPECT_THROW(klein_distance({}, {0.8, 0.8}), DomainError);
}

TEST(PolarPoint, HasRequestedDistance) {
    for (double d : {0.0, 0.5, 2.0, 8.0}) EXPECT_NEAR(klein_distance({}, polar_point(d, 1.1)), d, 1e-9);
}

TEST(Isometry, PreservesDistanceAndComposes) {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const Isometry g = random_isometry(rng, 3.0), h = random_isometry(rng, 3.0);
        EXPECT_TRUE(g.is_valid(1e-9));
        const KleinPoint p = random_point(rng, 2.0), q = random_point(rng, 2.0);
        EXPECT_NEAR(klein_distance(g(p), g(q)), klein_distance(p, q), 1e-8);
        const KleinPoint a = (g * h)(p), b = g(h(p));
        EXPECT_NEAR(a.x, b.x, 1e-10);
        EXPECT_NEAR(a.y, b.y, 1e-10);
        const KleinPoint back = g.inverse()(g(p));
        EXPECT_NEAR(back.x, p.x, 1e-10);
        EXPECT_NEAR(back.y, p.y, 1e-10);
    }
}

TEST(Isometry, NamedConstructors) {
    const KleinPoint p{0.4, -0.3};
    const KleinPoint t = Isometry::translation_to(p)({});
    EXPECT_NEAR(t.x, p.x, 1e-14);
    EXPECT_NEAR(t.y, p.y, 1e-14);
    EXPECT_NEAR(Isometry::boost_x(1.0)({}).x, std::tanh(1.0), 1e-14);
    const Isometry r = Isometry::rotation_about(p, 0.7);
    const KleinPoint fixed = r(p);
    EXPECT_NEAR(fixed.x, p.x, 1e-12);
    EXPECT_NEAR(fixed.y, p.y, 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(Polygon, AreaMatchesIntegratedDensity) {
    // Triangle and pentagon at moderate distance from the origin.
    const std::vector<std::vector<KleinPoint>> shapes = {
        {{0.0, 0.0}, {0.6, 0.0}, {0.1, 0.5}},
        {{-0.3, -0.3}, {0.4, -0.35}, {0.55, 0.2}, {0.0, 0.6}, {-0.5, 0.2}},
    };
    for (const auto& v : shapes) {
        const Polygon poly{v};
        ASSERT_TRUE(is_convex(poly));
        EXPECT_NEAR(polygon_area(poly), fixtures::integrated_area(v), 1e-9);
    }
}

TEST(Polygon, IdealTriangleHasAreaPi) {
    Polygon ideal;
    for (int j = 0; j < 3; ++j) ideal.vertices.push_back({std::cos(2 * kPi * j / 3), std::sin(2 * kPi * j / 3)});
    EXPECT_TRUE(ideal.has_ideal_vertex());
    EXPECT_NEAR(polygon_area(ideal), kPi, 1e-12);
    EXPECT_NEAR(interior_angle(ideal, 0), 0.0, 1e-12);
}

TEST(Polygon, ContainmentAndDistance) {
    const Polygon sq{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}};
    EXPECT_TRUE(sq.contains({0.1, 0.2}));
    EXPECT_FALSE(sq.contains({0.6, 0.0}));
    EXPECT_EQ(point_polygon_distance({0.1, 0.2}, sq), 0.0);
    // Nearest point of the edge x = 0.5 to (0.7, 0) is (0.5, 0).
    EXPECT_NEAR(point_polygon_distance({0.7, 0.0}, sq), klein_distance({0.7, 0.0}, {0.5, 0.0}), 1e-9);
}

TEST(PointIndex, DeduplicatesWithinTolerance) {
    PointIndex idx(1e-6);
    EXPECT_TRUE(idx.insert({0.2, 0.1}).second);
    EXPECT_FALSE(idx.insert({0.2 + 1e-9, 0.1}).second);
    EXPECT_TRUE(idx.insert({0.2 + 1e-3, 0.1}).second);
    EXPECT_EQ(idx.size(), 2u);
    EXPECT_EQ(idx.find({0.2, 0.1 + 1e-9}), 0);
    EXPECT_EQ(idx.find({-0.5, 0.0}), -1);
}

TEST(Sampling, PolygonSamplerIsAreaUniform) {
    // Fraction of samples in the sub-triangle must match its area share.
    const Polygon tri{{{0.0, 0.0}, {0.9, 0.0}, {0.0, 0.9}}};
    const Polygon half{{{0.0, 0.0}, {0.45, 0.0}, {0.0, 0.45}}};
    const double share = polygon_area(half) / polygon_area(tri);
    Rng rng(5);
    const int n = 40000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const KleinPoint p = sample_point(tri, rng);
        ASSERT_TRUE(tri.contains(p, 1e-12));
        hits += half.contains(p) ? 1 : 0;
    }
    const double sigma = std::sqrt(share * (1 - share) / n);
    EXPECT_NEAR(static_cast<double>(hits) / n, share, 4.0 * sigma);
}

TEST(Sampling, SeededDeterminism) {
    const Polygon tri{{{0.0, 0.0}, {0.9, 0.0}, {0.0, 0.9}}};
    const KleinPoint a = sample_point(tri, 42), b = sample_point(tri, 42);
    EXPECT_EQ(a, b);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}
