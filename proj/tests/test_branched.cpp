#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hypack/branched.hpp"
#include "hypack/errors.hpp"
#include "hypack/packing.hpp"

using namespace hypack;

TEST(Branched, ScaleFactorMapsFineOntoCoarseTile) {
    const BranchedCover cov = build_cover(3, 7);
    EXPECT_NEAR(cov.k, std::tanh(cov.coarse.circumradius) / std::tanh(cov.fine.circumradius), 1e-14);
    // Vertices are branch points; check just inside them.
    for (std::size_t j = 0; j < cov.fine_tile.size(); ++j) {
        const KleinPoint v = apply_cover(cov, (1.0 - 1e-6) * cov.fine_tile.vertices[j]);
        EXPECT_NEAR(v.x, cov.coarse_tile.vertices[j].x, 1e-5);
        EXPECT_NEAR(v.y, cov.coarse_tile.vertices[j].y, 1e-5);
    }
}

TEST(Branched, DilationAgreesWithFiniteDifferences) {
    const BranchedCover cov = build_cover(4, 5);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const KleinPoint x = sample_point(cov.fine_tile, rng);
        const double th = 2 * kPi * rng.uniform();
        const KleinPoint v{std::cos(th), std::sin(th)};
        EXPECT_NEAR(dilation_ratio(cov.k, x, v), fixtures::fd_dilation(cov.k, x, v), 1e-5);
    }
}

TEST(Branched, ContractionBelowOneAndCoversSampledRatios) {
    for (auto [s, a] : {std::pair{3, 7}, {3, 20}, {4, 5}, {5, 4}}) {
        const BranchedCover cov = build_cover(s, a);
        EXPECT_LT(cov.c, 1.0);
        EXPECT_NEAR(cov.c, contraction_factor(cov), 1e-12);
        Rng rng(static_cast<std::uint64_t>(s * 100 + a));
        for (int i = 0; i < 500; ++i) {
            const KleinPoint p = sample_point(cov.fine_tile, rng), q = sample_point(cov.fine_tile, rng);
            EXPECT_LE(klein_distance(apply_cover(cov, p), apply_cover(cov, q)), cov.c * klein_distance(p, q) + 1e-9);
        }
    }
}

TEST(Branched, EquivarianceAcrossTiles) {
    // B(g x) = g' B(x) for paired fine/coarse placements.
    const BranchedCover cov = build_cover(3, 7);
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const KleinPoint far = polar_point(3.0 * rng.uniform(), 2 * kPi * rng.uniform());
        const TileAddress t = locate_fine_tile(cov, far);
        const KleinPoint local = t.placement.inverse()(far);
        const KleinPoint expect = t.coarse_placement(apply_cover(cov, local));
        const KleinPoint got = apply_cover(cov, far);
        EXPECT_NEAR(klein_distance(expect, got), 0.0, 1e-6);
    }
}

TEST(Branched, FiberHasIndexTwoOverGenericPoints) {
    const BranchedCover cov = build_cover(3, 7);
    const FiberIndex idx(cov, 4.0);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const KleinPoint q = sample_point(cov.coarse_tile, rng);
        const auto pre = idx.fiber(q);
        for (auto p : pre) {
            const KleinPoint img = apply_cover(cov, p);
            EXPECT_NEAR(klein_distance(img, q), 0.0, 1e-6);
            EXPECT_LE(klein_distance({}, p), 4.0 + 1e-9);
        }
        EXPECT_GE(pre.size(), 2u);
    }
}

TEST(Branched, EraseRemovesExactlyCentersNearVertices) {
    const BranchedCover cov = build_cover(3, 7);
    WindowPacking p{0.2, 2.0, {}};
    Rng rng(6);
    for (int i = 0; i < 200; ++i) p.centers.push_back(polar_point(1.8 * rng.uniform(), 2 * kPi * rng.uniform()));
    const auto verts = tiling_vertices_within(3, 7, 2.5);
    const WindowPacking e = erase_near_vertices(p, cov);
    std::size_t kept = 0;
    for (auto c : p.centers) {
        bool near = false;
        for (auto v : verts) near = near || fixtures::poincare_distance(c, v) < p.radius;
        kept += near ? 0 : 1;
        EXPECT_EQ(near_coarse_vertex(cov, c, p.radius), near);
    }
    EXPECT_EQ(e.centers.size(), kept);
}

TEST(Branched, LiftSeparatesByContraction) {
    const BranchedCover cov = build_cover(3, 20);
    const PeriodicPacking tight = build_tight_packing(7);
    // Centers at coarse vertices are erased, so move the packing off them.
    Rng rng(2024);
    const Isometry h = random_isometry(rng, 1.0);
    WindowPacking w{tight.radius, 3.0, {}};
    for (auto c : window_packing(tight, 4.0 + 1.0).centers)
        if (klein_distance({}, h(c)) <= 3.0) w.centers.push_back(h(c));
    const WindowPacking lifted = lift_packing(erase_near_vertices(w, cov), cov);
    ASSERT_GE(lifted.centers.size(), 2u);
    EXPECT_GE(min_separation(lifted.centers), 2 * tight.radius / cov.c - 1e-8);
}

TEST(Branched, HomothetyEstimateIsDeterministicAndBounded) {
    const PeriodicPacking p = build_tight_packing(7);
    const BranchedCover cov = build_cover(3, 20);
    const HomothetyEstimate a = homothety_density_estimate(p, cov, {2000, 8});
    const HomothetyEstimate b = homothety_density_estimate(p, cov, {2000, 8});
    EXPECT_EQ(a.density.mean, b.density.mean);
    EXPECT_GT(a.density.mean, 0.0);
    EXPECT_LE(a.density.mean, a.expanded_density.mean);
    EXPECT_LE(a.density.mean, fixtures::kTightDensity7 + 4 * a.density.stderr_);
    EXPECT_NEAR(a.expanded_radius, a.radius / cov.c, 1e-12);
}
