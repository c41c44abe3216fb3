#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <set>

#include "fixtures.hpp"
#include "hypack/errors.hpp"
#include "hypack/packing.hpp"
#include "hypack/transport.hpp"

using namespace hypack;

namespace {

// Upper half-plane point to Klein point: Cayley map to the Poincare disk, then
// radial doubling.
KleinPoint from_upper(std::complex<double> z) {
    const std::complex<double> w = (z - std::complex<double>(0, 1)) / (z + std::complex<double>(0, 1));
    const double s = 2.0 / (1.0 + std::norm(w));
    return {s * w.real(), s * w.imag()};
}

WindowPacking moved_window(Rng& rng, double W) {
    const Isometry h = random_isometry(rng, 0.5);
    PeriodicPacking p = build_tight_packing(7);
    for (auto& g : p.generators) g = h * g * h.inverse();
    p.domain = p.domain.transformed(h);
    for (auto& c : p.centers) c = h(c);
    return window_packing(p, W);
}

}  // namespace

TEST(Sl2, MatchesMoebiusAction) {
    const double a = 2.0, b = 1.0, c = 3.0, d = 2.0;
    const Isometry g = isometry_from_sl2(a, b, c, d);
    EXPECT_TRUE(g.is_valid(1e-9));
    for (auto z : {std::complex<double>(0.3, 1.2), std::complex<double>(-1.0, 0.5), std::complex<double>(2.0, 3.0)}) {
        const KleinPoint got = g(from_upper(z)), want = from_upper((a * z + b) / (c * z + d));
        EXPECT_NEAR(got.x, want.x, 1e-10);
        EXPECT_NEAR(got.y, want.y, 1e-10);
    }
}

TEST(FreeGroup, DefaultEmbeddingIsFreeWithAreaTwoPi) {
    for (KleinPoint base : {KleinPoint{}, KleinPoint{0.3, 0.2}}) {
        const FreeGroupEmbedding emb = default_free_group(base);
        EXPECT_EQ(emb.generators.size(), 2u);
        EXPECT_NEAR(polygon_area(emb.domain), 2 * kPi, 1e-6);
        EXPECT_TRUE(relation_free(emb, 6));
        EXPECT_EQ(emb.side_pairings.size(), emb.domain.size());
        EXPECT_TRUE(emb.domain.contains(base));
    }
}

TEST(FreeGroup, SidePairingsMapDomainAcrossEachSide) {
    const FreeGroupEmbedding emb = default_free_group({0.3, 0.2});
    for (std::size_t i = 0; i < emb.domain.size(); ++i) {
        const Polygon nb = emb.domain.transformed(emb.element(emb.side_pairings[i]));
        const KleinPoint a = emb.domain.vertices[i], b = emb.domain.vertices[(i + 1) % emb.domain.size()];
        // The side midpoint is shared; the neighbour's interior lies outside.
        const KleinPoint mid = 0.5 * (a + b);
        EXPECT_TRUE(nb.contains(mid, 1e-7)) << i;
        EXPECT_FALSE(emb.domain.contains(emb.element(emb.side_pairings[i])(emb.basepoint), 1e-9));
    }
}

TEST(FreeGroup, ElementIsLeftToRightProduct) {
    const FreeGroupEmbedding emb = default_free_group();
    const Isometry g = emb.element(ReducedWord{{1, -2}});
    const Isometry want = emb.generators[0] * emb.generators[1].inverse();
    EXPECT_LT(g.distance_to(want), 1e-12);
}

TEST(DirichletDomain, TilesDoNotOverlap) {
    const FreeGroupEmbedding emb = default_free_group();
    Rng rng(3);
    const auto words = ball_words(2, 3);
    for (int i = 0; i < 300; ++i) {
        const KleinPoint p = polar_point(2.5 * rng.uniform(), 2 * kPi * rng.uniform());
        int inside = 0;
        for (const auto& w : words) {
            const KleinPoint local = emb.element(w).inverse()(p);
            if (in_open_disk(local) && emb.domain.min_edge_side(local) > 1e-9) ++inside;
        }
        EXPECT_LE(inside, 1);
    }
}

TEST(TileWalk, VisitsExactlyTheTilesInRange) {
    const FreeGroupEmbedding emb = default_free_group();
    const KleinPoint q{0.2, -0.4};
    std::set<ReducedWord> seen;
    for_each_tile_near(emb, q, 1.5, [&](const ReducedWord& w, const Isometry&) { seen.insert(w); });
    for (const auto& w : ball_words(2, 5)) {
        const double d = point_polygon_distance(emb.element(w).inverse()(q), emb.domain);
        if (d <= 1.5 - 1e-9) EXPECT_TRUE(seen.count(w)) << to_string(w);
        if (d > 1.5 + 1e-9) EXPECT_FALSE(seen.count(w)) << to_string(w);
    }
}

TEST(TileWalk, SiteSearchMatchesBruteForce) {
    const FreeGroupEmbedding emb = default_free_group({0.3, 0.2});
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const KleinPoint q = polar_point(2.0 * rng.uniform(), 2 * kPi * rng.uniform());
        std::set<ReducedWord> seen;
        for_each_site_near(emb, q, 2.0, [&](const ReducedWord& w, const Isometry&) { seen.insert(w); });
        for (const auto& w : ball_words(2, 6)) {
            const double d = fixtures::poincare_distance(q, emb.element(w)(emb.basepoint));
            if (d <= 2.0 - 1e-9) EXPECT_TRUE(seen.count(w)) << to_string(w);
            if (d > 2.0 + 1e-9) EXPECT_FALSE(seen.count(w)) << to_string(w);
        }
    }
}

TEST(Encode, RoundTripAndEquivariance) {
    const FreeGroupEmbedding emb = default_free_group();
    Rng rng(7);
    const WindowPacking w = moved_window(rng, 2.5);
    const PackingColoring c = encode(w.centers, w.radius, emb, 2);
    for (const auto& [f, vals] : c.values)
        for (auto v : vals) EXPECT_TRUE(emb.domain.contains(v));
    const WindowPacking back = decode(c);
    for (auto p : back.centers) {
        bool found = false;
        for (auto q : w.centers) found = found || std::hypot(p.x - q.x, p.y - q.y) < 1e-9;
        EXPECT_TRUE(found);
    }
    const ReducedWord g{{2}};
    std::vector<KleinPoint> moved;
    for (auto p : w.centers) moved.push_back(emb.element(g)(p));
    const PackingColoring direct = encode(moved, w.radius, emb, 2);
    for (const auto& [f, vals] : translate(c, g).values)
        EXPECT_TRUE(fixtures::same_points(direct.values.at(f), vals, 1e-9)) << to_string(f);
}

TEST(Encode, RejectsBoundaryCentersAndOverlaps) {
    const FreeGroupEmbedding emb = default_free_group();
    const KleinPoint a = emb.domain.vertices[0], b = emb.domain.vertices[1];
    EXPECT_THROW(encode({0.5 * (a + b)}, 0.1, emb, 1), DomainError);
    PackingColoring c = encode({{0.1, 0.0}, {0.12, 0.0}}, 0.5, emb, 1);
    EXPECT_THROW(decode(c), ValidationError);
}

TEST(Discretize, HausdorffBoundAndStableSymbols) {
    const FreeGroupEmbedding emb = default_free_group();
    Discretization disc{0.85, 0.3, emb.basepoint, {}, {}};
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const WindowPacking w = moved_window(rng, 2.5);
        const PackingColoring c = encode(w.centers, w.radius, emb, 1);
        const DiscreteColoring d = discretize(c, disc);
        for (const auto& [f, sym] : d.symbols) {
            std::vector<KleinPoint> kept;
            for (auto p : c.values.at(f))
                if (klein_distance(p, emb.basepoint) <= disc.x) kept.push_back(p);
            EXPECT_LE(hausdorff_distance(kept, disc.cells[static_cast<std::size_t>(sym)]), disc.delta);
            EXPECT_EQ(disc.find(kept), sym);
        }
    }
    EXPECT_EQ(hausdorff_distance({}, {}), 0.0);
    EXPECT_TRUE(std::isinf(hausdorff_distance({{0.1, 0.1}}, {})));
}

TEST(Averaging, DomainsAgreeWithExactDensity) {
    const PeriodicPacking p = build_tight_packing(7);
    const PeriodicFamily fam(p, p.radius);
    const double exact = periodic_density(p).value;
    for (KleinPoint base : {KleinPoint{}, KleinPoint{0.3, 0.2}}) {
        const McEstimate e = average_functional(origin_coverage, fam, default_free_group(base), {30000, 5, 0.0, {}});
        EXPECT_NEAR(e.mean, exact, 4 * e.stderr_);
    }
}

TEST(Averaging, FiberSamplerHitsDomain) {
    const FreeGroupEmbedding emb = default_free_group({0.3, 0.2});
    Rng rng(1);
    for (int i = 0; i < 500; ++i) EXPECT_TRUE(emb.domain.contains(sample_group_fiber(emb, rng)({}), 1e-9));
}

TEST(Averaging, InvarianceRestoredOnlyByAveraging) {
    const FreeGroupEmbedding emb = default_free_group();
    const fixtures::CornerOrbit corner = fixtures::corner_orbit(emb);
    const FreeOrbitFamily orbit(emb, {corner.seed}, corner.radius);
    EXPECT_EQ(origin_coverage(orbit.centers_near({}, corner.radius), corner.radius), 0.0);
    EXPECT_FALSE(invariance_test_unaveraged(orbit, {corner.probe}).passed);
    const InvarianceReport avg = invariance_test(orbit, emb, {corner.probe}, 20000, 9);
    EXPECT_TRUE(avg.passed) << avg.z_scores[0];
    // Averaged coverage equals the disk area over the domain area.
    EXPECT_NEAR(avg.before[0].mean, disk_area(corner.radius) / (2 * kPi), 4 * avg.before[0].stderr_);
}
