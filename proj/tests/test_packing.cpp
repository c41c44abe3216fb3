#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hypack/errors.hpp"
#include "hypack/packing.hpp"
#include "hypack/tiling.hpp"

using namespace hypack;

TEST(Packing, DiskArea) {
    EXPECT_NEAR(disk_area(1.0), 2 * kPi * (std::cosh(1.0) - 1.0), 1e-13);
    EXPECT_THROW(disk_area(0.0), DomainError);
}

TEST(Packing, TightDensityFrozenOracle) {
    EXPECT_NEAR(fixtures::tight_density_formula(7), fixtures::kTightDensity7, 1e-15);
    EXPECT_NEAR(periodic_density(build_tight_packing(7)).value, fixtures::kTightDensity7, 1e-13);
}

TEST(Packing, TightDensityMatchesBoundAndFormula) {
    for (int k = 7; k <= 40; ++k) {
        const double d = periodic_density(build_tight_packing(k)).value;
        EXPECT_NEAR(d, ft_bound(tight_radius(k)), 1e-12) << k;
        EXPECT_NEAR(d, fixtures::tight_density_formula(k), 1e-12) << k;
    }
}

TEST(Packing, TightRadiusGivesEquilateralAngles) {
    for (int k : {7, 12, 50}) {
        const double r = tight_radius(k);
        // Hyperbolic law of cosines for the equilateral triangle of side 2r.
        const double ch = std::cosh(2 * r);
        const double cos_angle = (ch * ch - ch) / (std::sinh(2 * r) * std::sinh(2 * r));
        EXPECT_NEAR(cos_angle, std::cos(2 * kPi / k), 1e-12);
    }
    EXPECT_THROW(tight_radius(6), DomainError);
}

TEST(Packing, IndexTwoSubgroupHasSameDensity) {
    for (int k : {8, 10, 20}) {
        EXPECT_NEAR(periodic_density(build_tight_packing_index2(k)).value,
                    periodic_density(build_tight_packing(k)).value, 1e-12);
    }
    EXPECT_THROW(build_tight_packing_index2(7), DomainError);
}

TEST(Packing, FtBoundIsIncreasingTowardThreeOverPi) {
    double prev = 0.0;
    for (double r = 0.05; r < 12.0; r += 0.05) {
        const double v = ft_bound(r);
        EXPECT_GT(v, prev);
        EXPECT_LT(v, 3.0 / kPi);
        prev = v;
    }
    EXPECT_NEAR(ft_bound(30.0), 3.0 / kPi, 1e-6);
}

TEST(Packing, LargeKStaysValid) {
    const PeriodicPacking p = build_tight_packing(1000);
    EXPECT_TRUE(validate(p).ok);
    EXPECT_NEAR(periodic_density(p).value, 3.0 / kPi, 1e-3);
}

TEST(Packing, ValidateCatchesOverlap) {
    PeriodicPacking p = build_tight_packing(7);
    p.radius *= 1.01;
    const ValidationReport v = validate(p);
    EXPECT_FALSE(v.ok);
    EXPECT_THROW(periodic_density(p), ValidationError);
    p = build_tight_packing(7);
    p.centers = {{0.99, 0.0}};
    EXPECT_FALSE(validate(p).ok);
}

TEST(Packing, ShrinkScalesDensityByAreaRatio) {
    const PeriodicPacking p = build_tight_packing(9);
    for (double s : {0.05, 0.2, 0.5}) {
        const double expect = disk_area(s) / disk_area(p.radius) * periodic_density(p).value;
        EXPECT_NEAR(periodic_density(shrink(p, s)).value, expect, 1e-13);
    }
    EXPECT_THROW(shrink(p, p.radius * 1.5), DomainError);
    EXPECT_THROW(shrink(p, 0.0), DomainError);
}

TEST(Packing, MonteCarloAgreesWithExact) {
    const PeriodicPacking p = build_tight_packing(8);
    const DensityReport mc = mc_density(p, 40000, 3);
    EXPECT_EQ(mc.method, DensityMethod::monte_carlo);
    EXPECT_NEAR(mc.value, periodic_density(p).value, 4 * mc.stderr_);
    EXPECT_EQ(mc_density(p, 5000, 11).value, mc_density(p, 5000, 11).value);
}

TEST(Packing, WindowPackingIsSeparatedAndComplete) {
    const PeriodicPacking p = build_tight_packing(7);
    const WindowPacking w = window_packing(p, 2.5);
    EXPECT_GE(min_separation(w.centers), 2 * p.radius - 1e-9);
    // Every tiling vertex within the window is a center.
    const auto verts = tiling_vertices_within(3, 7, 2.5);
    EXPECT_TRUE(fixtures::same_points(w.centers, verts, 1e-9));
}

TEST(Packing, StabilizerOrderOfConePoint) {
    const PeriodicPacking p = build_tight_packing(9);
    const OrbitLocator loc(p, 1.0);
    EXPECT_EQ(loc.stabilizer_order(p.centers[0]), 9);
    EXPECT_EQ(loc.stabilizer_order({0.013, 0.021}), 1);
}
