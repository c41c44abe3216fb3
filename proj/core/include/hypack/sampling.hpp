#pragma once

#include <cstdint>
#include <random>

#include "hypack/hyperbolic.hpp"

namespace hypack {

/// splitmix64 step; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator with a portable [0,1) double.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

/// Uniform point with respect to hyperbolic area inside a convex polygon.
/// Compact polygons near the origin use rejection sampling against the area
/// density (1-x^2-y^2)^(-3/2); polygons reaching far out or with ideal
/// vertices use an exact inverse-CDF fan sampler.
KleinPoint sample_point(const Polygon& poly, Rng& rng);
KleinPoint sample_point(const Polygon& poly, std::uint64_t seed);

/// Random isometry moving the origin a distance uniform in [0, max_displacement]
/// (with random direction and rotation). Not Haar; used for test probes.
Isometry random_isometry(Rng& rng, double max_displacement);

}  // namespace hypack
