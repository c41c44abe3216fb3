#pragma once

// Periodic circle packings and their densities.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypack/hyperbolic.hpp"

namespace hypack {

/// Finite piece of a packing: centers within `window` of the origin.
struct WindowPacking {
    double radius = 0.0;
    double window = 0.0;
    std::vector<KleinPoint> centers;
};

/// Packing invariant under the group generated by `generators`, with one
/// representative per center orbit in the fundamental domain. A center that
/// is a cone point of the group sits on the domain boundary and carries its
/// stabilizer order; its disk contributes disk_area/stabilizer to the domain.
struct PeriodicPacking {
    double radius = 0.0;
    std::vector<Isometry> generators;
    Polygon domain;
    std::vector<KleinPoint> centers;
    std::vector<int> stabilizers;  // same length as centers; 1 for free orbits

    int stabilizer(std::size_t i) const { return i < stabilizers.size() ? stabilizers[i] : 1; }
};

enum class DensityMethod { exact, monte_carlo };

struct DensityReport {
    double value = 0.0;
    DensityMethod method = DensityMethod::exact;
    double stderr_ = 0.0;
};

double disk_area(double r);
DensityReport periodic_density(const PeriodicPacking& p);
DensityReport mc_density(const PeriodicPacking& p, std::size_t samples, std::uint64_t seed);
PeriodicPacking shrink(const PeriodicPacking& p, double s);

/// Density of three r-disk sectors in the equilateral triangle of side 2r.
double ft_bound(double r);
/// Radius at which the equilateral triangle of side 2r has angles 2*pi/k.
double tight_radius(int k);
/// Centers at the vertices of {3,k}, radius r_k, symmetry group (2,3,k).
PeriodicPacking build_tight_packing(int k);
/// Index-2 subgroup of the tight packing group for even k, with the rhombus
/// made of two copies of the triangle domain as fundamental domain.
PeriodicPacking build_tight_packing_index2(int k);

struct ValidationReport {
    bool ok = true;
    double min_separation = 0.0;
    std::string message;
};

/// Separation among all images of the centers under group words of length
/// <= max_word, plus domain membership.
ValidationReport validate(const PeriodicPacking& p, int max_word = 4, double tol = 1e-9);

/// Orbit of the centers under the group, located around arbitrary query points.
/// Built once per packing; queries are const and thread safe.
class OrbitLocator {
public:
    /// `reach` bounds the query radius.
    OrbitLocator(const PeriodicPacking& p, double reach);

    /// All orbit points within `radius` (<= reach) of q.
    std::vector<KleinPoint> points_near(KleinPoint q, double radius) const;
    /// Group elements near the identity, deduplicated by their action.
    const std::vector<Isometry>& local_elements() const { return elements_; }
    /// Number of distinct group elements fixing the point c.
    int stabilizer_order(KleinPoint c) const;

private:
    Isometry reduce(KleinPoint q) const;

    double reach_;
    double domain_diam_;
    KleinPoint ref_;
    std::vector<Isometry> elements_;
    std::vector<Isometry> steps_;
    std::vector<KleinPoint> local_points_;
};

/// Orbit points of the centers within W of the origin.
WindowPacking window_packing(const PeriodicPacking& p, double W);

/// Group elements (deduplicated by the image of ref, an interior point of the
/// domain) moving ref at most `radius`. Throws DomainError when some side of
/// the domain is not paired by a word of length <= 4.
std::vector<Isometry> group_elements_within(const PeriodicPacking& p, KleinPoint ref, double radius);

/// Smallest pairwise distance; +inf for fewer than two points.
double min_separation(const std::vector<KleinPoint>& pts);

}  // namespace hypack
