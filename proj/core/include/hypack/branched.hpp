#pragma once

// Branched homothety x -> kx carrying the {s,2a} tiling onto the {s,a} tiling,
// with branching of index 2 over the vertices.

#include <cstdint>
#include <vector>

#include "hypack/hyperbolic.hpp"
#include "hypack/montecarlo.hpp"
#include "hypack/packing.hpp"
#include "hypack/tiling.hpp"

namespace hypack {

struct BranchedCover {
    int s = 0;
    int a = 0;
    double k = 0.0;
    TilingGeometry fine;    // {s, 2a}
    TilingGeometry coarse;  // {s, a}
    double c = 0.0;         // contraction constant
    Polygon fine_tile;
    Polygon coarse_tile;
    std::vector<Isometry> fine_half_turns;
    std::vector<Isometry> coarse_half_turns;
};

/// Fine tile reached by an edge-crossing word, with the paired coarse tile
/// (same word in the coarse tiling).
struct TileAddress {
    std::vector<int> word;
    Isometry placement;
    Isometry coarse_placement;
};

BranchedCover build_cover(int s, int a);

/// Max of the pointwise metric dilation of x -> kx over the fine base tile,
/// found on a grid with local refinement, plus 1e-6.
double contraction_factor(const BranchedCover& cov);

/// Ratio |d(kx)(v)| / |v| for the Klein metric at x.
double dilation_ratio(double k, KleinPoint x, KleinPoint v);

/// Coarse placement paired with a fine edge-crossing word.
Isometry coarse_placement(const BranchedCover& cov, const std::vector<int>& word);

TileAddress locate_fine_tile(const BranchedCover& cov, KleinPoint p);
KleinPoint apply_cover(const BranchedCover& cov, KleinPoint p);

/// Precomputed fine tiles within a window, grouped by the coarse tile they map
/// onto. Queries are const and thread safe.
class FiberIndex {
public:
    FiberIndex(const BranchedCover& cov, double window);

    /// Preimages of q within `window` of the origin.
    std::vector<KleinPoint> fiber(KleinPoint q) const;
    double window() const { return window_; }
    std::size_t tile_count() const { return tiles_.size(); }

private:
    const BranchedCover* cov_;
    double window_;
    std::vector<TileAddress> tiles_;
    PointIndex coarse_centers_;
    std::vector<std::vector<std::size_t>> by_coarse_;
};

std::vector<KleinPoint> fiber(const BranchedCover& cov, KleinPoint q, double window);

/// Removes centers within r of a coarse tiling vertex.
WindowPacking erase_near_vertices(const WindowPacking& p, const BranchedCover& cov);
/// True when q lies within r of a coarse tiling vertex.
bool near_coarse_vertex(const BranchedCover& cov, KleinPoint q, double r);

/// Union of fibers of the centers; output separation is checked against
/// 2r/c and a ValidationError is raised on violation.
WindowPacking lift_packing(const WindowPacking& p, const BranchedCover& cov);
WindowPacking expand_radius(const WindowPacking& p, double R);

struct HomothetyEstimate {
    McEstimate density;           // disks of radius r
    McEstimate expanded_density;  // same centers, radius r/c
    double radius = 0.0;
    double expanded_radius = 0.0;
};

struct HomothetyOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
};

HomothetyEstimate homothety_density_estimate(const PeriodicPacking& p, const BranchedCover& cov,
                                             const HomothetyOptions& opt);

/// Sample estimate of the smallest rho such that d(Bp, Bq) >= d(p,q) - delta
/// for p, q in the fine base tile at distance >= rho from its vertices.
double branch_exclusion_radius(const BranchedCover& cov, double delta, std::size_t samples, std::uint64_t seed);

}  // namespace hypack
