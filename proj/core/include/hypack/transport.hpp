#pragma once

// Encoding packings as colorings of a free group F acting on the plane, the
// cell discretization of the color alphabet, and Monte-Carlo averaging over a
// fundamental domain of F in the isometry group.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "hypack/hyperbolic.hpp"
#include "hypack/montecarlo.hpp"
#include "hypack/packing.hpp"
#include "hypack/shift.hpp"

namespace hypack {

struct FreeGroupEmbedding {
    std::vector<Isometry> generators;
    Polygon domain;
    KleinPoint basepoint;
    /// side_pairings[i]: word w such that w(domain) is the neighbour across side i.
    std::vector<ReducedWord> side_pairings;

    /// Image of a word: letter +i applies generators[i-1], -i its inverse;
    /// the word acts as the product of its letters left to right.
    Isometry element(const ReducedWord& w) const;
};

/// Klein-model isometry of a real Moebius transformation z -> (az+b)/(cz+d)
/// of the upper half-plane (ad - bc = 1).
Isometry isometry_from_sl2(double a, double b, double c, double d);

struct DirichletDomain {
    Polygon domain;
    std::vector<ReducedWord> side_pairings;
};

/// Dirichlet domain about `basepoint`, intersecting bisector half-planes over
/// all group elements of word length <= max_word. Vertices within 1e-6 of
/// the unit circle are snapped onto it (cusps).
DirichletDomain dirichlet_domain(const std::vector<Isometry>& generators, KleinPoint basepoint, int max_word = 6);

/// Principal congruence subgroup Gamma(2), generated by the images of
/// [[1,2],[0,1]] and [[1,0],[2,1]], with its Dirichlet domain about `basepoint`.
FreeGroupEmbedding default_free_group(KleinPoint basepoint = {});

/// True when no nontrivial reduced word of length <= max_word moves the
/// basepoint by less than tol.
bool relation_free(const FreeGroupEmbedding& emb, int max_word = 8, double tol = 1e-6);

struct PackingColoring {
    FreeGroupEmbedding embedding;
    double radius = 0.0;
    int window = 0;
    std::map<ReducedWord, std::vector<KleinPoint>> values;
};

/// values(f) = centers of f^-1 P inside the domain, for |f| <= window_words.
/// Throws DomainError when a center is within 1e-9 of the domain boundary.
PackingColoring encode(const std::vector<KleinPoint>& centers, double radius, const FreeGroupEmbedding& emb,
                       int window_words);

/// Union of f . values(f). Throws ValidationError on overlapping disks.
WindowPacking decode(const PackingColoring& c);

/// Coloring g . c for g in F: values'(f) = values(g^-1 f), kept where g^-1 f
/// stays inside the window.
PackingColoring translate(const PackingColoring& c, const ReducedWord& g);

struct Discretization {
    double x = 0.0;
    double delta = 0.0;
    KleinPoint center;
    std::vector<std::vector<KleinPoint>> cells;  // representatives, index = symbol

    /// Symbol of a value set, adding a new cell when unseen.
    int classify(const std::vector<KleinPoint>& values);
    /// Symbol of a value set or -1.
    int find(const std::vector<KleinPoint>& values) const;

    std::map<std::vector<std::pair<long, long>>, int> keys;
};

struct DiscreteColoring {
    std::map<ReducedWord, int> symbols;
};

/// Keeps the centers in B_x(basepoint), snaps them to a grid of hyperbolic
/// mesh <= delta/2 about the basepoint and replaces each value set by its
/// cell representative. `disc` accumulates cells across calls.
DiscreteColoring discretize(const PackingColoring& c, Discretization& disc);

/// Hausdorff distance between finite point sets (0 for two empty sets,
/// +inf when exactly one is empty).
double hausdorff_distance(const std::vector<KleinPoint>& a, const std::vector<KleinPoint>& b);

/// Distance from the basepoint beyond which cusp samples are redrawn. The
/// excluded Haar mass is about 1e-5 of the fiber for Gamma(2).
inline constexpr double kCuspCutoff = 12.0;

/// g = T(y) Rot(theta), y uniform in the domain within kCuspCutoff of the
/// basepoint, theta uniform: Haar measure on {g : g(0) in domain}, truncated
/// in the cusps.
Isometry sample_group_fiber(const FreeGroupEmbedding& emb, Rng& rng);
Isometry sample_group_fiber(const FreeGroupEmbedding& emb, std::uint64_t seed);

/// Packing data known near any point: a member of an invariant family.
class PackingFamily {
public:
    virtual ~PackingFamily() = default;
    virtual double radius() const = 0;
    /// Centers within `dist` of q.
    virtual std::vector<KleinPoint> centers_near(KleinPoint q, double dist) const = 0;
    /// Random member u P of the family's measure, as the isometry u applied to
    /// the stored packing P. A single packing returns the identity.
    virtual Isometry sample_member(Rng&) const { return Isometry{}; }
};

/// Isometric images u P of a periodic packing, u Haar-uniform modulo Sym(P):
/// fully invariant.
class PeriodicFamily : public PackingFamily {
public:
    PeriodicFamily(PeriodicPacking p, double reach);
    double radius() const override { return packing_.radius; }
    std::vector<KleinPoint> centers_near(KleinPoint q, double dist) const override;
    Isometry sample_member(Rng& rng) const override;

private:
    PeriodicPacking packing_;
    OrbitLocator locator_;
};

/// F . S for a finite set S: invariant under F only.
class FreeOrbitFamily : public PackingFamily {
public:
    FreeOrbitFamily(FreeGroupEmbedding emb, std::vector<KleinPoint> seeds, double radius);
    double radius() const override { return radius_; }
    std::vector<KleinPoint> centers_near(KleinPoint q, double dist) const override;

private:
    FreeGroupEmbedding emb_;
    std::vector<KleinPoint> seeds_;
    double radius_;
    double reach_ = 0.0;  // max distance from the basepoint to a seed
};

/// Packing of a periodic coloring whose symbols index cell representatives:
/// the tile f(domain) carries f(cells[symbol at f]).
class PeriodicColoringFamily : public PackingFamily {
public:
    PeriodicColoringFamily(FreeGroupEmbedding emb, PeriodicColoring coloring,
                           std::vector<std::vector<KleinPoint>> cells, double radius);
    double radius() const override { return radius_; }
    std::vector<KleinPoint> centers_near(KleinPoint q, double dist) const override;

private:
    FreeGroupEmbedding emb_;
    PeriodicColoring coloring_;
    std::vector<std::vector<KleinPoint>> cells_;
    double radius_;
    double reach_ = 0.0;  // max distance from the basepoint to a cell point
};

/// Visits every tile f(domain) within `dist` of q as (f, element(f)).
void for_each_tile_near(const FreeGroupEmbedding& emb, KleinPoint q, double dist,
                        const std::function<void(const ReducedWord&, const Isometry&)>& visit);
/// Visits every tile f(domain) whose site f(basepoint) is within `dist` of q.
/// Deep in a cusp a ball meets many tiles but few sites.
void for_each_site_near(const FreeGroupEmbedding& emb, KleinPoint q, double dist,
                        const std::function<void(const ReducedWord&, const Isometry&)>& visit);

/// f(centers, r) on a window packing around the origin.
using PackingFunctional = std::function<double(const std::vector<KleinPoint>&, double)>;

/// 1 when the origin lies in a disk.
double origin_coverage(const std::vector<KleinPoint>& centers, double r);

struct AverageOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double window = 0.0;  // 0: the family radius
    /// Extra isometry h applied after g: evaluates f(h g^-1 P).
    Isometry post = Isometry{};
};

/// Mean of f(g^-1 u P) over g Haar-uniform in the fundamental-domain fiber
/// and u drawn by the family.
McEstimate average_functional(const PackingFunctional& f, const PackingFamily& family,
                              const FreeGroupEmbedding& emb, const AverageOptions& opt);

struct InvarianceReport {
    bool passed = true;
    std::vector<double> z_scores;
    std::vector<McEstimate> before, after;
};

/// Compares averaged origin coverage with and without each h (independent
/// seeds); passes when every |z| <= 4.
InvarianceReport invariance_test(const PackingFamily& family, const FreeGroupEmbedding& emb,
                                 const std::vector<Isometry>& hs, std::size_t samples, std::uint64_t seed);

/// Same comparison on the family member itself, without averaging.
InvarianceReport invariance_test_unaveraged(const PackingFamily& family, const std::vector<Isometry>& hs);

}  // namespace hypack
