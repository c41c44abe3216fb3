#include "hypack/transport.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <set>

#include "hypack/errors.hpp"

namespace hypack {

namespace {

using Mat3 = std::array<double, 9>;

Mat3 mat_inverse(const Mat3& m) {
    const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                       m[2] * (m[3] * m[7] - m[4] * m[6]);
    if (std::abs(det) < 1e-300) throw NumericError("singular frame");
    Mat3 r{m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
           m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
           m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
    for (double& v : r) v /= det;
    return r;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[3 * i + j] += a[3 * i + k] * b[3 * k + j];
    return r;
}

// Hyperboloid vector of a point of the upper half-plane.
std::array<double, 3> hyperboloid_of(std::complex<double> z) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> w = (z - i) / (z + i);
    const double n = std::norm(w);
    return {2.0 * w.real() / (1.0 - n), 2.0 * w.imag() / (1.0 - n), (1.0 + n) / (1.0 - n)};
}

struct Labeled {
    KleinPoint p;
    int label;  // edge leaving p; -1 for the initial square
};

std::vector<Labeled> clip(const std::vector<Labeled>& poly, KleinPoint n, double c, int label) {
    std::vector<Labeled> out;
    const std::size_t m = poly.size();
    auto val = [&](KleinPoint x) { return dot(n, x) - c; };
    for (std::size_t i = 0; i < m; ++i) {
        const Labeled& P = poly[i];
        const Labeled& Q = poly[(i + 1) % m];
        const double vp = val(P.p), vq = val(Q.p);
        const bool pin = vp <= 0.0, qin = vq <= 0.0;
        if (pin) out.push_back(P);
        if (pin != qin) {
            const double t = vp / (vp - vq);
            const KleinPoint I = P.p + t * (Q.p - P.p);
            out.push_back({I, pin ? label : P.label});
        }
    }
    return out;
}

}  // namespace

Isometry FreeGroupEmbedding::element(const ReducedWord& w) const {
    Isometry g;
    for (int l : w.letters) {
        const std::size_t i = static_cast<std::size_t>(std::abs(l) - 1);
        if (i >= generators.size()) throw DomainError("letter outside the generating set");
        g = g * (l > 0 ? generators[i] : generators[i].inverse());
    }
    return g;
}

Isometry isometry_from_sl2(double a, double b, double c, double d) {
    if (std::abs(a * d - b * c - 1.0) > 1e-9) throw DomainError("matrix must have determinant 1");
    const std::complex<double> zs[3] = {{0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}};
    Mat3 X{}, Y{};
    for (int j = 0; j < 3; ++j) {
        const auto x = hyperboloid_of(zs[j]);
        const auto y = hyperboloid_of((a * zs[j] + b) / (c * zs[j] + d));
        for (int i = 0; i < 3; ++i) {
            X[3 * i + j] = x[static_cast<std::size_t>(i)];
            Y[3 * i + j] = y[static_cast<std::size_t>(i)];
        }
    }
    return Isometry(mat_mul(Y, mat_inverse(X)));
}

DirichletDomain dirichlet_domain(const std::vector<Isometry>& generators, KleinPoint basepoint, int max_word) {
    if (!in_open_disk(basepoint)) throw DomainError("basepoint outside the disk");
    FreeGroupEmbedding emb{generators, {}, basepoint, {}};
    const auto words = ball_words(static_cast<int>(generators.size()), max_word);
    std::vector<Labeled> poly{{{-1, -1}, -1}, {{1, -1}, -1}, {{1, 1}, -1}, {{-1, 1}, -1}};
    const double sp = std::sqrt(1.0 - norm2(basepoint));
    for (std::size_t k = 1; k < words.size(); ++k) {
        const KleinPoint q = emb.element(words[k])(basepoint);
        const double sq = std::sqrt(1.0 - norm2(q));
        // d(x, p) <= d(x, q)  <=>  (1 - x.p)/sp <= (1 - x.q)/sq
        const KleinPoint n = (1.0 / sq) * q - (1.0 / sp) * basepoint;
        poly = clip(poly, n, 1.0 / sq - 1.0 / sp, static_cast<int>(k));
    }
    for (auto& v : poly) {
        const double r = std::sqrt(norm2(v.p));
        if (r > 1.0 + 1e-6) throw NumericError("domain not closed by words of the given length");
        if (r > 1.0 - 1e-6) v.p = (1.0 / r) * v.p;
    }
    std::vector<Labeled> merged;
    for (const auto& v : poly) {
        if (!merged.empty() && norm2(v.p - merged.back().p) < 1e-12) {
            merged.back().label = v.label;
            continue;
        }
        merged.push_back(v);
    }
    while (merged.size() > 1 && norm2(merged.front().p - merged.back().p) < 1e-12) {
        merged.back().label = merged.front().label;
        merged.front() = merged.back();
        merged.pop_back();
    }
    DirichletDomain out;
    for (const auto& v : merged) {
        if (v.label < 0) throw NumericError("domain not closed by words of the given length");
        out.domain.vertices.push_back(v.p);
        out.side_pairings.push_back(words[static_cast<std::size_t>(v.label)]);
    }
    return out;
}

FreeGroupEmbedding default_free_group(KleinPoint basepoint) {
    FreeGroupEmbedding emb;
    emb.generators = {isometry_from_sl2(1, 2, 0, 1), isometry_from_sl2(1, 0, 2, 1)};
    emb.basepoint = basepoint;
    auto dom = dirichlet_domain(emb.generators, basepoint);
    emb.domain = std::move(dom.domain);
    emb.side_pairings = std::move(dom.side_pairings);
    return emb;
}

bool relation_free(const FreeGroupEmbedding& emb, int max_word, double tol) {
    const auto words = ball_words(static_cast<int>(emb.generators.size()), max_word);
    for (std::size_t k = 1; k < words.size(); ++k)
        if (klein_distance(emb.element(words[k])(emb.basepoint), emb.basepoint) < tol) return false;
    return true;
}

PackingColoring encode(const std::vector<KleinPoint>& centers, double radius, const FreeGroupEmbedding& emb,
                       int window_words) {
    if (window_words < 0) throw DomainError("window must be nonnegative");
    PackingColoring c{emb, radius, window_words, {}};
    for (const auto& f : ball_words(static_cast<int>(emb.generators.size()), window_words)) {
        const Isometry finv = emb.element(f).inverse();
        auto& vals = c.values[f];
        for (const auto& p : centers) {
            const KleinPoint z = finv(p);
            const double side = emb.domain.min_edge_side(z);
            if (std::abs(side) < 1e-9) throw DomainError("center on the boundary of a translate of the domain");
            if (side > 0.0) vals.push_back(z);
        }
    }
    return c;
}

WindowPacking decode(const PackingColoring& c) {
    WindowPacking w{c.radius, 0.0, {}};
    for (const auto& [f, vals] : c.values) {
        const Isometry g = c.embedding.element(f);
        for (const auto& z : vals) {
            const KleinPoint p = g(z);
            w.centers.push_back(p);
            w.window = std::max(w.window, klein_distance({}, p));
        }
    }
    if (min_separation(w.centers) < 2.0 * c.radius - 1e-9) throw ValidationError("decoded disks overlap");
    return w;
}

PackingColoring translate(const PackingColoring& c, const ReducedWord& g) {
    PackingColoring out{c.embedding, c.radius, c.window, {}};
    for (const auto& [f, vals] : c.values) {
        ReducedWord gf = g * f;
        if (static_cast<int>(gf.length()) <= c.window) out.values[std::move(gf)] = vals;
    }
    return out;
}

namespace {

std::vector<std::pair<long, long>> cell_key(const Discretization& d, const std::vector<KleinPoint>& values) {
    const double t = std::tanh(d.x);
    const double h = 0.9 * d.delta * (1.0 - t * t) / std::sqrt(2.0);
    const Isometry to_center = Isometry::translation_to(d.center).inverse();
    std::vector<std::pair<long, long>> key;
    for (const auto& v : values) {
        const KleinPoint z = to_center(v);
        key.push_back({std::lround(z.x / h), std::lround(z.y / h)});
    }
    std::sort(key.begin(), key.end());
    return key;
}

}  // namespace

int Discretization::classify(const std::vector<KleinPoint>& values) {
    if (!(x > 0.0) || !(delta > 0.0)) throw DomainError("discretization needs x > 0 and delta > 0");
    auto key = cell_key(*this, values);
    auto it = keys.find(key);
    if (it != keys.end()) return it->second;
    const int sym = static_cast<int>(cells.size());
    keys.emplace(std::move(key), sym);
    cells.push_back(values);
    return sym;
}

int Discretization::find(const std::vector<KleinPoint>& values) const {
    auto it = keys.find(cell_key(*this, values));
    return it == keys.end() ? -1 : it->second;
}

DiscreteColoring discretize(const PackingColoring& c, Discretization& disc) {
    DiscreteColoring out;
    for (const auto& [f, vals] : c.values) {
        std::vector<KleinPoint> kept;
        for (const auto& v : vals)
            if (klein_distance(disc.center, v) <= disc.x) kept.push_back(v);
        out.symbols[f] = disc.classify(kept);
    }
    return out;
}

double hausdorff_distance(const std::vector<KleinPoint>& a, const std::vector<KleinPoint>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<KleinPoint>& u, const std::vector<KleinPoint>& v) {
        double worst = 0.0;
        for (const auto& p : u) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : v) best = std::min(best, klein_distance(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

Isometry sample_group_fiber(const FreeGroupEmbedding& emb, Rng& rng) {
    KleinPoint y = sample_point(emb.domain, rng);
    // Cusp tips beyond kCuspCutoff are resampled: there 1-|y|^2 falls below
    // ~1e-10 and Klein arithmetic no longer yields Lorentz matrices.
    while (klein_distance(emb.basepoint, y) > kCuspCutoff) y = sample_point(emb.domain, rng);
    return Isometry::translation_to(y) * Isometry::rotation(rng.uniform(0.0, 2.0 * kPi));
}

Isometry sample_group_fiber(const FreeGroupEmbedding& emb, std::uint64_t seed) {
    Rng rng(seed);
    return sample_group_fiber(emb, rng);
}

PeriodicFamily::PeriodicFamily(PeriodicPacking p, double reach) : packing_(std::move(p)), locator_(packing_, reach) {}

std::vector<KleinPoint> PeriodicFamily::centers_near(KleinPoint q, double dist) const {
    return locator_.points_near(q, dist);
}

Isometry PeriodicFamily::sample_member(Rng& rng) const {
    const KleinPoint y = sample_point(packing_.domain, rng);
    return Isometry::translation_to(y) * Isometry::rotation(2.0 * kPi * rng.uniform());
}

FreeOrbitFamily::FreeOrbitFamily(FreeGroupEmbedding emb, std::vector<KleinPoint> seeds, double radius)
    : emb_(std::move(emb)), seeds_(std::move(seeds)), radius_(radius) {
    if (emb_.side_pairings.size() != emb_.domain.size())
        throw DomainError("embedding lacks side pairings");
    for (auto s : seeds_) reach_ = std::max(reach_, klein_distance(emb_.basepoint, s));
}

namespace {

struct StartTile {
    ReducedWord word;
    Isometry element;
    KleinPoint local;
};

// Walks toward the tile containing q: crossing a side that q violates moves
// the basepoint image closer to q, which holds for Dirichlet domains. The
// walk stops when rounding makes a crossing no longer pay off.
StartTile start_tile(const FreeGroupEmbedding& emb, KleinPoint q) {
    if (emb.side_pairings.size() != emb.domain.size()) throw DomainError("embedding lacks side pairings");
    StartTile t{{}, Isometry{}, q};
    double current = klein_distance(q, emb.basepoint);
    for (int guard = 0; guard < 100000; ++guard) {
        std::size_t worst = 0;
        double side = 0.0;
        for (std::size_t i = 0; i < emb.domain.size(); ++i) {
            const double e = emb.domain.edge_side(i, t.local);
            if (e < side) {
                side = e;
                worst = i;
            }
        }
        if (side >= 0.0) break;
        const Isometry g = t.element * emb.element(emb.side_pairings[worst]);
        const KleinPoint local = g.inverse()(q);
        if (!in_open_disk(local)) break;
        const double d = klein_distance(local, emb.basepoint);
        if (!(d < current)) break;
        t.word = t.word * emb.side_pairings[worst];
        t.element = g;
        t.local = local;
        current = d;
    }
    return t;
}

// Breadth-first walk over side pairings from the start tile, visiting tiles
// whose local image of q passes `keep`. Words stay relative to the start tile,
// where they are short.
template <class Keep>
void walk_tiles(const FreeGroupEmbedding& emb, KleinPoint q, const StartTile& start, Keep&& keep,
                const std::function<void(const ReducedWord&, const Isometry&)>& visit) {
    std::set<ReducedWord> seen{ReducedWord{}};
    std::deque<std::pair<ReducedWord, Isometry>> queue{{ReducedWord{}, start.element}};
    while (!queue.empty()) {
        auto [u, g] = std::move(queue.front());
        queue.pop_front();
        const KleinPoint local = g.inverse()(q);
        // Deep in a cusp the image can round onto the circle; such tiles are
        // far beyond any query radius.
        if (!in_open_disk(local)) continue;
        const int k = keep(local);
        if (k < 0) continue;
        if (k > 0) visit(start.word * u, g);
        for (const auto& step : emb.side_pairings) {
            ReducedWord next = u * step;
            if (!seen.insert(next).second) continue;
            if (seen.size() > 200000) throw NumericError("too many tiles near the query point");
            queue.push_back({std::move(next), g * emb.element(step)});
        }
    }
}

}  // namespace

void for_each_tile_near(const FreeGroupEmbedding& emb, KleinPoint q, double dist,
                        const std::function<void(const ReducedWord&, const Isometry&)>& visit) {
    const StartTile start = start_tile(emb, q);
    // Tiles meeting B(q, rho) are connected through shared sides and include
    // the start tile.
    const double rho = dist + point_polygon_distance(start.local, emb.domain);
    walk_tiles(emb, q, start, [&](KleinPoint local) {
        const double d = point_polygon_distance(local, emb.domain);
        return d > rho + 1e-9 ? -1 : (d <= dist ? 1 : 0);
    }, visit);
}

void for_each_site_near(const FreeGroupEmbedding& emb, KleinPoint q, double dist,
                        const std::function<void(const ReducedWord&, const Isometry&)>& visit) {
    const StartTile start = start_tile(emb, q);
    // Tiles are Voronoi cells of the basepoint orbit. Every cell crossed by the
    // geodesic from q to a site within dist has its own site within dist, so
    // these cells are connected and contain the cell of q when nonempty.
    walk_tiles(emb, q, start, [&](KleinPoint local) {
        return klein_distance(local, emb.basepoint) <= dist + 1e-9 ? 1 : -1;
    }, visit);
}

std::vector<KleinPoint> FreeOrbitFamily::centers_near(KleinPoint q, double dist) const {
    std::vector<KleinPoint> out;
    for_each_site_near(emb_, q, reach_ + dist, [&](const ReducedWord&, const Isometry& g) {
        // Compare in the tile's own frame: far images may not be representable.
        const KleinPoint local = g.inverse()(q);
        for (const auto& s : seeds_)
            if (klein_distance(local, s) <= dist) out.push_back(g(s));
    });
    return out;
}

PeriodicColoringFamily::PeriodicColoringFamily(FreeGroupEmbedding emb, PeriodicColoring coloring,
                                               std::vector<std::vector<KleinPoint>> cells, double radius)
    : emb_(std::move(emb)), coloring_(std::move(coloring)), cells_(std::move(cells)), radius_(radius) {
    if (static_cast<std::size_t>(coloring_.quotient.n) != emb_.generators.size())
        throw DomainError("coloring rank differs from the embedding rank");
    for (const auto& lab : coloring_.quotient.labels)
        if (lab.values.empty() || lab.values[0] < 0 || static_cast<std::size_t>(lab.values[0]) >= cells_.size())
            throw DomainError("coloring symbol without a cell");
    for (const auto& cell : cells_)
        for (auto p : cell) reach_ = std::max(reach_, klein_distance(emb_.basepoint, p));
}

std::vector<KleinPoint> PeriodicColoringFamily::centers_near(KleinPoint q, double dist) const {
    std::vector<KleinPoint> out;
    for_each_site_near(emb_, q, reach_ + dist, [&](const ReducedWord& w, const Isometry& g) {
        const int sym = evaluate_lift(coloring_, w);
        const KleinPoint local = g.inverse()(q);
        for (const auto& s : cells_[static_cast<std::size_t>(sym)])
            if (klein_distance(local, s) <= dist) out.push_back(g(s));
    });
    return out;
}

double origin_coverage(const std::vector<KleinPoint>& centers, double r) {
    for (const auto& c : centers)
        if (klein_distance({}, c) <= r) return 1.0;
    return 0.0;
}

McEstimate average_functional(const PackingFunctional& f, const PackingFamily& family,
                              const FreeGroupEmbedding& emb, const AverageOptions& opt) {
    const double W = opt.window > 0.0 ? opt.window : family.radius();
    const double r = family.radius();
    return run_streams_scalar(opt.samples, opt.seed, [&](Rng& rng) {
        const Isometry g = sample_group_fiber(emb, rng);
        const Isometry m = opt.post * g.inverse() * family.sample_member(rng);
        const KleinPoint q = m.inverse()({});
        std::vector<KleinPoint> pts = family.centers_near(q, W);
        for (auto& p : pts) p = m(p);
        return f(pts, r);
    });
}

namespace {

double z_score(const McEstimate& a, const McEstimate& b) {
    const double se = std::hypot(a.stderr_, b.stderr_);
    const double diff = b.mean - a.mean;
    if (se > 0.0) return diff / se;
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

}  // namespace

InvarianceReport invariance_test(const PackingFamily& family, const FreeGroupEmbedding& emb,
                                 const std::vector<Isometry>& hs, std::size_t samples, std::uint64_t seed) {
    InvarianceReport rep;
    for (std::size_t j = 0; j < hs.size(); ++j) {
        AverageOptions a{samples, derive_seed(seed, 2 * j), 0.0, Isometry{}};
        AverageOptions b{samples, derive_seed(seed, 2 * j + 1), 0.0, hs[j]};
        rep.before.push_back(average_functional(origin_coverage, family, emb, a));
        rep.after.push_back(average_functional(origin_coverage, family, emb, b));
        rep.z_scores.push_back(z_score(rep.before.back(), rep.after.back()));
        if (!(std::abs(rep.z_scores.back()) <= 4.0)) rep.passed = false;
    }
    return rep;
}

InvarianceReport invariance_test_unaveraged(const PackingFamily& family, const std::vector<Isometry>& hs) {
    InvarianceReport rep;
    const double r = family.radius();
    const McEstimate before{origin_coverage(family.centers_near({}, r), r), 0.0, 1};
    for (const auto& h : hs) {
        std::vector<KleinPoint> pts = family.centers_near(h.inverse()({}), r);
        for (auto& p : pts) p = h(p);
        const McEstimate after{origin_coverage(pts, r), 0.0, 1};
        rep.before.push_back(before);
        rep.after.push_back(after);
        rep.z_scores.push_back(z_score(before, after));
        if (!(std::abs(rep.z_scores.back()) <= 4.0)) rep.passed = false;
    }
    return rep;
}

}  // namespace hypack
