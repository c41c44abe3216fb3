#pragma once

// Test fixtures and oracles computed without the library's geometry code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "hypack/errors.hpp"
#include "hypack/sampling.hpp"
#include "hypack/shift.hpp"
#include "hypack/transport.hpp"

namespace fixtures {

using hypack::KleinPoint;

// Poincare-disk distance of the Klein points p, q: 2 atanh |(z-w)/(1-conj(w)z)|.
inline double poincare_distance(KleinPoint p, KleinPoint q) {
    auto to_disk = [](KleinPoint k) {
        const double s = 1.0 + std::sqrt(1.0 - k.x * k.x - k.y * k.y);
        return std::complex<double>(k.x / s, k.y / s);
    };
    const std::complex<double> z = to_disk(p), w = to_disk(q);
    return 2.0 * std::atanh(std::abs((z - w) / (1.0 - std::conj(w) * z)));
}

// Area of a convex Klein polygon by integrating (1-x^2-y^2)^(-3/2) over a fan
// from the first vertex with Gauss-Legendre in both directions.
inline double integrated_area(const std::vector<KleinPoint>& v, int nodes = 64) {
    std::vector<double> x(static_cast<std::size_t>(nodes)), w(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (nodes + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= nodes; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = nodes * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) {
                w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
                break;
            }
        }
        x[static_cast<std::size_t>(i)] = t;
    }
    double total = 0.0;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        const KleinPoint a = v[0], b = v[k], c = v[k + 1];
        const double jac = std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
        // Duffy map of the unit square onto the triangle abc.
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double u = 0.5 * (x[i] + 1.0), s = 0.5 * (x[j] + 1.0);
                const double px = a.x + u * ((b.x - a.x) + s * (c.x - b.x));
                const double py = a.y + u * ((b.y - a.y) + s * (c.y - b.y));
                total += 0.25 * w[i] * w[j] * u * jac * std::pow(1.0 - px * px - py * py, -1.5);
            }
    }
    return total;
}

// Closed form 6(cosh r_k - 1)/(k - 6) of the tight density.
inline double tight_density_formula(int k) {
    const double c = std::cos(2.0 * M_PI / k);
    const double r = 0.5 * std::acosh(c / (1.0 - c));
    return 6.0 * (std::cosh(r) - 1.0) / (k - 6);
}

// Frozen value of tight_density_formula(7), from 30-digit arithmetic.
inline constexpr double kTightDensity7 = 0.9142946128874595;

// Metric dilation of x -> kx at x along v, by central differences of the
// Poincare distance.
inline double fd_dilation(double k, KleinPoint x, KleinPoint v, double h = 1e-6) {
    const KleinPoint a{x.x - h * v.x, x.y - h * v.y}, b{x.x + h * v.x, x.y + h * v.y};
    return poincare_distance({k * a.x, k * a.y}, {k * b.x, k * b.y}) / poincare_distance(a, b);
}

// Product measure weight of a pattern.
inline mpq_class bernoulli_weight(const std::vector<mpq_class>& p, const hypack::Pattern& z) {
    mpq_class w = 1;
    for (int v : z.values) w *= p[static_cast<std::size_t>(v)];
    return w;
}

// Stationary binary chain with no three consecutive ones, as r = 1 weights
// on F_1. Ball order is (x_0, x_1, x_-1); the edge target is (x_1, x_2, x_0).
inline hypack::CylinderWeights no_three_ones() {
    auto pair_w = [](int a, int b) { return a == 1 && b == 1 ? mpq_class(1, 7) : mpq_class(2, 7); };
    auto step = [](int a, int b, int c) {
        if (a == 1 && b == 1) return c == 0 ? mpq_class(1) : mpq_class(0);
        return mpq_class(1, 2);
    };
    hypack::CylinderWeights w;
    w.n = 1;
    w.r = 1;
    w.K = 2;
    for (int m = 0; m < 2; ++m)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const mpq_class vw = pair_w(m, a) * step(m, a, b);
                if (sgn(vw) > 0) w.vertex_w[hypack::Pattern{{a, b, m}}] = vw;
                for (int c = 0; c < 2; ++c)
                    w.edge_w[hypack::EdgePattern{1, hypack::Pattern{{a, b, m}}, hypack::Pattern{{b, c, a}}}] =
                        vw * step(a, b, c);
            }
    return w;
}

inline std::map<hypack::EdgePattern, mpq_class> positive_edges(const hypack::CylinderWeights& w) {
    std::map<hypack::EdgePattern, mpq_class> out;
    for (const auto& [e, x] : w.edge_w)
        if (sgn(x) > 0) out[e] = x;
    return out;
}

// Multiset equality up to tol (Euclidean, coordinates near the origin).
inline bool same_points(std::vector<KleinPoint> a, std::vector<KleinPoint> b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (auto p : a) {
        bool hit = false;
        for (std::size_t j = 0; j < b.size() && !hit; ++j)
            if (!used[j] && std::hypot(p.x - b[j].x, p.y - b[j].y) <= tol) used[j] = hit = true;
        if (!hit) return false;
    }
    return true;
}

inline hypack::ReducedWord random_word(hypack::Rng& rng, int n, int len) {
    hypack::ReducedWord w;
    while (static_cast<int>(w.length()) < len) {
        int letter = 1 + static_cast<int>(rng.uniform() * n);
        if (rng.uniform() < 0.5) letter = -letter;
        if (!w.letters.empty() && w.letters.back() == -letter) continue;
        w.letters.push_back(letter);
    }
    return w;
}

// An F-orbit packing of one point and an isometry moving one of its centers
// onto the origin, which the orbit leaves uncovered.
struct CornerOrbit {
    KleinPoint seed;
    double radius = 0.0;
    hypack::Isometry probe;
};

inline CornerOrbit corner_orbit(const hypack::FreeGroupEmbedding& emb) {
    // Toward the first vertex of the domain, 1.3 from the origin.
    const KleinPoint v = emb.domain.vertices[0];
    const KleinPoint seed = hypack::polar_point(1.3, std::atan2(v.y, v.x) + 0.05);
    if (!emb.domain.contains(seed, 0.0)) throw hypack::DomainError("corner seed outside the domain");
    double nearest = 1e300, to_origin = 1e300;
    for (const auto& w : hypack::ball_words(static_cast<int>(emb.generators.size()), 4)) {
        const KleinPoint img = emb.element(w)(seed);
        to_origin = std::min(to_origin, poincare_distance(img, {}));
        if (!w.letters.empty()) nearest = std::min(nearest, poincare_distance(img, seed));
    }
    const double r = std::min(0.45 * nearest, 0.9 * to_origin);
    return {seed, r, hypack::Isometry::translation_to(seed).inverse()};
}

}  // namespace fixtures
