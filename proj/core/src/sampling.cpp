#include "hypack/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypack/errors.hpp"

namespace hypack {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

namespace {

double triangle_area(KleinPoint a, KleinPoint b, KleinPoint c) {
    Polygon t{{a, b, c}};
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) sum += interior_angle(t, i);
    return std::max(0.0, kPi - sum);
}

KleinPoint snap_ideal(KleinPoint p, bool ideal) {
    if (!ideal) return p;
    const double n = std::sqrt(norm2(p));
    return {p.x / n, p.y / n};
}

KleinPoint sample_rejection(const Polygon& poly, double max_norm2, Rng& rng) {
    double lo_x = 1, hi_x = -1, lo_y = 1, hi_y = -1;
    for (auto v : poly.vertices) {
        lo_x = std::min(lo_x, v.x);
        hi_x = std::max(hi_x, v.x);
        lo_y = std::min(lo_y, v.y);
        hi_y = std::max(hi_y, v.y);
    }
    const double peak = std::pow(1.0 - max_norm2, -1.5);
    for (;;) {
        const KleinPoint p{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
        if (!poly.contains(p, 0.0)) continue;
        if (rng.uniform() * peak <= std::pow(1.0 - norm2(p), -1.5)) return p;
    }
}

// Uniform point in the triangle (0, a, b), a and b counterclockwise, either
// possibly ideal. The angular CDF is the area of (0, a, q) as q slides along
// the edge; given the direction, the radial law is sinh(rho) on [0, D].
KleinPoint sample_sector(KleinPoint a, KleinPoint b, bool a_ideal, bool b_ideal, Rng& rng) {
    const double total = triangle_area({}, a, b);
    const double target = rng.uniform() * total;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        const KleinPoint q = a + mid * (b - a);
        if (triangle_area({}, a, q) < target) lo = mid;
        else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    // Stay off ideal endpoints so the radial bound is finite.
    if (a_ideal) t = std::max(t, 1e-15);
    if (b_ideal) t = std::min(t, 1.0 - 1e-15);
    const KleinPoint q = a + t * (b - a);
    const double q2 = std::min(norm2(q), 1.0 - 1e-16);
    const double cosh_d = 1.0 / std::sqrt(1.0 - q2);
    const double rho = std::acosh(1.0 + rng.uniform() * (cosh_d - 1.0));
    const double len = std::sqrt(q2);
    if (len == 0.0) return {};
    const double r = std::tanh(rho) / len;
    return {r * q.x, r * q.y};
}

KleinPoint sample_fan(const Polygon& poly, Rng& rng) {
    const std::size_t n = poly.size();
    KleinPoint c{};
    for (auto v : poly.vertices) c = c + v;
    c = (1.0 / static_cast<double>(n)) * c;
    const Isometry to_c = Isometry::translation_to(c);
    const Isometry from_c = to_c.inverse();
    std::vector<KleinPoint> local(n);
    std::vector<bool> ideal(n);
    for (std::size_t i = 0; i < n; ++i) {
        ideal[i] = poly.is_ideal(i);
        local[i] = snap_ideal(from_c.apply(poly.vertices[i]), ideal[i]);
    }
    std::vector<double> cum(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += triangle_area({}, local[i], local[(i + 1) % n]);
        cum[i] = acc;
    }
    const double u = rng.uniform() * acc;
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    const std::size_t i = std::min(k, n - 1);
    const std::size_t j = (i + 1) % n;
    return to_c.apply(sample_sector(local[i], local[j], ideal[i], ideal[j], rng));
}

}  // namespace

KleinPoint sample_point(const Polygon& poly, Rng& rng) {
    if (poly.size() < 3) throw DomainError("sample_point: polygon needs at least three vertices");
    double max_norm2 = 0.0;
    for (auto v : poly.vertices) max_norm2 = std::max(max_norm2, norm2(v));
    const double t2 = std::tanh(2.0);
    if (!poly.has_ideal_vertex() && max_norm2 <= t2 * t2) return sample_rejection(poly, max_norm2, rng);
    return sample_fan(poly, rng);
}

KleinPoint sample_point(const Polygon& poly, std::uint64_t seed) {
    Rng rng(seed);
    return sample_point(poly, rng);
}

Isometry random_isometry(Rng& rng, double max_displacement) {
    const double d = rng.uniform(0.0, max_displacement);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double psi = rng.uniform(0.0, 2.0 * kPi);
    return Isometry::translation_to(polar_point(d, phi)) * Isometry::rotation(psi);
}

}  // namespace hypack
