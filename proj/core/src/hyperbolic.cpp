#include "hypack/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypack/errors.hpp"

namespace hypack {

namespace {

void require_in_disk(KleinPoint p) {
    if (!(norm2(p) < 1.0))
        throw DomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") is not inside the unit disk");
}

}  // namespace

double klein_distance(KleinPoint p, KleinPoint q) {
    require_in_disk(p);
    require_in_disk(q);
    const KleinPoint d = q - p;
    const double e2 = norm2(d);
    const double c = cross(p, d);  // p x q == p x (q - p)
    const double num = std::max(0.0, e2 - c * c);
    const double den = (1.0 - norm2(p)) * (1.0 - norm2(q));
    return std::asinh(std::sqrt(num / den));
}

double klein_vector_length(KleinPoint x, KleinPoint v) {
    require_in_disk(x);
    const double s = 1.0 - norm2(x);
    const double xv = dot(x, v);
    return std::sqrt(s * norm2(v) + xv * xv) / s;
}

KleinPoint polar_point(double d, double theta) {
    const double t = std::tanh(d);
    return {t * std::cos(theta), t * std::sin(theta)};
}

Isometry Isometry::rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return Isometry({c, -s, 0, s, c, 0, 0, 0, 1});
}

Isometry Isometry::boost_x(double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    return Isometry({ch, 0, sh, 0, 1, 0, sh, 0, ch});
}

Isometry Isometry::translation_to(KleinPoint p) {
    require_in_disk(p);
    const double gamma = 1.0 / std::sqrt(1.0 - norm2(p));
    const double ux = gamma * p.x, uy = gamma * p.y;
    // (t - 1)/|u|^2 == gamma^2/(gamma + 1) avoids the 0/0 at the origin.
    const double f = gamma * gamma / (gamma + 1.0);
    return Isometry({1 + f * p.x * p.x, f * p.x * p.y, ux,
                     f * p.x * p.y, 1 + f * p.y * p.y, uy,
                     ux, uy, gamma});
}

Isometry Isometry::rotation_about(KleinPoint center, double theta) {
    const Isometry t = translation_to(center);
    return t * rotation(theta) * t.inverse();
}

KleinPoint Isometry::apply(KleinPoint p) const {
    const double w0 = m_[0] * p.x + m_[1] * p.y + m_[2];
    const double w1 = m_[3] * p.x + m_[4] * p.y + m_[5];
    const double w2 = m_[6] * p.x + m_[7] * p.y + m_[8];
    return {w0 / w2, w1 / w2};
}

Isometry Isometry::inverse() const {
    // M^{-1} = J M^T J with J = diag(1, 1, -1).
    const auto& m = m_;
    return Isometry({m[0], m[3], -m[6],
                     m[1], m[4], -m[7],
                     -m[2], -m[5], m[8]});
}

Isometry operator*(const Isometry& a, const Isometry& b) {
    Isometry::Matrix r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += a(i, k) * b(k, j);
            r[static_cast<std::size_t>(3 * i + j)] = acc;
        }
    return Isometry(r);
}

double Isometry::lorentz_defect() const {
    static constexpr double J[3] = {1, 1, -1};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += (*this)(k, i) * J[k] * (*this)(k, j);
            const double target = (i == j) ? J[i] : 0.0;
            worst = std::max(worst, std::abs(acc - target) / std::max(1.0, std::abs((*this)(2, 2))));
        }
    return worst;
}

double Isometry::determinant() const {
    const auto& m = m_;
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool Isometry::is_valid(double tol) const {
    const double scale = std::max(1.0, std::abs(m_[8]));
    return lorentz_defect() < tol * scale && std::abs(determinant() - 1.0) < tol * scale * scale &&
           m_[8] > 0.0;
}

double Isometry::distance_to(const Isometry& other) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(m_[i] - other.m_[i]));
    return worst;
}

bool Polygon::is_ideal(std::size_t i) const { return norm2(vertices[i]) >= 1.0 - 1e-12; }

bool Polygon::has_ideal_vertex() const {
    for (std::size_t i = 0; i < size(); ++i)
        if (is_ideal(i)) return true;
    return false;
}

double Polygon::edge_side(std::size_t i, KleinPoint p) const {
    const KleinPoint a = vertices[i];
    const KleinPoint b = vertices[(i + 1) % size()];
    const KleinPoint e = b - a;
    return cross(e, p - a) / std::sqrt(norm2(e));
}

double Polygon::min_edge_side(KleinPoint p) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) m = std::min(m, edge_side(i, p));
    return m;
}

bool Polygon::contains(KleinPoint p, double tol) const { return min_edge_side(p) >= -tol; }

Polygon Polygon::transformed(const Isometry& g) const {
    Polygon out;
    out.vertices.reserve(size());
    for (auto v : vertices) out.vertices.push_back(g.apply(v));
    return out;
}

double interior_angle(const Polygon& poly, std::size_t i) {
    if (poly.is_ideal(i)) return 0.0;
    const std::size_t n = poly.size();
    const KleinPoint x = poly.vertices[i];
    const KleinPoint u = poly.vertices[(i + 1) % n] - x;
    const KleinPoint w = poly.vertices[(i + n - 1) % n] - x;
    // Klein metric tensor at x is proportional to (1-|x|^2) I + x x^T.
    const double s = 1.0 - norm2(x);
    auto g = [&](KleinPoint a, KleinPoint b) { return s * dot(a, b) + dot(x, a) * dot(x, b); };
    const double c = g(u, w) / std::sqrt(g(u, u) * g(w, w));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double polygon_area(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) throw DomainError("polygon needs at least three vertices");
    double twice_euclid = 0.0;
    for (std::size_t i = 0; i < n; ++i) twice_euclid += cross(poly.vertices[i], poly.vertices[(i + 1) % n]);
    if (!(twice_euclid > 1e-14)) throw DomainError("degenerate or clockwise polygon");
    for (const auto& v : poly.vertices)
        if (norm2(v) > 1.0 + 1e-12) throw DomainError("polygon vertex outside the closed disk");
    double angle_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) angle_sum += interior_angle(poly, i);
    return static_cast<double>(n - 2) * kPi - angle_sum;
}

bool is_convex(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const KleinPoint a = poly.vertices[i];
        const KleinPoint b = poly.vertices[(i + 1) % n];
        const KleinPoint c = poly.vertices[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) return false;
    }
    return true;
}

double point_polygon_distance(KleinPoint q, const Polygon& poly) {
    if (poly.contains(q, 0.0)) return 0.0;
    // Move q to the origin; the nearest point of a chord to the origin is the
    // Euclidean nearest point, and d(0, x) = atanh|x|.
    const Isometry back = Isometry::translation_to(q).inverse();
    const std::size_t n = poly.size();
    std::vector<KleinPoint> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = back.apply(poly.vertices[i]);
        if (poly.is_ideal(i)) v[i] = (1.0 / std::sqrt(norm2(v[i]))) * v[i];
    }
    double best = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const KleinPoint a = v[i], e = v[(i + 1) % n] - v[i];
        const double t = std::clamp(-dot(a, e) / norm2(e), 0.0, 1.0);
        best = std::min(best, std::sqrt(norm2(a + t * e)));
    }
    if (best >= 1.0) return std::numeric_limits<double>::infinity();
    return std::atanh(best);
}

double polygon_max_radius(const Polygon& poly) {
    double m = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly.is_ideal(i)) return std::numeric_limits<double>::infinity();
        m = std::max(m, klein_distance({}, poly.vertices[i]));
    }
    return m;
}

PointIndex::PointIndex(double tol) : tol_(tol), cell_(std::max(1e-6, 4.0 * tol)) {}

std::size_t PointIndex::CellHash::operator()(const std::pair<long long, long long>& c) const noexcept {
    return std::hash<long long>{}(c.first * 73856093LL ^ c.second * 19349663LL);
}

std::pair<long long, long long> PointIndex::cell_of(KleinPoint p) const {
    return {static_cast<long long>(std::floor(p.x / cell_)), static_cast<long long>(std::floor(p.y / cell_))};
}

long PointIndex::find(KleinPoint p) const {
    const auto [cx, cy] = cell_of(p);
    for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy) {
            auto range = cells_.equal_range({cx + dx, cy + dy});
            for (auto it = range.first; it != range.second; ++it)
                if (klein_distance(points_[static_cast<std::size_t>(it->second)], p) < tol_) return it->second;
        }
    return -1;
}

std::pair<long, bool> PointIndex::insert(KleinPoint p) {
    if (long idx = find(p); idx >= 0) return {idx, false};
    const long idx = static_cast<long>(points_.size());
    points_.push_back(p);
    cells_.emplace(cell_of(p), idx);
    return {idx, true};
}

}  // namespace hypack
