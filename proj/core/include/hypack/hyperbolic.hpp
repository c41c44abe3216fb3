#pragma once

// Klein (projective) disk model of the hyperbolic plane.
//
// Points are Euclidean coordinates in the open unit disk; geodesics are
// Euclidean chords. Orientation-preserving isometries are 3x3 Lorentz
// matrices (preserving diag(1,1,-1)) acting on homogeneous coordinates
// (x, y, 1).

#include <array>
#include <cstddef>
#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypack {

inline constexpr double kPi = std::numbers::pi;

struct KleinPoint {
    double x = 0.0;
    double y = 0.0;

    friend KleinPoint operator+(KleinPoint a, KleinPoint b) { return {a.x + b.x, a.y + b.y}; }
    friend KleinPoint operator-(KleinPoint a, KleinPoint b) { return {a.x - b.x, a.y - b.y}; }
    friend KleinPoint operator*(double k, KleinPoint a) { return {k * a.x, k * a.y}; }
    friend bool operator==(KleinPoint, KleinPoint) = default;
};

inline double dot(KleinPoint a, KleinPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(KleinPoint a, KleinPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm2(KleinPoint a) { return dot(a, a); }

inline bool in_open_disk(KleinPoint p) { return norm2(p) < 1.0; }

/// Hyperbolic distance. Uses the sinh form
///   sinh^2 d = (|p-q|^2 - (p x q)^2) / ((1-|p|^2)(1-|q|^2)),
/// which is the closed-form integral of the Klein arclength along the chord
/// and stays accurate for nearly coincident points.
/// Throws DomainError if either point is not in the open disk.
double klein_distance(KleinPoint p, KleinPoint q);

/// Length of tangent vector v at x under the Klein metric.
double klein_vector_length(KleinPoint x, KleinPoint v);

/// Point at hyperbolic distance d from the origin in direction angle theta.
KleinPoint polar_point(double d, double theta);

class Isometry {
public:
    using Matrix = std::array<double, 9>;  // row-major

    Isometry() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
    explicit Isometry(const Matrix& m) : m_(m) {}

    static Isometry identity() { return Isometry{}; }
    /// Euclidean rotation about the origin.
    static Isometry rotation(double theta);
    /// Boost along the x axis; maps the origin to (tanh t, 0).
    static Isometry boost_x(double rapidity);
    /// Pure translation along the geodesic through the origin and p; maps 0 to p.
    static Isometry translation_to(KleinPoint p);
    /// Rotation by theta about an arbitrary center.
    static Isometry rotation_about(KleinPoint center, double theta);

    KleinPoint apply(KleinPoint p) const;
    KleinPoint operator()(KleinPoint p) const { return apply(p); }
    Isometry inverse() const;

    const Matrix& matrix() const { return m_; }
    double operator()(int row, int col) const { return m_[static_cast<std::size_t>(3 * row + col)]; }

    /// Max deviation of M^T J M from J.
    double lorentz_defect() const;
    double determinant() const;
    /// Lorentz within tol, det +1, preserves the upper sheet.
    bool is_valid(double tol = 1e-10) const;
    /// Max entrywise difference.
    double distance_to(const Isometry& other) const;

    friend Isometry operator*(const Isometry& a, const Isometry& b);

private:
    Matrix m_;
};

inline Isometry compose(const Isometry& g, const Isometry& h) { return g * h; }
inline Isometry inverse(const Isometry& g) { return g.inverse(); }
inline KleinPoint apply(const Isometry& g, KleinPoint p) { return g.apply(p); }

/// Convex polygon, counterclockwise. Vertices lie in the closed disk; a vertex
/// on the unit circle is ideal (only fundamental domains of cusped groups use
/// those).
struct Polygon {
    std::vector<KleinPoint> vertices;

    std::size_t size() const { return vertices.size(); }
    bool is_ideal(std::size_t i) const;
    bool has_ideal_vertex() const;

    /// Euclidean signed distance-like value of p against edge i; >= 0 inside.
    double edge_side(std::size_t i, KleinPoint p) const;
    /// Closed containment with Euclidean slack tol.
    bool contains(KleinPoint p, double tol = 1e-12) const;
    /// Smallest Euclidean edge_side over all edges (negative if outside).
    double min_edge_side(KleinPoint p) const;
    Polygon transformed(const Isometry& g) const;
};

/// Interior angle at vertex i measured with the Klein metric; 0 at ideal vertices.
double interior_angle(const Polygon& poly, std::size_t i);

/// Hyperbolic area via Gauss-Bonnet. Throws DomainError for degenerate input.
double polygon_area(const Polygon& poly);

/// Is a Euclidean-convex counterclockwise polygon.
bool is_convex(const Polygon& poly);

/// Hyperbolic distance from q to the closed polygon (0 inside).
double point_polygon_distance(KleinPoint q, const Polygon& poly);

/// Largest distance from the origin to a vertex; infinite for ideal vertices.
double polygon_max_radius(const Polygon& poly);

/// Dedup structure for points of the disk: two points are identified when
/// their hyperbolic distance is below tol.
class PointIndex {
public:
    explicit PointIndex(double tol = 1e-8);

    /// Index of a stored point within tol of p, or -1.
    long find(KleinPoint p) const;
    /// Returns {index, inserted}.
    std::pair<long, bool> insert(KleinPoint p);
    const std::vector<KleinPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

private:
    struct CellHash {
        std::size_t operator()(const std::pair<long long, long long>& c) const noexcept;
    };
    std::pair<long long, long long> cell_of(KleinPoint p) const;

    double tol_;
    double cell_;
    std::vector<KleinPoint> points_;
    std::unordered_multimap<std::pair<long long, long long>, long, CellHash> cells_;
};

}  // namespace hypack
