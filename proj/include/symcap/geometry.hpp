#pragma once

// Exact plane geometry for toric domains: profiles of the region Omega in the
// moment quadrant, integral affine maps, the dual norm / anti-norm used to
// measure lattice paths, affine length, and lattice point counts.

#include "symcap/rational.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcap {

struct Point2 {
    Rational mu1;
    Rational mu2;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct IntVec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const IntVec2&, const IntVec2&) = default;
    friend auto operator<=>(const IntVec2&, const IntVec2&) = default;
};

using LatticePoint = IntVec2;

constexpr IntVec2 operator-(IntVec2 u, IntVec2 v) { return {u.x - v.x, u.y - v.y}; }
constexpr IntVec2 operator+(IntVec2 u, IntVec2 v) { return {u.x + v.x, u.y + v.y}; }

/// J(x, y) = (-y, x), rotation by +90 degrees.
constexpr IntVec2 rotate_j(IntVec2 v) { return {-v.y, v.x}; }

inline Rational cross(const Point2& u, const Point2& v) { return u.mu1 * v.mu2 - u.mu2 * v.mu1; }

inline Point2 operator-(const Point2& u, const Point2& v) { return {u.mu1 - v.mu1, u.mu2 - v.mu2}; }

class Polyline {
public:
    Polyline() = default;

    explicit Polyline(std::vector<Point2> vertices) : vertices_(std::move(vertices))
    {
        if (vertices_.size() < 2) throw std::invalid_argument("polyline needs at least two vertices");
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
            if (vertices_[i] == vertices_[i + 1])
                throw std::invalid_argument("polyline has repeated consecutive vertices");
    }

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point2& front() const { return vertices_.front(); }
    const Point2& back() const { return vertices_.back(); }

    friend bool operator==(const Polyline&, const Polyline&) = default;

private:
    std::vector<Point2> vertices_;
};

/// SL(2,Z) matrix followed by an integer translation.
class IntegralAffineMap {
public:
    using Matrix = std::array<std::array<std::int64_t, 2>, 2>;

    IntegralAffineMap() = default;

    IntegralAffineMap(Matrix matrix, IntVec2 translation) : matrix_(matrix), translation_(translation)
    {
        if (matrix_[0][0] * matrix_[1][1] - matrix_[0][1] * matrix_[1][0] != 1)
            throw std::invalid_argument("integral affine map must have determinant 1");
    }

    static IntegralAffineMap identity() { return {}; }

    const Matrix& matrix() const { return matrix_; }
    IntVec2 translation() const { return translation_; }

    Point2 operator()(const Point2& p) const
    {
        return {matrix_[0][0] * p.mu1 + matrix_[0][1] * p.mu2 + translation_.x,
                matrix_[1][0] * p.mu1 + matrix_[1][1] * p.mu2 + translation_.y};
    }

private:
    Matrix matrix_{{{1, 0}, {0, 1}}};
    IntVec2 translation_{};
};

inline Polyline apply_affine(const IntegralAffineMap& map, const Polyline& p)
{
    std::vector<Point2> out;
    out.reserve(p.size());
    for (const auto& v : p.vertices()) out.push_back(map(v));
    return Polyline(std::move(out));
}

// ---------------------------------------------------------------------------
// Toric profiles

enum class ProfileKind { Concave, Convex };

inline const char* to_string(ProfileKind k) { return k == ProfileKind::Concave ? "concave" : "convex"; }

/// The curve d_+Omega from (0, b) to (a, 0), together with which family of
/// toric domain it bounds.  Collinear interior vertices are merged on
/// construction, so two profiles describing the same region compare equal.
class ToricProfile {
public:
    ToricProfile(ProfileKind kind, std::vector<Point2> vertices) : kind_(kind)
    {
        vertices = merge_collinear(std::move(vertices));
        boundary_ = Polyline(std::move(vertices));
        validate();
    }

    ProfileKind kind() const { return kind_; }
    const Polyline& boundary() const { return boundary_; }
    const std::vector<Point2>& vertices() const { return boundary_.vertices(); }
    const Rational& a() const { return boundary_.back().mu1; }
    const Rational& b() const { return boundary_.front().mu2; }

    ToricProfile with_kind(ProfileKind k) const { return ToricProfile(k, vertices()); }

    friend bool operator==(const ToricProfile&, const ToricProfile&) = default;

private:
    static std::vector<Point2> merge_collinear(std::vector<Point2> v)
    {
        std::vector<Point2> out;
        for (auto& p : v) {
            if (!out.empty() && out.back() == p) continue;
            while (out.size() >= 2 && cross(out[out.size() - 1] - out[out.size() - 2], p - out.back()) == 0)
                out.pop_back();
            out.push_back(std::move(p));
        }
        return out;
    }

    void validate() const
    {
        const auto& v = vertices();
        if (v.front().mu1 != 0 || v.front().mu2 <= 0)
            throw std::invalid_argument("profile must start at (0, b) with b > 0");
        if (v.back().mu2 != 0 || v.back().mu1 <= 0)
            throw std::invalid_argument("profile must end at (a, 0) with a > 0");
        for (const auto& p : v)
            if (p.mu1 < 0 || p.mu2 < 0) throw std::invalid_argument("profile leaves the nonnegative quadrant");
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const Point2 e = v[i + 1] - v[i];
            if (kind_ == ProfileKind::Concave) {
                if (e.mu1 <= 0) throw std::invalid_argument("concave profile must have strictly increasing mu1");
            } else if (e.mu1 < 0 || e.mu2 > 0) {
                throw std::invalid_argument("convex profile must be monotone (mu1 up, mu2 down)");
            }
            if (i + 2 < v.size()) {
                const Rational turn = cross(e, v[i + 2] - v[i + 1]);
                if (kind_ == ProfileKind::Concave && turn < 0)
                    throw std::invalid_argument("concave profile must be the graph of a convex function");
                if (kind_ == ProfileKind::Convex && turn > 0)
                    throw std::invalid_argument("convex profile must bound a convex region");
            }
        }
    }

    ProfileKind kind_;
    Polyline boundary_;
};

inline ToricProfile triangle_profile(const Rational& a, const Rational& b, ProfileKind kind = ProfileKind::Concave)
{
    return ToricProfile(kind, {{0, b}, {a, 0}});
}

/// d_+Delta(c).
inline ToricProfile delta_profile(const Rational& c, ProfileKind kind = ProfileKind::Concave)
{
    return triangle_profile(c, c, kind);
}

/// The a x b rectangle, which bounds the polydisk P(a, b).
inline ToricProfile rectangle_profile(const Rational& a, const Rational& b)
{
    return ToricProfile(ProfileKind::Convex, {{0, b}, {a, b}, {a, 0}});
}

inline ToricProfile scale(const ToricProfile& p, const Rational& r)
{
    if (r <= 0) throw std::invalid_argument("scale factor must be positive");
    std::vector<Point2> v;
    for (const auto& w : p.vertices()) v.push_back({w.mu1 * r, w.mu2 * r});
    return ToricProfile(p.kind(), std::move(v));
}

// ---------------------------------------------------------------------------
// Lattice paths

enum class PathKind { ConvexPath, ConcavePath };

/// Integral path from (0, b) to (a, 0).  Convex paths turn clockwise with
/// slopes strictly decreasing from <= 0 down to vertical; concave paths are
/// graphs of convex functions with strictly increasing slopes.  Collinear
/// vertices are merged.
class LatticePath {
public:
    LatticePath(PathKind kind, std::vector<LatticePoint> vertices) : kind_(kind)
    {
        if (vertices.empty()) throw std::invalid_argument("lattice path needs at least one vertex");
        std::vector<LatticePoint> v;
        for (auto p : vertices) {
            if (!v.empty() && v.back() == p) continue;
            while (v.size() >= 2 && edge_cross(v[v.size() - 1] - v[v.size() - 2], p - v.back()) == 0)
                v.pop_back();
            v.push_back(p);
        }
        vertices_ = std::move(v);
        validate();
    }

    /// Rejects vertices that are not lattice points.
    static LatticePath from_points(PathKind kind, std::span<const Point2> pts)
    {
        std::vector<LatticePoint> v;
        for (const auto& p : pts) {
            if (!is_integer(p.mu1) || !is_integer(p.mu2))
                throw std::invalid_argument("lattice path vertex is not a lattice point");
            v.push_back({to_int64(numerator(p.mu1)), to_int64(numerator(p.mu2))});
        }
        return LatticePath(kind, std::move(v));
    }

    static LatticePath trivial(PathKind kind) { return LatticePath(kind, {{0, 0}}); }

    PathKind kind() const { return kind_; }
    const std::vector<LatticePoint>& vertices() const { return vertices_; }
    std::int64_t a() const { return vertices_.back().x; }
    std::int64_t b() const { return vertices_.front().y; }

    friend bool operator==(const LatticePath&, const LatticePath&) = default;

private:
    static std::int64_t edge_cross(IntVec2 u, IntVec2 v) { return u.x * v.y - u.y * v.x; }

    void validate() const
    {
        const auto& v = vertices_;
        if (v.front().x != 0 || v.front().y < 0) throw std::invalid_argument("lattice path must start on the mu2-axis");
        if (v.back().y != 0 || v.back().x < 0) throw std::invalid_argument("lattice path must end on the mu1-axis");
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const IntVec2 e = v[i + 1] - v[i];
            if (kind_ == PathKind::ConvexPath) {
                if (e.x < 0 || e.y > 0) throw std::invalid_argument("convex path must move right and down");
            } else if (e.x <= 0 || e.y > 0) {
                throw std::invalid_argument("concave path must be a graph moving right and down");
            }
            if (i + 2 < v.size()) {
                const std::int64_t turn = edge_cross(e, v[i + 2] - v[i + 1]);
                if (kind_ == PathKind::ConvexPath && turn >= 0)
                    throw std::invalid_argument("convex path slopes must strictly decrease");
                if (kind_ == PathKind::ConcavePath && turn <= 0)
                    throw std::invalid_argument("concave path slopes must strictly increase");
            }
        }
    }

    PathKind kind_;
    std::vector<LatticePoint> vertices_;
};

// ---------------------------------------------------------------------------
// Lengths and norms

namespace detail {

inline Integer igcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

/// Largest d with (x/d, y/d) integral, for rational x, y not both zero.
inline Rational rational_gcd(const Rational& x, const Rational& y)
{
    if (x == 0) return abs(y);
    if (y == 0) return abs(x);
    const Integer l = lcm(denominator(x), denominator(y));
    const Integer nx = numerator(x) * (l / denominator(x));
    const Integer ny = numerator(y) * (l / denominator(y));
    return Rational(igcd(abs(nx), abs(ny)), l);
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

}  // namespace detail

/// Lattice-normalized length.  Rational vertices always give rational slopes,
/// so the zero branch for irrational directions never arises here.
inline Rational affine_length(const Polyline& path)
{
    Rational total = 0;
    const auto& v = path.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const Point2 e = v[i + 1] - v[i];
        total += detail::rational_gcd(e.mu1, e.mu2);
    }
    return total;
}

inline Rational affine_length(const ToricProfile& p) { return affine_length(p.boundary()); }

/// max <v, w> over w in the reflection closure of a convex Omega.
inline Rational dual_norm(IntVec2 v, const ToricProfile& omega)
{
    if (omega.kind() != ProfileKind::Convex) throw std::invalid_argument("dual norm requires a convex profile");
    const std::int64_t vx = v.x < 0 ? -v.x : v.x;
    const std::int64_t vy = v.y < 0 ? -v.y : v.y;
    Rational best = 0;
    for (const auto& w : omega.vertices()) best = std::max(best, Rational(vx * w.mu1 + vy * w.mu2));
    return best;
}

/// min <v, w> over w on d_+Omega of a concave Omega.
inline Rational anti_norm(IntVec2 v, const ToricProfile& omega)
{
    if (omega.kind() != ProfileKind::Concave) throw std::invalid_argument("anti-norm requires a concave profile");
    const auto& vs = omega.vertices();
    Rational best = v.x * vs.front().mu1 + v.y * vs.front().mu2;
    for (const auto& w : vs) best = std::min(best, Rational(v.x * w.mu1 + v.y * w.mu2));
    return best;
}

/// Omega-length: sum of the norm of J e over the edges e of the path, using
/// the dual norm for convex profiles and the anti-norm for concave ones.
inline Rational omega_length(const LatticePath& path, const ToricProfile& omega)
{
    Rational total = 0;
    const auto& v = path.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const IntVec2 je = rotate_j({v[i + 1].x - v[i].x, v[i + 1].y - v[i].y});
        total += omega.kind() == ProfileKind::Convex ? dual_norm(je, omega) : anti_norm(je, omega);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Areas and lattice counts

/// Exact area of Omega (equal to the volume of X_Omega).
inline Rational region_area(const ToricProfile& p)
{
    // Shoelace over (0,0), (a,0), reversed boundary back to (0,b).
    std::vector<Point2> poly;
    poly.push_back({0, 0});
    const auto& v = p.vertices();
    for (auto it = v.rbegin(); it != v.rend(); ++it) poly.push_back(*it);
    Rational twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
    return twice / 2;
}

namespace detail {

/// Twice the area under the path, and the sum of edge gcds.
struct PathTotals {
    std::int64_t twice_area = 0;
    std::int64_t gcd_sum = 0;
};

inline PathTotals path_totals(const LatticePath& path)
{
    PathTotals t;
    const auto& v = path.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const std::int64_t dx = v[i + 1].x - v[i].x;
        const std::int64_t dy = v[i].y - v[i + 1].y;
        t.twice_area += dx * (v[i].y + v[i + 1].y);
        t.gcd_sum += gcd64(dx, dy);
    }
    return t;
}

}  // namespace detail

/// Lattice points in the region bounded by a convex path and the axes,
/// boundary included.
inline std::int64_t lattice_count_convex(const LatticePath& path)
{
    if (path.kind() != PathKind::ConvexPath) throw std::invalid_argument("expected a convex lattice path");
    const auto t = detail::path_totals(path);
    if (t.twice_area == 0) {
        // Region collapsed onto an axis segment; Pick does not apply.
        return path.a() + path.b() + 1;
    }
    // Pick: L = A + B/2 + 1 with B = a + b + sum of edge gcds.
    return (t.twice_area + path.a() + path.b() + t.gcd_sum) / 2 + 1;
}

/// Lattice points in the region enclosed by a concave path and the axes,
/// excluding those lying on the path.
inline std::int64_t lattice_count_concave(const LatticePath& path)
{
    if (path.kind() != PathKind::ConcavePath) throw std::invalid_argument("expected a concave lattice path");
    const auto t = detail::path_totals(path);
    if (t.twice_area == 0) return 0;
    return (t.twice_area + path.a() + path.b() - t.gcd_sum) / 2;
}

// ---------------------------------------------------------------------------
// Integer rescaling used by the lattice-path solvers

/// Vertices of a profile multiplied by the lcm of their denominators.
struct ScaledProfile {
    std::int64_t scale = 1;
    std::vector<IntVec2> vertices;
};

inline ScaledProfile scaled_integer_vertices(const ToricProfile& p)
{
    Integer d = 1;
    for (const auto& w : p.vertices()) d = lcm(lcm(d, denominator(w.mu1)), denominator(w.mu2));
    ScaledProfile out;
    out.scale = to_int64(d);
    for (const auto& w : p.vertices()) {
        const Rational x = w.mu1 * d;
        const Rational y = w.mu2 * d;
        out.vertices.push_back({to_int64(numerator(x)), to_int64(numerator(y))});
    }
    return out;
}

}  // namespace symcap
