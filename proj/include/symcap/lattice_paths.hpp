#pragma once

// Exact optimization over convex and concave integral paths.
//
// Both problems are solved by the same dynamic program.  A path is a sequence
// of edge blocks m*(p, -q) with (p, q) primitive, taken in a fixed slope order.
// Walking the path backwards from (a, 0), the contribution of a block to the
// lattice count depends only on the height of its lower end, so the state is
// (height, partial count) and the x coordinate never needs tracking:
//
//   2*L_convex  - 2 = 2A + a + b + sum gcd     (Pick, boundary included)
//   2*L_concave     = 2A + a + b - sum gcd     (points on the path excluded)
//
// and a single unit step (p, -q) whose lower end sits at height h adds
// p(2h + q) + p + q +/- 1 to the right-hand side.  A block of m steps adds
// the same as m consecutive unit steps, so each direction is an unbounded
// knapsack item processed in place.
//
// Lengths are computed on the profile rescaled to integer vertices, which
// keeps the inner loops in 64-bit integers while staying exact.

#include "symcap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace symcap {

struct PathOptimum {
    Rational value;
    LatticePath witness;
};

namespace detail {

struct Step {
    std::int64_t p = 0;        // rightward
    std::int64_t q = 0;        // downward
    std::int64_t length = 0;   // scaled Omega-length of one unit step
};

/// Primitive directions (p, q), p, q >= 0, with p <= max_p and q <= max_q,
/// in increasing order of q/p (Stern-Brocot in-order).  `keep` must be
/// monotone: once it rejects a mediant it rejects all of its descendants.
template <class Keep>
std::vector<std::pair<std::int64_t, std::int64_t>> stern_brocot_directions(std::int64_t max_p, std::int64_t max_q,
                                                                           Keep keep)
{
    using Dir = std::pair<std::int64_t, std::int64_t>;
    std::vector<Dir> out;
    auto ok = [&](Dir d) { return d.first <= max_p && d.second <= max_q && keep(d.first, d.second); };
    const Dir lo{1, 0};
    const Dir hi{0, 1};
    if (ok(lo)) out.push_back(lo);
    // Iterative in-order traversal of the tree between lo and hi.
    struct Frame {
        Dir left, right;
        bool expanded;
    };
    std::vector<Frame> stack{{lo, hi, false}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        const Dir mid{f.left.first + f.right.first, f.left.second + f.right.second};
        if (!ok(mid)) continue;
        if (!f.expanded) {
            // right subtree, then mid, then left subtree (popped in reverse)
            stack.push_back({mid, f.right, false});
            stack.push_back({f.left, f.right, true});
            stack.push_back({f.left, mid, false});
        } else {
            out.push_back(mid);
        }
    }
    if (ok(hi)) out.push_back(hi);
    return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("lattice path length overflows 64 bits");
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("lattice path length overflows 64 bits");
    return r;
}

/// Scaled support value  max / min over vertices of q*w.x + p*w.y.
inline std::int64_t support(const ScaledProfile& sp, std::int64_t p, std::int64_t q, bool maximize)
{
    std::int64_t best = 0;
    bool first = true;
    for (const auto& w : sp.vertices) {
        const std::int64_t v = checked_add(checked_mul(q, w.x), checked_mul(p, w.y));
        if (first || (maximize ? v > best : v < best)) best = v;
        first = false;
    }
    return best;
}

/// Rolling table for one of the two path problems.
///
/// Convex: entry (h, t) is the minimum length of a path piece running from
/// height h down to (a, 0) whose count contribution is at least t (t capped).
/// Concave: entry (h, t) is the maximum length with contribution exactly t.
template <PathKind Kind>
class PathTable {
public:
    static constexpr bool kConvex = Kind == PathKind::ConvexPath;
    static constexpr std::int64_t kUnreached =
        kConvex ? std::numeric_limits<std::int64_t>::max() / 4 : std::numeric_limits<std::int64_t>::min() / 4;
    static constexpr std::int64_t kUnit = kConvex ? 1 : -1;

    PathTable(std::int64_t max_height, std::int64_t max_t)
        : rows_(max_height + 1), cols_(max_t + 1), cells_(static_cast<std::size_t>(rows_ * cols_))
    {
        reset();
    }

    void reset()
    {
        std::fill(cells_.begin(), cells_.end(), kUnreached);
        at(0, 0) = 0;
    }

    std::int64_t max_height() const { return rows_ - 1; }
    std::int64_t max_t() const { return cols_ - 1; }

    std::int64_t& at(std::int64_t h, std::int64_t t) { return cells_[static_cast<std::size_t>(h * cols_ + t)]; }
    std::int64_t at(std::int64_t h, std::int64_t t) const { return cells_[static_cast<std::size_t>(h * cols_ + t)]; }

    static bool reached(std::int64_t v) { return v != kUnreached; }

    /// Count contribution of one unit step whose lower end is at height h.
    static std::int64_t step_count(const Step& s, std::int64_t h) { return s.p * (2 * h + s.q) + s.p + s.q + kUnit; }

    /// Contribution of an m-step block whose lower end is at height h.
    static std::int64_t block_count(const Step& s, std::int64_t m, std::int64_t h)
    {
        return m * s.p * (2 * h + m * s.q) + m * (s.p + s.q + kUnit);
    }

    /// Allow any number of unit steps of direction s on top of the pieces
    /// already in the table.
    void absorb(const Step& s)
    {
        const std::int64_t last = max_t();
        if constexpr (kConvex) {
            for (std::int64_t top = s.q; top <= max_height(); ++top) {
                const std::int64_t h = top - s.q;
                const std::int64_t c = step_count(s, h);
                std::int64_t* dst = &at(top, 0);
                const std::int64_t* src = &at(h, 0);
                for (std::int64_t t = 0; t <= last; ++t) {
                    const std::int64_t from = src[t > c ? t - c : 0];
                    if (from != kUnreached && from + s.length < dst[t]) dst[t] = from + s.length;
                }
            }
        } else {
            for (std::int64_t top = s.q; top <= max_height(); ++top) {
                const std::int64_t h = top - s.q;
                const std::int64_t c = step_count(s, h);
                if (c > last) break;
                std::int64_t* dst = &at(top, 0);
                const std::int64_t* src = &at(h, 0);
                for (std::int64_t t = c; t <= last; ++t) {
                    const std::int64_t from = src[t - c];
                    if (from != kUnreached && from + s.length > dst[t]) dst[t] = from + s.length;
                }
            }
        }
    }

    /// Best completion from height h given that `used` has already been
    /// contributed and the whole path must reach `target`.
    std::int64_t completion(std::int64_t h, std::int64_t used, std::int64_t target) const
    {
        if (h > max_height()) return kUnreached;
        if constexpr (kConvex) {
            const std::int64_t need = std::min(std::max<std::int64_t>(0, target - used), max_t());
            return at(h, need);
        } else {
            const std::int64_t room = std::min(target - used, max_t());
            std::int64_t best = kUnreached;
            for (std::int64_t t = 0; t <= room; ++t) best = std::max(best, at(h, t));
            return best;
        }
    }

private:
    std::int64_t rows_;
    std::int64_t cols_;
    std::vector<std::int64_t> cells_;
};

/// Search space for one profile: the admissible directions (in forward
/// order along the path), the height bound, and the integer rescaling.
struct PathSpace {
    PathKind kind;
    ScaledProfile scaled;
    std::vector<Step> steps;
    std::int64_t max_height = 0;
    std::int64_t max_t = 0;
};

/// Lex-smallest optimal path by forward greedy with exact completion values.
/// `target` is 2k; `optimum` the scaled optimal length.
template <PathKind Kind>
LatticePath lex_smallest_witness(const PathSpace& space, std::int64_t target, std::int64_t optimum)
{
    using Table = PathTable<Kind>;
    Table table(space.max_height, space.max_t);
    const auto& steps = space.steps;
    const auto n = static_cast<std::ptrdiff_t>(steps.size());

    for (std::ptrdiff_t j = n - 1; j >= 0; --j) table.absorb(steps[static_cast<std::size_t>(j)]);

    auto matches = [&](std::int64_t completion, std::int64_t len) {
        return Table::reached(completion) && completion + len == optimum;
    };

    std::int64_t b = -1;
    for (std::int64_t h = 0; h <= space.max_height; ++h) {
        if (matches(table.completion(h, 0, target), 0)) {
            b = h;
            break;
        }
    }
    if (b < 0) throw std::logic_error("lattice path witness reconstruction failed");

    std::vector<LatticePoint> vertices{{0, b}};
    std::int64_t x = 0, y = b, used = 0, len = 0;
    std::size_t next = 0;

    auto can_end = [&] {
        if (y != 0 || len != optimum) return false;
        return Table::kConvex ? used >= target : used <= target;
    };

    while (!can_end()) {
        struct Choice {
            LatticePoint to;
            std::size_t dir;
            std::int64_t count, length;
        };
        std::optional<Choice> best;
        table.reset();
        for (std::ptrdiff_t j = n - 1; j >= static_cast<std::ptrdiff_t>(next); --j) {
            const Step& s = steps[static_cast<std::size_t>(j)];
            // table now holds directions strictly after j
            for (std::int64_t m = 1;; ++m) {
                const std::int64_t low = y - m * s.q;
                if (low < 0) break;
                const std::int64_t count = Table::block_count(s, m, low);
                const std::int64_t length = len + m * s.length;
                if constexpr (Table::kConvex) {
                    if (length > optimum) break;
                } else {
                    if (used + count > target) break;
                }
                if (matches(table.completion(low, used + count, target), length)) {
                    const LatticePoint to{x + m * s.p, low};
                    if (!best || to < best->to) best = Choice{to, static_cast<std::size_t>(j), count, length};
                }
            }
            table.absorb(s);
        }
        if (!best) throw std::logic_error("lattice path witness reconstruction stalled");
        x = best->to.x;
        y = best->to.y;
        used += best->count;
        len = best->length;
        next = best->dir + 1;
        vertices.push_back(best->to);
    }
    return LatticePath(Kind, std::move(vertices));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Convex paths:  c_k = min { l_Omega(L) : L(L) >= k + 1 }

/// Boundary of the convex hull of the lattice points of r*Omega, for the
/// smallest r at which r*Omega holds at least k + 1 lattice points.  Its
/// Omega-length bounds c_k from above.
inline LatticePath scaled_hull_path(const ToricProfile& omega, std::int64_t k)
{
    if (omega.kind() != ProfileKind::Convex) throw std::invalid_argument("scaled hull path needs a convex profile");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    const ScaledProfile sp = scaled_integer_vertices(omega);

    // Facets of the quadrant part of Omega-hat, as <n, z> <= h.
    struct Facet {
        std::int64_t nx, ny, h;
    };
    std::vector<Facet> facets;
    for (std::size_t i = 0; i + 1 < sp.vertices.size(); ++i) {
        const IntVec2 e = sp.vertices[i + 1] - sp.vertices[i];
        const std::int64_t nx = -e.y, ny = e.x;
        facets.push_back({nx, ny, nx * sp.vertices[i].x + ny * sp.vertices[i].y});
    }
    // gauge(z) = scale * max_f <n_f, z> / h_f, compared as fractions
    struct Gauge {
        __int128 num, den;
    };
    auto gauge = [&](std::int64_t x, std::int64_t y) {
        Gauge g{0, 1};
        for (const auto& f : facets) {
            const __int128 num = static_cast<__int128>(f.nx) * x + static_cast<__int128>(f.ny) * y;
            if (num * g.den > g.num * f.h) g = {num, f.h};
        }
        return g;
    };
    auto less = [](const Gauge& u, const Gauge& v) { return u.num * v.den < v.num * u.den; };

    const double area = to_double(region_area(omega));
    double reach = std::max(1.0, 2.0 * std::sqrt(static_cast<double>(k + 1) / area));
    std::vector<std::pair<Gauge, IntVec2>> pts;
    for (;;) {
        pts.clear();
        const auto xmax = static_cast<std::int64_t>(std::ceil(reach * to_double(omega.a())));
        const auto ymax = static_cast<std::int64_t>(std::ceil(reach * to_double(omega.b())));
        for (std::int64_t x = 0; x <= xmax; ++x)
            for (std::int64_t y = 0; y <= ymax; ++y) pts.push_back({gauge(x, y), {x, y}});
        // Points with gauge <= reach all lie inside the scanned box.
        const Gauge cut{static_cast<__int128>(std::floor(reach * 1024.0)), static_cast<__int128>(1024) * sp.scale};
        std::size_t inside = 0;
        for (const auto& [g, z] : pts) inside += less(cut, g) ? 0 : 1;
        if (inside >= static_cast<std::size_t>(k + 1)) break;
        reach *= 2;
    }
    std::nth_element(pts.begin(), pts.begin() + k, pts.end(),
                     [&](const auto& u, const auto& v) { return less(u.first, v.first); });
    const Gauge r = pts[static_cast<std::size_t>(k)].first;

    // Column tops of the down-closed set {gauge <= r}.
    std::vector<std::int64_t> top;
    for (const auto& [g, z] : pts) {
        if (less(r, g)) continue;
        if (static_cast<std::size_t>(z.x) >= top.size()) top.resize(static_cast<std::size_t>(z.x) + 1, -1);
        top[static_cast<std::size_t>(z.x)] = std::max(top[static_cast<std::size_t>(z.x)], z.y);
    }
    std::vector<IntVec2> cand;
    for (std::size_t x = 0; x < top.size(); ++x)
        if (top[x] >= 0) cand.push_back({static_cast<std::int64_t>(x), top[x]});
    if (cand.back().y != 0) cand.push_back({cand.back().x, 0});

    // Upper hull, clockwise.
    std::vector<IntVec2> hull;
    for (const auto& p : cand) {
        while (hull.size() >= 2) {
            const IntVec2 u = hull[hull.size() - 1] - hull[hull.size() - 2];
            const IntVec2 v = p - hull.back();
            if (u.x * v.y - u.y * v.x >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return LatticePath(PathKind::ConvexPath, std::move(hull));
}

namespace detail {

inline std::int64_t scaled_omega_length(const LatticePath& path, const ScaledProfile& sp, bool maximize)
{
    std::int64_t total = 0;
    const auto& v = path.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const std::int64_t p = v[i + 1].x - v[i].x;
        const std::int64_t q = v[i].y - v[i + 1].y;
        total = checked_add(total, support(sp, p, q, maximize));
    }
    return total;
}

inline PathSpace convex_space(const ToricProfile& omega, std::int64_t kmax)
{
    PathSpace space{PathKind::ConvexPath, scaled_integer_vertices(omega), {}, 0, 2 * kmax};
    const auto& sp = space.scaled;
    const std::int64_t bound = scaled_omega_length(scaled_hull_path(omega, kmax), sp, true);
    const std::int64_t a = sp.vertices.back().x;
    const std::int64_t b = sp.vertices.front().y;
    // Every edge has length >= q*a and >= p*b, so totals are bounded by U.
    const std::int64_t max_q = bound / a;
    const std::int64_t max_p = bound / b;
    space.max_height = max_q;
    for (auto [p, q] : stern_brocot_directions(max_p, max_q, [](std::int64_t, std::int64_t) { return true; })) {
        const std::int64_t len = support(sp, p, q, true);
        if (len <= bound) space.steps.push_back({p, q, len});
    }
    return space;
}

inline PathSpace concave_space(const ToricProfile& omega, std::int64_t kmax)
{
    PathSpace space{PathKind::ConcavePath, scaled_integer_vertices(omega), {}, kmax, 2 * kmax};
    const std::int64_t budget = 2 * kmax;
    // A unit step costs at least (p+1)(q+1) - 2 in the doubled count.
    auto dirs = stern_brocot_directions(kmax, kmax, [&](std::int64_t p, std::int64_t q) {
        return (p + 1) * (q + 1) - 2 <= budget;
    });
    // steepest first
    for (auto it = dirs.rbegin(); it != dirs.rend(); ++it) {
        const auto [p, q] = *it;
        if (p == 0 || q == 0) continue;
        space.steps.push_back({p, q, support(space.scaled, p, q, false)});
    }
    return space;
}

template <PathKind Kind>
PathTable<Kind> full_table(const PathSpace& space)
{
    PathTable<Kind> table(space.max_height, space.max_t);
    for (auto it = space.steps.rbegin(); it != space.steps.rend(); ++it) table.absorb(*it);
    return table;
}

}  // namespace detail

/// c_0 .. c_kmax of a convex toric domain from one table pass.
inline std::vector<Rational> convex_path_capacities(const ToricProfile& omega, std::int64_t kmax)
{
    if (omega.kind() != ProfileKind::Convex) throw std::invalid_argument("convex path solver needs a convex profile");
    if (kmax < 0) throw std::invalid_argument("kmax must be nonnegative");
    const auto space = detail::convex_space(omega, kmax);
    const auto table = detail::full_table<PathKind::ConvexPath>(space);
    std::vector<Rational> out;
    for (std::int64_t k = 0; k <= kmax; ++k) {
        std::int64_t best = table.kUnreached;
        for (std::int64_t h = 0; h <= space.max_height; ++h) best = std::min(best, table.at(h, 2 * k));
        if (!table.reached(best)) throw std::logic_error("convex path search found no admissible path");
        out.emplace_back(Integer(best), Integer(space.scaled.scale));
    }
    return out;
}

inline PathOptimum solve_convex_path(const ToricProfile& omega, std::int64_t k)
{
    if (omega.kind() != ProfileKind::Convex) throw std::invalid_argument("convex path solver needs a convex profile");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    const auto space = detail::convex_space(omega, k);
    const auto table = detail::full_table<PathKind::ConvexPath>(space);
    std::int64_t best = table.kUnreached;
    for (std::int64_t h = 0; h <= space.max_height; ++h) best = std::min(best, table.at(h, 2 * k));
    if (!table.reached(best)) throw std::logic_error("convex path search found no admissible path");
    auto witness = detail::lex_smallest_witness<PathKind::ConvexPath>(space, 2 * k, best);
    return {Rational(Integer(best), Integer(space.scaled.scale)), std::move(witness)};
}

// ---------------------------------------------------------------------------
// Concave paths:  c_k = max { l_Omega(L) : L(L) <= k }

inline std::vector<Rational> concave_path_capacities(const ToricProfile& omega, std::int64_t kmax)
{
    if (omega.kind() != ProfileKind::Concave) throw std::invalid_argument("concave path solver needs a concave profile");
    if (kmax < 0) throw std::invalid_argument("kmax must be nonnegative");
    const auto space = detail::concave_space(omega, kmax);
    const auto table = detail::full_table<PathKind::ConcavePath>(space);
    std::vector<std::int64_t> by_count(static_cast<std::size_t>(space.max_t + 1), table.kUnreached);
    for (std::int64_t h = 0; h <= space.max_height; ++h)
        for (std::int64_t t = 0; t <= space.max_t; ++t)
            by_count[static_cast<std::size_t>(t)] = std::max(by_count[static_cast<std::size_t>(t)], table.at(h, t));
    std::vector<Rational> out;
    std::int64_t running = 0;
    for (std::int64_t k = 0; k <= kmax; ++k) {
        for (std::int64_t t = std::max<std::int64_t>(0, 2 * k - 1); t <= 2 * k; ++t)
            running = std::max(running, by_count[static_cast<std::size_t>(t)]);
        out.emplace_back(Integer(running), Integer(space.scaled.scale));
    }
    return out;
}

inline PathOptimum solve_concave_path(const ToricProfile& omega, std::int64_t k)
{
    if (omega.kind() != ProfileKind::Concave) throw std::invalid_argument("concave path solver needs a concave profile");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    const auto space = detail::concave_space(omega, k);
    const auto table = detail::full_table<PathKind::ConcavePath>(space);
    std::int64_t best = 0;
    for (std::int64_t h = 0; h <= space.max_height; ++h)
        best = std::max(best, table.completion(h, 0, 2 * k));
    auto witness = detail::lex_smallest_witness<PathKind::ConcavePath>(space, 2 * k, best);
    return {Rational(Integer(best), Integer(space.scaled.scale)), std::move(witness)};
}

}  // namespace symcap
