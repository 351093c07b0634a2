#pragma once

// Dyadic cube packings of domains in R^4 and the lower bound on e_k they
// certify.

#include "symcap/asymptotics.hpp"
#include "symcap/capacities.hpp"
#include "symcap/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace symcap {

using Point4 = std::array<double, 4>;

/// A region of R^4 known through point queries.  `meets(lo, hi)` may return
/// false only when the closed box [lo, hi] misses the region; an empty
/// function never prunes.
struct MembershipOracle {
    std::function<bool(const Point4&)> contains;
    Point4 lo{}, hi{};
    bool convex_cell_safe = false;   // region is convex, so vertices decide containment
    std::function<bool(const Point4&, const Point4&)> meets;
};

/// The closed box [lo, hi].
inline MembershipOracle box_oracle(Point4 lo, Point4 hi)
{
    for (int i = 0; i < 4; ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("box must have positive extent");
    MembershipOracle o;
    o.lo = lo;
    o.hi = hi;
    o.convex_cell_safe = true;
    o.contains = [lo, hi](const Point4& p) {
        for (int i = 0; i < 4; ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    };
    o.meets = [lo, hi](const Point4& a, const Point4& b) {
        for (int i = 0; i < 4; ++i)
            if (b[i] < lo[i] || a[i] > hi[i]) return false;
        return true;
    };
    return o;
}

namespace detail {

struct RegionTest {
    std::vector<std::array<double, 2>> v;
    double a = 0;

    explicit RegionTest(const ToricProfile& p)
    {
        for (const auto& q : p.vertices()) v.push_back({to_double(q.mu1), to_double(q.mu2)});
        a = v.back()[0];
    }

    /// (x, y) in Omega shrunk by `slack`; a negative slack enlarges it.
    bool operator()(double x, double y, double slack) const
    {
        if (x < 0 || y < 0 || x > a - slack) return false;
        x = std::min(x, a);
        double top = -1;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const auto& p = v[i];
            const auto& q = v[i + 1];
            if (x < p[0] || x > q[0]) continue;
            const double f = q[0] == p[0] ? std::max(p[1], q[1]) : p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0]);
            top = std::max(top, f);
        }
        return y <= top - slack;
    }
};

/// Minimum of u^2 + v^2 over [lo0, hi0] x [lo1, hi1].
inline double min_radius2(double lo0, double hi0, double lo1, double hi1)
{
    auto d = [](double lo, double hi) { return lo > 0 ? lo : (hi < 0 ? -hi : 0.0); };
    const double x = d(lo0, hi0), y = d(lo1, hi1);
    return x * x + y * y;
}

inline bool profile_region_convex(const ToricProfile& p)
{
    const auto& v = p.vertices();
    for (std::size_t i = 0; i + 2 < v.size(); ++i)
        if (cross(v[i + 1] - v[i], v[i + 2] - v[i + 1]) > 0) return false;
    return true;
}

}  // namespace detail

/// X_Omega in coordinates (u1, v1, u2, v2) with z_j = u_j + i v_j: the point
/// lies in X_Omega when (pi |z1|^2, pi |z2|^2) lies in Omega.  Evaluated in
/// binary64 against Omega shrunk by 1e-12 (a + b).
inline MembershipOracle toric_oracle(const ToricProfile& omega)
{
    const double pi = std::acos(-1.0);
    const auto region = std::make_shared<detail::RegionTest>(omega);
    const double a = to_double(omega.a()), b = to_double(omega.b());
    const double margin = 1e-12 * (a + b);
    const double ra = std::sqrt(a / pi) * (1 + 1e-12), rb = std::sqrt(b / pi) * (1 + 1e-12);
    MembershipOracle o;
    o.lo = {-ra, -ra, -rb, -rb};
    o.hi = {ra, ra, rb, rb};
    o.convex_cell_safe = detail::profile_region_convex(omega);
    o.contains = [region, pi, margin](const Point4& p) {
        return (*region)(pi * (p[0] * p[0] + p[1] * p[1]), pi * (p[2] * p[2] + p[3] * p[3]), margin);
    };
    // Omega is closed under decreasing either coordinate, so the box meets
    // X_Omega exactly when its point of smallest radii does
    o.meets = [region, pi, margin](const Point4& lo, const Point4& hi) {
        return (*region)(pi * detail::min_radius2(lo[0], hi[0], lo[1], hi[1]),
                         pi * detail::min_radius2(lo[2], hi[2], lo[3], hi[3]), -margin);
    };
    return o;
}

/// The part of the box `outer` not in `inner`.
inline MembershipOracle complement_oracle(const MembershipOracle& inner, const MembershipOracle& outer)
{
    MembershipOracle o;
    o.lo = outer.lo;
    o.hi = outer.hi;
    o.contains = [inner, outer](const Point4& p) { return outer.contains(p) && !inner.contains(p); };
    o.meets = outer.meets;
    return o;
}

struct DyadicCell {
    int level = 0;
    std::array<std::int64_t, 4> index{};   // cell is prod [i 2^-n, (i + 1) 2^-n]

    friend bool operator==(const DyadicCell&, const DyadicCell&) = default;
    friend auto operator<=>(const DyadicCell&, const DyadicCell&) = default;
};

struct CubePacking {
    int max_level = 0;
    std::vector<std::int64_t> per_level;   // m_n at index n - 1
    double covered_volume = 0;
    std::vector<DyadicCell> cells;         // filled when requested

    std::int64_t count(int level) const
    {
        return level >= 1 && level <= max_level ? per_level[static_cast<std::size_t>(level - 1)] : 0;
    }
};

/// Ball parameter a = 4^-n of a level-n cube.
inline double cube_parameter(int level) { return std::ldexp(1.0, -2 * level); }

struct PackOptions {
    int subsample = 5;      // points per axis for oracles that are not cell-safe
    unsigned threads = 1;
    bool keep_cells = false;
};

namespace detail {

struct CellBox {
    Point4 lo, hi;
};

inline CellBox cell_box(const DyadicCell& c)
{
    CellBox b;
    for (int i = 0; i < 4; ++i) {
        b.lo[i] = std::ldexp(static_cast<double>(c.index[i]), -c.level);
        b.hi[i] = std::ldexp(static_cast<double>(c.index[i] + 1), -c.level);
    }
    return b;
}

inline bool cell_inside(const MembershipOracle& o, const CellBox& b, int subsample)
{
    Point4 c;
    for (int i = 0; i < 4; ++i) c[i] = (b.lo[i] + b.hi[i]) / 2;
    if (!o.contains(c)) return false;
    const int n = o.convex_cell_safe ? 2 : std::max(2, subsample);
    std::array<int, 4> j{};
    while (true) {
        Point4 p;
        for (int i = 0; i < 4; ++i) p[i] = j[i] == n - 1 ? b.hi[i] : b.lo[i] + (b.hi[i] - b.lo[i]) * j[i] / (n - 1);
        if (!o.contains(p)) return false;
        int i = 0;
        while (i < 4 && ++j[i] == n) j[i++] = 0;
        if (i == 4) return true;
    }
}

struct PackWork {
    std::vector<std::int64_t> counts;
    std::vector<DyadicCell> cells;
};

inline void pack_cell(const MembershipOracle& o, const DyadicCell& c, int max_level, const PackOptions& opts, PackWork& w)
{
    const CellBox b = cell_box(c);
    if (o.meets && !o.meets(b.lo, b.hi)) return;
    if (cell_inside(o, b, opts.subsample)) {
        ++w.counts[static_cast<std::size_t>(c.level - 1)];
        if (opts.keep_cells) w.cells.push_back(c);
        return;
    }
    if (c.level == max_level) return;
    for (int m = 0; m < 16; ++m) {
        DyadicCell child{c.level + 1, {}};
        for (int i = 0; i < 4; ++i) child.index[i] = 2 * c.index[i] + ((m >> i) & 1);
        pack_cell(o, child, max_level, opts, w);
    }
}

}  // namespace detail

/// Level 1 accepts the closed cells of side 1/2 on the grid 2^-1 Z^4 that lie
/// in the region; level n accepts cells of side 2^-n inside the region whose
/// parent was not accepted.
inline CubePacking dyadic_pack(const MembershipOracle& oracle, int max_level, const PackOptions& opts = {})
{
    if (max_level < 1 || max_level > 12) throw std::invalid_argument("max_level must lie in [1, 12]");
    if (!oracle.contains) throw std::invalid_argument("oracle has no membership test");
    std::array<std::int64_t, 4> first{}, extent{};
    double total = 1;
    for (int i = 0; i < 4; ++i) {
        first[i] = static_cast<std::int64_t>(std::floor(2 * oracle.lo[i]));
        extent[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(2 * oracle.hi[i])) - first[i]);
        total *= static_cast<double>(extent[i]);
    }
    if (total > 1 << 24) throw std::invalid_argument("bounding box too large for level-1 scan");
    const auto n_top = static_cast<std::size_t>(total);

    std::vector<detail::PackWork> work(n_top);
    parallel_for(n_top, opts.threads, [&](std::size_t t) {
        DyadicCell c{1, {}};
        std::size_t r = t;
        for (int i = 0; i < 4; ++i) {
            c.index[i] = first[i] + static_cast<std::int64_t>(r % static_cast<std::size_t>(extent[i]));
            r /= static_cast<std::size_t>(extent[i]);
        }
        work[t].counts.assign(static_cast<std::size_t>(max_level), 0);
        detail::pack_cell(oracle, c, max_level, opts, work[t]);
    });

    CubePacking out;
    out.max_level = max_level;
    out.per_level.assign(static_cast<std::size_t>(max_level), 0);
    for (auto& w : work) {
        for (std::size_t n = 0; n < w.counts.size(); ++n) out.per_level[n] += w.counts[n];
        out.cells.insert(out.cells.end(), w.cells.begin(), w.cells.end());
    }
    std::sort(out.cells.begin(), out.cells.end());
    for (int n = 1; n <= max_level; ++n) out.covered_volume += static_cast<double>(out.count(n)) * cube_parameter(n) * cube_parameter(n);
    return out;
}

/// Lower bound for e_k(X) from the cubes with a^2 >= vol / k:
/// -2 sqrt2 sum a_i + 2 (V_k - vol) sqrt(k / vol).
inline double basest_lower_bound(const CubePacking& packing, double vol, std::int64_t k)
{
    if (!(vol > 0)) throw std::invalid_argument("volume must be positive");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    double sum_a = 0, v_k = 0;
    for (int n = 1; n <= packing.max_level; ++n) {
        const double a = cube_parameter(n);
        if (static_cast<double>(k) * a * a < vol) break;
        sum_a += static_cast<double>(packing.count(n)) * a;
        v_k += static_cast<double>(packing.count(n)) * a * a;
    }
    return -2 * std::sqrt(2.0) * sum_a + 2 * (v_k - vol) / std::sqrt(vol) * std::sqrt(static_cast<double>(k));
}

/// The n with 16^n <= k / vol < 16^(n+1); negative when k < vol.
inline int kbound_level(std::int64_t k, double vol)
{
    if (k < 1 || !(vol > 0)) throw std::invalid_argument("need k >= 1 and vol > 0");
    const double r = static_cast<double>(k) / vol;
    int n = 0;
    double p = 1;
    if (r < 1) {
        while (r < p) p /= 16, --n;
        return n;
    }
    while (p * 16 <= r) p *= 16, ++n;
    return n;
}

struct ExponentRow {
    std::int64_t k = 0;
    int level = 0;
    double bound = 0;
    double ratio = 0;        // bound / k^(1/4)
    bool truncated = false;  // level exceeds the packing depth
};

/// Lower bounds from one packing of depth max_level at each k.  Only the
/// lower-bound direction is computed.
inline std::vector<ExponentRow> exponent_scan(const MembershipOracle& oracle, double vol, int max_level,
                                              const std::vector<std::int64_t>& ks, const PackOptions& opts = {})
{
    const CubePacking packing = dyadic_pack(oracle, max_level, opts);
    std::vector<ExponentRow> rows;
    for (const auto k : ks) {
        ExponentRow r;
        r.k = k;
        r.level = kbound_level(k, vol);
        r.bound = basest_lower_bound(packing, vol, k);
        r.ratio = r.bound / std::pow(static_cast<double>(k), 0.25);
        r.truncated = r.level > max_level;
        rows.push_back(r);
    }
    return rows;
}

/// e_k(P(a, a)), checked against the floor -2a.
inline double ek_polydisk_lower(const Rational& a, std::int64_t k)
{
    const double e = error_term(ck_polydisk(a, a, k), k, a * a);
    if (e < -2 * to_double(a) * (1 + 1e-15)) throw std::logic_error("polydisk error term below -2a");
    return e;
}

}  // namespace symcap
