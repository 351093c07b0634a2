#pragma once

#include "symcap/capacities.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace symcap {

/// e_k = c_k - 2 sqrt(k vol), in binary64.
inline double error_term(const Rational& ck, std::int64_t k, const Rational& vol)
{
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    if (vol <= 0) throw std::invalid_argument("volume must be positive");
    return to_double(ck) - 2.0 * std::sqrt(static_cast<double>(k) * to_double(vol));
}

struct Extremes {
    double min = 0, max = 0;
    std::int64_t argmin = 0, argmax = 0;
};

/// Extremes of e_k(B(a)) for k_lo <= k <= k_hi.
inline Extremes ball_oscillation(const Rational& a, std::int64_t k_lo, std::int64_t k_hi)
{
    if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("need 1 <= k_lo <= k_hi");
    const double ad = to_double(a);
    const Rational vol = a * a / 2;
    Extremes out;
    std::int64_t d = ball_index(k_lo);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        while ((d + 1) * (d + 2) <= 2 * k) ++d;
        const double e = static_cast<double>(d) * ad - 2.0 * std::sqrt(static_cast<double>(k) * to_double(vol));
        if (k == k_lo || e < out.min) out.min = e, out.argmin = k;
        if (k == k_lo || e > out.max) out.max = e, out.argmax = k;
    }
    return out;
}

/// The k-range [max(1, ceil(kmax (1 - fraction))), kmax].
struct Window {
    std::int64_t lo = 0, hi = 0;
};

class EmptyWindow : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Window top_window(std::int64_t kmax, double fraction)
{
    if (!(fraction > 0) || fraction > 1) throw std::invalid_argument("window fraction must lie in (0, 1]");
    const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(static_cast<double>(kmax) * (1 - fraction))));
    if (kmax < 1 || lo > kmax) throw EmptyWindow("error-term window is empty");
    return {lo, kmax};
}

struct WindowStats {
    Window window;
    double min = 0, max = 0, mean = 0;
};

struct ErrorSeries {
    std::vector<std::int64_t> ks;
    std::vector<Rational> c;
    std::vector<double> e;
    std::vector<bool> lower_bound_only;
    Rational vol;
    std::optional<double> ruelle_half;   // -(a + b)/2 for toric domains
    WindowStats stats;
    std::optional<double> deviation;     // |mean - ruelle_half|
};

inline WindowStats window_stats(const std::vector<std::int64_t>& ks, const std::vector<double>& e, Window w)
{
    WindowStats s{w, 0, 0, 0};
    std::size_t n = 0;
    double total = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < w.lo || ks[i] > w.hi) continue;
        if (n == 0 || e[i] < s.min) s.min = e[i];
        if (n == 0 || e[i] > s.max) s.max = e[i];
        total += e[i];
        ++n;
    }
    if (n == 0) throw EmptyWindow("error-term window is empty");
    s.mean = total / static_cast<double>(n);
    return s;
}

inline ErrorSeries error_series(const std::vector<CapacityResult>& caps, const Rational& vol,
                                std::optional<Rational> ruelle, double window_fraction)
{
    ErrorSeries out;
    out.vol = vol;
    for (const auto& r : caps) {
        out.ks.push_back(r.k);
        out.c.push_back(r.value);
        out.e.push_back(error_term(r.value, r.k, vol));
        out.lower_bound_only.push_back(r.lower_bound_only);
    }
    const std::int64_t kmax = out.ks.empty() ? 0 : out.ks.back();
    out.stats = window_stats(out.ks, out.e, top_window(kmax, window_fraction));
    if (ruelle) {
        out.ruelle_half = -to_double(*ruelle) / 2;
        out.deviation = std::abs(out.stats.mean - *out.ruelle_half);
    }
    return out;
}

/// Error terms up to kmax with window statistics against -Ru/2.  Purely a
/// report: no convergence is asserted.
inline ErrorSeries conjecture_check(const Domain& domain, std::int64_t kmax, double window_fraction,
                                    const SequenceOptions& opts = {})
{
    if (kmax < 100) throw std::invalid_argument("conjecture check needs kmax >= 100");
    return error_series(capacity_sequence(domain, kmax, MethodChoice::Auto, opts), volume(domain), ruelle_of(domain),
                        window_fraction);
}

// ---------------------------------------------------------------------------
// Obstruction from a(Omega) + b(Omega)

enum class Verdict { Obstructed, NotObstructed, VolumeMismatch };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Obstructed: return "obstructed";
    case Verdict::NotObstructed: return "not-obstructed";
    case Verdict::VolumeMismatch: return "volume-mismatch";
    }
    return "?";
}

struct ObstructionReport {
    Verdict verdict;
    Rational source_sum, target_sum;
    Rational source_area, target_area;
};

/// Necessary condition for a volume-filling embedding of int X_source into
/// X_target when both satisfy the error-term asymptotics: a + b must not
/// increase.  The caller vouches for that hypothesis.
inline ObstructionReport embedding_obstruction(const ToricProfile& source, const ToricProfile& target,
                                               const Rational& area_tol)
{
    ObstructionReport r{Verdict::NotObstructed, source.a() + source.b(), target.a() + target.b(), region_area(source),
                        region_area(target)};
    if (abs(r.source_area - r.target_area) > area_tol)
        r.verdict = Verdict::VolumeMismatch;
    else if (r.source_sum < r.target_sum)
        r.verdict = Verdict::Obstructed;
    return r;
}

// ---------------------------------------------------------------------------
// Polygonal approximation of smooth power profiles

struct PowerSpec {
    ProfileKind kind = ProfileKind::Concave;
    double a = 1, b = 1, p = 2;
    std::size_t samples = 256;
    std::int64_t denominator = std::int64_t{1} << 20;
};

/// Height of the smooth boundary over x in [0, a].
inline double power_height(const PowerSpec& s, double x)
{
    const double t = std::clamp(x / s.a, 0.0, 1.0);
    if (s.kind == ProfileKind::Concave) return s.b * std::pow(1 - std::pow(t, 1 / s.p), s.p);
    return s.b * std::pow(1 - std::pow(t, s.p), 1 / s.p);
}

/// Samples the graph at Chebyshev-spaced abscissae on the 1/D grid.  Concave
/// profiles round heights up and keep the lower hull, so the polygon lies on
/// or above the curve; convex profiles round down and keep the upper hull.
inline ToricProfile polygonalize(const PowerSpec& s)
{
    if (s.samples < 2) throw std::invalid_argument("need at least two samples");
    if (s.denominator < 1) throw std::invalid_argument("denominator must be positive");
    if (!(s.a > 0) || !(s.b > 0) || !(s.p > 1)) throw std::invalid_argument("need a, b > 0 and p > 1");
    const bool concave = s.kind == ProfileKind::Concave;
    const auto D = static_cast<double>(s.denominator);
    const auto A = static_cast<std::int64_t>(std::llround(s.a * D));
    const auto B = static_cast<std::int64_t>(std::llround(s.b * D));
    if (A < 1 || B < 1) throw std::invalid_argument("a and b vanish on the rounding grid");

    std::vector<IntVec2> pts{{0, B}};
    const double pi = std::acos(-1.0);
    for (std::size_t j = 1; j + 1 < s.samples; ++j) {
        const double u = (1 - std::cos(pi * static_cast<double>(j) / static_cast<double>(s.samples - 1))) / 2;
        const auto x = static_cast<std::int64_t>(std::llround(u * static_cast<double>(A)));
        if (x <= pts.back().x || x >= A) continue;
        const double h = power_height(s, static_cast<double>(x) / D) * D;
        // a small pad keeps the rounding on the safe side of the curve
        const auto y = static_cast<std::int64_t>(concave ? std::ceil(h + 1e-6) : std::floor(h - 1e-6));
        pts.push_back({x, std::clamp<std::int64_t>(y, 0, B)});
    }
    pts.push_back({A, 0});

    // lower hull (concave) keeps left turns, upper hull (convex) right turns
    std::vector<IntVec2> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const IntVec2 u = hull[hull.size() - 1] - hull[hull.size() - 2];
            const IntVec2 v = p - hull.back();
            const __int128 turn = static_cast<__int128>(u.x) * v.y - static_cast<__int128>(u.y) * v.x;
            if (concave ? turn <= 0 : turn >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<Point2> v;
    for (const auto& p : hull) v.push_back({Rational(Integer(p.x), Integer(s.denominator)), Rational(Integer(p.y), Integer(s.denominator))});
    return ToricProfile(s.kind, std::move(v));
}

}  // namespace symcap
