#pragma once

// ECH capacities c_k by every available route: closed forms for balls and
// polydisks, the ball-packing dynamic program over a weight expansion, the
// two lattice-path optimizations, and the ball-complement splitting for
// convex domains.

#include "symcap/domain.hpp"
#include "symcap/lattice_paths.hpp"
#include "symcap/parallel.hpp"
#include "symcap/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace symcap {

enum class Method { BallClosedForm, PolydiskClosedForm, WeightDP, ConvexPathMin, ConcavePathMax, Complement, UnionDP };

inline const char* to_string(Method m)
{
    switch (m) {
    case Method::BallClosedForm: return "ball-closed-form";
    case Method::PolydiskClosedForm: return "polydisk-closed-form";
    case Method::WeightDP: return "weights";
    case Method::ConvexPathMin: return "convex-path";
    case Method::ConcavePathMax: return "concave-path";
    case Method::Complement: return "complement";
    case Method::UnionDP: return "union";
    }
    return "?";
}

/// Minimizing (k', k'') of the complement formula and the box it was found in.
struct ComplementSplit {
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    std::int64_t slack = 0;

    friend bool operator==(const ComplementSplit&, const ComplementSplit&) = default;
};

using Witness = std::variant<std::monostate, LatticePath, std::vector<std::int64_t>, ComplementSplit>;

struct CapacityResult {
    std::int64_t k = 0;
    Rational value;
    Method method = Method::BallClosedForm;
    Witness witness;
    bool lower_bound_only = false;
};

/// Raised when a method cannot be applied to a domain.
class MethodMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_k(std::int64_t k)
{
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
}

inline std::int64_t isqrt(std::int64_t n)
{
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms

/// The d with d^2 + d <= 2k <= d^2 + 3d.
inline std::int64_t ball_index(std::int64_t k)
{
    detail::require_k(k);
    std::int64_t d = (detail::isqrt(8 * k + 1) - 1) / 2;
    return d;
}

inline Rational ck_ball(const Rational& a, std::int64_t k)
{
    if (a <= 0) throw std::invalid_argument("ball parameter must be positive");
    return Rational(ball_index(k)) * a;
}

/// min { a m + b n : (m+1)(n+1) >= k+1 }.  An optimal pair has min(m, n)
/// at most sqrt(k+1), so only O(sqrt k) candidates are needed.
inline Rational ck_polydisk(const Rational& a, const Rational& b, std::int64_t k)
{
    if (a <= 0 || b <= 0) throw std::invalid_argument("polydisk parameters must be positive");
    detail::require_k(k);
    if (k == 0) return 0;
    const std::int64_t s = detail::isqrt(k + 1) + 1;
    std::optional<Rational> best;
    for (std::int64_t i = 0; i <= std::min(s, k); ++i) {
        const std::int64_t j = (k + 1 + i) / (i + 1) - 1;   // ceil((k+1)/(i+1)) - 1
        for (const Rational& v : {a * i + b * j, a * j + b * i})
            if (!best || v < *best) best = v;
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Disjoint unions of balls

namespace detail {

/// best[t] = max sum w_i d_i subject to sum (d_i^2 + d_i) <= t.
template <class V>
struct BallUnionTable {
    std::vector<V> best;
    std::vector<std::vector<std::uint16_t>> choice;   // per item, per budget
};

template <class V>
BallUnionTable<V> ball_union_table(const std::vector<V>& w, std::int64_t budget, bool keep_choices)
{
    BallUnionTable<V> out;
    out.best.assign(static_cast<std::size_t>(budget + 1), V(0));
    auto& best = out.best;
    for (const V& a : w) {
        std::vector<std::uint16_t> pick;
        if (keep_choices) pick.assign(static_cast<std::size_t>(budget + 1), 0);
        for (std::int64_t t = budget; t >= 2; --t) {
            V top = best[static_cast<std::size_t>(t)];
            std::uint16_t arg = 0;
            V gain = a;
            for (std::int64_t d = 1; d * d + d <= t; ++d, gain += a) {
                V cand = best[static_cast<std::size_t>(t - d * d - d)] + gain;
                if (cand > top) {
                    top = std::move(cand);
                    arg = static_cast<std::uint16_t>(d);
                }
            }
            best[static_cast<std::size_t>(t)] = std::move(top);
            if (keep_choices) pick[static_cast<std::size_t>(t)] = arg;
        }
        if (keep_choices) out.choice.push_back(std::move(pick));
    }
    return out;
}

/// Integer rescaling of the weights when every partial sum fits in 64 bits.
inline std::optional<std::pair<std::vector<std::int64_t>, Integer>> scaled_weights(const std::vector<Rational>& w,
                                                                                    std::int64_t budget)
{
    Integer d = 1;
    Rational top = 0;
    for (const auto& x : w) {
        d = lcm(d, denominator(x));
        top = std::max(top, x);
    }
    // sum a_i d_i <= max a * sum d_i <= max a * budget
    if (top * d * (budget + 1) >= Rational(Integer(1) << 62)) return std::nullopt;
    std::vector<std::int64_t> out;
    for (const auto& x : w) out.push_back(to_int64(numerator(x * d)));
    return std::make_pair(std::move(out), d);
}

struct BallUnionSolution {
    Rational value;
    std::vector<std::int64_t> multiplicities;
};

inline std::vector<Rational> ball_union_values(std::vector<Rational> w, std::int64_t kmax)
{
    if (static_cast<std::int64_t>(w.size()) > kmax) w.resize(static_cast<std::size_t>(kmax));
    const std::int64_t budget = 2 * kmax;
    std::vector<Rational> out;
    if (auto s = scaled_weights(w, budget)) {
        const auto table = ball_union_table(s->first, budget, false);
        for (std::int64_t k = 0; k <= kmax; ++k)
            out.emplace_back(Integer(table.best[static_cast<std::size_t>(2 * k)]), s->second);
    } else {
        const auto table = ball_union_table(w, budget, false);
        for (std::int64_t k = 0; k <= kmax; ++k) out.push_back(table.best[static_cast<std::size_t>(2 * k)]);
    }
    return out;
}

template <class V>
std::vector<std::int64_t> backtrack(const BallUnionTable<V>& table, std::int64_t budget)
{
    std::vector<std::int64_t> d(table.choice.size(), 0);
    std::int64_t t = budget;
    for (std::size_t i = table.choice.size(); i-- > 0;) {
        d[i] = table.choice[i][static_cast<std::size_t>(t)];
        t -= d[i] * d[i] + d[i];
    }
    return d;
}

inline BallUnionSolution ball_union_solve(std::vector<Rational> w, std::int64_t k)
{
    const std::size_t full = w.size();
    if (static_cast<std::int64_t>(w.size()) > k) w.resize(static_cast<std::size_t>(k));
    const std::int64_t budget = 2 * k;
    BallUnionSolution out;
    if (auto s = scaled_weights(w, budget)) {
        const auto table = ball_union_table(s->first, budget, true);
        out.value = Rational(Integer(table.best.back()), s->second);
        out.multiplicities = backtrack(table, budget);
    } else {
        const auto table = ball_union_table(w, budget, true);
        out.value = table.best.back();
        out.multiplicities = backtrack(table, budget);
    }
    out.multiplicities.resize(full, 0);
    return out;
}

}  // namespace detail

struct BallUnionResult {
    Rational value;
    std::vector<std::int64_t> multiplicities;   // d_i for each weight
    bool lower_bound_only = false;
};

/// max { sum a_i d_i : sum (d_i^2 + d_i) <= 2k }.  Only the k largest weights
/// can carry a positive d_i, so a truncated expansion that still holds k
/// weights gives the exact value.
inline BallUnionResult ck_ball_union(const WeightExpansion& w, std::int64_t k)
{
    detail::require_k(k);
    auto sol = detail::ball_union_solve(w.weights, k);
    return {std::move(sol.value), std::move(sol.multiplicities),
            w.truncated && static_cast<std::int64_t>(w.weights.size()) < k};
}

/// c_0 .. c_kmax of the ball union, from a single table.
inline std::vector<Rational> ball_union_capacities(const WeightExpansion& w, std::int64_t kmax)
{
    detail::require_k(kmax);
    return detail::ball_union_values(w.weights, kmax);
}

/// Max-plus convolution of capacity sequences: max over k_1 + ... = k of
/// sum c_{k_i}(X_i).  Every part must supply c_0 .. c_kmax.
inline std::vector<Rational> union_capacities(const std::vector<std::vector<Rational>>& parts, std::int64_t kmax)
{
    detail::require_k(kmax);
    if (parts.empty()) throw std::invalid_argument("union needs at least one part");
    const auto n = static_cast<std::size_t>(kmax + 1);
    for (const auto& p : parts)
        if (p.size() < n) throw std::invalid_argument("union part does not supply enough capacities");
    std::vector<Rational> acc(parts.front().begin(), parts.front().begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t i = 1; i < parts.size(); ++i) {
        std::vector<Rational> next(n);
        for (std::size_t k = 0; k < n; ++k) {
            Rational best = acc[k] + parts[i][0];
            for (std::size_t j = 1; j <= k; ++j) best = std::max(best, Rational(acc[k - j] + parts[i][j]));
            next[k] = std::move(best);
        }
        acc = std::move(next);
    }
    return acc;
}

inline Rational ck_union(const std::vector<std::vector<Rational>>& parts, std::int64_t k)
{
    return union_capacities(parts, k).back();
}

// ---------------------------------------------------------------------------
// Concave domains

inline CapacityResult ck_concave_weights(const ToricProfile& omega, std::int64_t k, const WeightOptions& opts = {})
{
    detail::require_k(k);
    const auto w = weight_expansion(omega, opts);
    auto r = ck_ball_union(w, k);
    return {k, std::move(r.value), Method::WeightDP, std::move(r.multiplicities), r.lower_bound_only};
}

/// c_0 .. c_kmax through the weight expansion; entries with k above the
/// number of harvested weights of a truncated run are lower bounds.
inline std::vector<CapacityResult> concave_weight_capacities(const ToricProfile& omega, std::int64_t kmax,
                                                             const WeightOptions& opts = {})
{
    const auto w = weight_expansion(omega, opts);
    const auto values = ball_union_capacities(w, kmax);
    std::vector<CapacityResult> out;
    for (std::int64_t k = 0; k <= kmax; ++k)
        out.push_back({k, values[static_cast<std::size_t>(k)], Method::WeightDP, {},
                       w.truncated && static_cast<std::int64_t>(w.weights.size()) < k});
    return out;
}

inline CapacityResult ck_concave_path(const ToricProfile& omega, std::int64_t k)
{
    auto r = solve_concave_path(omega, k);
    return {k, std::move(r.value), Method::ConcavePathMax, std::move(r.witness), false};
}

inline Rational ck_ellipsoid(const Rational& a, const Rational& b, std::int64_t k)
{
    if (a <= 0 || b <= 0) throw std::invalid_argument("ellipsoid parameters must be positive");
    return ck_concave_weights(triangle_profile(a, b), k).value;
}

// ---------------------------------------------------------------------------
// Convex domains

inline CapacityResult ck_convex_path(const ToricProfile& omega, std::int64_t k)
{
    auto r = solve_convex_path(omega, k);
    return {k, std::move(r.value), Method::ConvexPathMin, std::move(r.witness), false};
}

/// Smallest triangle Delta(c) containing a convex Omega, and the two
/// components of Delta(c) minus Omega straightened into concave profiles by
/// phi'(x, y) = (c - x - y, x) and phi''(x, y) = (y, c - x - y).
struct ComplementPieces {
    Rational c;
    std::optional<ToricProfile> left;
    std::optional<ToricProfile> right;
};

inline ComplementPieces complement_pieces(const ToricProfile& omega)
{
    if (omega.kind() != ProfileKind::Convex) throw std::invalid_argument("complement needs a convex profile");
    const auto& v = omega.vertices();
    ComplementPieces out;
    out.c = v.front().mu1 + v.front().mu2;
    for (const auto& w : v) out.c = std::max(out.c, w.mu1 + w.mu2);
    std::size_t first = v.size(), last = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].mu1 + v[i].mu2 == out.c) {
            first = std::min(first, i);
            last = i;
        }
    }
    const Rational& c = out.c;
    if (first > 0) {
        std::vector<Point2> w;
        for (std::size_t i = first + 1; i-- > 0;) w.push_back({c - v[i].mu1 - v[i].mu2, v[i].mu1});
        out.left.emplace(ProfileKind::Concave, std::move(w));
    }
    if (last + 1 < v.size()) {
        std::vector<Point2> w;
        for (std::size_t i = v.size(); i-- > last;) w.push_back({v[i].mu2, c - v[i].mu1 - v[i].mu2});
        out.right.emplace(ProfileKind::Concave, std::move(w));
    }
    return out;
}

namespace detail {

struct PieceSeries {
    std::vector<Rational> values;
    bool exact = true;
};

inline PieceSeries piece_series(const std::optional<ToricProfile>& piece, std::int64_t kmax, const WeightOptions& opts)
{
    if (!piece) return {std::vector<Rational>(static_cast<std::size_t>(kmax + 1), Rational(0)), true};
    const auto w = weight_expansion(*piece, opts);
    return {ball_union_capacities(w, kmax), !w.truncated || static_cast<std::int64_t>(w.weights.size()) >= kmax};
}

inline CapacityResult complement_min(const ComplementPieces& pieces, const PieceSeries& left,
                                     const PieceSeries& right, std::int64_t k, std::int64_t slack)
{
    std::optional<Rational> best;
    ComplementSplit arg{0, 0, slack};
    for (std::int64_t k1 = 0; k1 <= slack; ++k1) {
        for (std::int64_t k2 = 0; k2 <= slack; ++k2) {
            Rational v = ck_ball(pieces.c, k + k1 + k2) - left.values[static_cast<std::size_t>(k1)] -
                         right.values[static_cast<std::size_t>(k2)];
            if (!best || v < *best) {
                best = std::move(v);
                arg = {k1, k2, slack};
            }
        }
    }
    return {k, *best, Method::Complement, arg, !(left.exact && right.exact)};
}

}  // namespace detail

/// min over 0 <= k', k'' <= slack of
///   c_{k+k'+k''}(B(c)) - c_{k'}(X') - c_{k''}(X''),
/// with the lexicographically smallest minimizer reported.
inline CapacityResult ck_convex_complement(const ToricProfile& omega, std::int64_t k, std::int64_t slack,
                                           const WeightOptions& opts = {})
{
    detail::require_k(k);
    if (slack < 0) throw std::invalid_argument("slack must be nonnegative");
    const auto pieces = complement_pieces(omega);
    const auto left = detail::piece_series(pieces.left, slack, opts);
    const auto right = detail::piece_series(pieces.right, slack, opts);
    return detail::complement_min(pieces, left, right, k, slack);
}

namespace detail {

/// A rational upper bound for sqrt(x), x >= 0.
inline Rational sqrt_upper(const Rational& x)
{
    if (x <= 0) return 0;
    Rational r = rational_from_double(std::sqrt(to_double(x)) * (1 + 1e-12));
    while (r * r < x) r *= Rational(1000001, 1000000);
    return r;
}

}  // namespace detail

/// The complement formula over all k', k'' >= 0, with a certified cutoff.
/// Writing K = k' + k'', the inner maximum of c_k'(X') + c_k''(X'') is the
/// capacity of the ball union over both pieces' weights, which is at most
/// sqrt(2 S K) with S = c^2 - 2 area(Omega); and c_N(B(c)) > c (sqrt(2N) - 3/2).
/// So every K with sqrt(2) (c - sqrt(S)) sqrt(K) > best + 3c/2 is worse than
/// the best value found below it.  The witness reports the minimizing split
/// with the smallest K, then the smallest k', and slack = the searched bound on K.
inline CapacityResult ck_convex_complement_stable(const ToricProfile& omega, std::int64_t k,
                                                  const WeightOptions& opts = {}, std::int64_t max_total = 1 << 20)
{
    detail::require_k(k);
    const auto pieces = complement_pieces(omega);
    const Rational& c = pieces.c;
    const Rational delta = c - detail::sqrt_upper(c * c - 2 * region_area(omega));
    if (delta <= 0) throw std::logic_error("complement cutoff is degenerate");

    std::vector<Rational> all;
    std::optional<WeightExpansion> wl, wr;
    if (pieces.left) wl = weight_expansion(*pieces.left, opts);
    if (pieces.right) wr = weight_expansion(*pieces.right, opts);
    for (const auto* w : {&wl, &wr})
        if (*w) all.insert(all.end(), (*w)->weights.begin(), (*w)->weights.end());
    std::sort(all.begin(), all.end(), [](const Rational& x, const Rational& y) { return x > y; });

    std::int64_t bound = 2 * std::max<std::int64_t>(k, 4);
    for (;;) {
        const auto joint = detail::ball_union_values(all, bound);
        Rational best = ck_ball(c, k) - joint[0];
        std::int64_t arg = 0;
        for (std::int64_t t = 1; t <= bound; ++t) {
            Rational v = ck_ball(c, k + t) - joint[static_cast<std::size_t>(t)];
            if (v < best) best = std::move(v), arg = t;
        }
        const Rational reach = best + 3 * c / 2;
        const Rational ratio = reach * reach / (2 * delta * delta);
        const std::int64_t cutoff = to_int64(Integer(floor(ratio))) + 1;
        if (cutoff <= bound + 1) {
            auto series = [&](const std::optional<WeightExpansion>& w) {
                return w ? detail::ball_union_values(w->weights, arg) : std::vector<Rational>(static_cast<std::size_t>(arg + 1));
            };
            const auto left = series(wl), right = series(wr);
            const Rational target = ck_ball(c, k + arg) - best;
            ComplementSplit split{0, 0, bound};
            for (std::int64_t k1 = 0; k1 <= arg; ++k1) {
                if (left[static_cast<std::size_t>(k1)] + right[static_cast<std::size_t>(arg - k1)] == target) {
                    split.k1 = k1;
                    split.k2 = arg - k1;
                    break;
                }
            }
            auto exact = [&](const std::optional<WeightExpansion>& w) {
                return !w || !w->truncated || static_cast<std::int64_t>(w->weights.size()) >= bound;
            };
            return {k, std::move(best), Method::Complement, split, !(exact(wl) && exact(wr))};
        }
        if (cutoff > max_total) throw std::runtime_error("complement cutoff exceeds the search limit");
        bound = cutoff;
    }
}

// ---------------------------------------------------------------------------
// Sequences over a domain

enum class MethodChoice { Auto, Closed, Weights, Path, Complement };

inline const char* to_string(MethodChoice m)
{
    switch (m) {
    case MethodChoice::Auto: return "auto";
    case MethodChoice::Closed: return "closed";
    case MethodChoice::Weights: return "weights";
    case MethodChoice::Path: return "path";
    case MethodChoice::Complement: return "complement";
    }
    return "?";
}

struct SequenceOptions {
    WeightOptions weights;
    unsigned threads = 1;
};

namespace detail {

/// The profile viewed as the requested kind; a single segment is both.
inline std::optional<ToricProfile> as_kind(const ToricProfile& p, ProfileKind kind)
{
    if (p.kind() == kind) return p;
    if (p.vertices().size() == 2) return p.with_kind(kind);
    return std::nullopt;
}

inline std::vector<CapacityResult> from_values(const std::vector<Rational>& values, Method m)
{
    std::vector<CapacityResult> out;
    for (std::size_t k = 0; k < values.size(); ++k) out.push_back({static_cast<std::int64_t>(k), values[k], m, {}, false});
    return out;
}

inline std::vector<CapacityResult> profile_sequence(const ToricProfile& p, std::int64_t kmax, MethodChoice m,
                                                    const SequenceOptions& opts)
{
    const auto concave = as_kind(p, ProfileKind::Concave);
    const auto convex = as_kind(p, ProfileKind::Convex);
    switch (m) {
    case MethodChoice::Auto:
        if (concave) return concave_weight_capacities(*concave, kmax, opts.weights);
        return from_values(convex_path_capacities(*convex, kmax), Method::ConvexPathMin);
    case MethodChoice::Weights:
        if (!concave) throw MethodMismatch("weight expansion needs a concave domain");
        return concave_weight_capacities(*concave, kmax, opts.weights);
    case MethodChoice::Path:
        if (concave) return from_values(concave_path_capacities(*concave, kmax), Method::ConcavePathMax);
        return from_values(convex_path_capacities(*convex, kmax), Method::ConvexPathMin);
    case MethodChoice::Complement: {
        if (!convex) throw MethodMismatch("complement splitting needs a convex domain");
        std::vector<CapacityResult> out(static_cast<std::size_t>(kmax + 1));
        parallel_for(out.size(), opts.threads, [&](std::size_t k) {
            out[k] = ck_convex_complement_stable(*convex, static_cast<std::int64_t>(k), opts.weights);
        });
        return out;
    }
    case MethodChoice::Closed: throw MethodMismatch("no closed form for this domain");
    }
    throw MethodMismatch("unknown method");
}

}  // namespace detail

/// c_0 .. c_kmax of a domain.  Auto picks a closed form for balls and
/// polydisks, the weight expansion for concave domains, and the convex path
/// solver otherwise; unions combine their parts' auto sequences.
inline std::vector<CapacityResult> capacity_sequence(const Domain& domain, std::int64_t kmax,
                                                     MethodChoice method = MethodChoice::Auto,
                                                     const SequenceOptions& opts = {})
{
    detail::require_k(kmax);
    validate(domain);
    std::vector<CapacityResult> out;
    if (const auto* ball = std::get_if<Ball>(&domain);
        ball && (method == MethodChoice::Auto || method == MethodChoice::Closed)) {
        for (std::int64_t k = 0; k <= kmax; ++k) out.push_back({k, ck_ball(ball->a, k), Method::BallClosedForm, {}, false});
    } else if (const auto* poly = std::get_if<Polydisk>(&domain);
               poly && (method == MethodChoice::Auto || method == MethodChoice::Closed)) {
        for (std::int64_t k = 0; k <= kmax; ++k)
            out.push_back({k, ck_polydisk(poly->a, poly->b, k), Method::PolydiskClosedForm, {}, false});
    } else if (const auto* u = std::get_if<std::shared_ptr<const Union>>(&domain)) {
        std::vector<std::vector<Rational>> parts;
        std::vector<bool> approx(static_cast<std::size_t>(kmax + 1), false);
        for (const auto& part : (*u)->parts) {
            const auto seq = capacity_sequence(part, kmax, method, opts);
            std::vector<Rational> values;
            for (const auto& r : seq) {
                values.push_back(r.value);
                if (r.lower_bound_only) approx[static_cast<std::size_t>(r.k)] = true;
            }
            parts.push_back(std::move(values));
        }
        const auto values = union_capacities(parts, kmax);
        bool flagged = false;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            flagged = flagged || approx[static_cast<std::size_t>(k)];
            out.push_back({k, values[static_cast<std::size_t>(k)], Method::UnionDP, {}, flagged});
        }
    } else {
        if (method == MethodChoice::Closed) throw MethodMismatch("no closed form for this domain");
        const auto profile = toric_profile(domain);
        out = detail::profile_sequence(*profile, kmax, method, opts);
    }
    for (std::size_t k = 1; k < out.size(); ++k)
        if (out[k].value < out[k - 1].value) throw std::logic_error("capacity sequence is not nondecreasing");
    if (!out.empty() && out.front().value != 0) throw std::logic_error("c_0 must vanish");
    return out;
}

}  // namespace symcap
