#pragma once

// Weight expansion of a concave toric domain: repeatedly inscribe the largest
// triangle Delta(c), then straighten the two leftover pieces by integral
// affine maps and recurse.

#include "symcap/geometry.hpp"

#include <optional>
#include <queue>
#include <utility>
#include <vector>

namespace symcap {

struct WeightExpansion {
    std::vector<Rational> weights;   // nonincreasing
    Rational remainder_area = 0;
    bool truncated = false;
};

struct WeightOptions {
    std::optional<Rational> min_weight;   // default a(Omega) * 2^-20
    std::size_t max_terms = 4096;
};

/// Largest c with Delta(c) inside Omega.
inline Rational inscribed_triangle_size(const ToricProfile& omega)
{
    if (omega.kind() != ProfileKind::Concave) throw std::invalid_argument("inscribed triangle needs a concave profile");
    const auto& v = omega.vertices();
    Rational c = v.front().mu1 + v.front().mu2;
    for (const auto& w : v) c = std::min(c, w.mu1 + w.mu2);
    return c;
}

struct SplitPieces {
    std::optional<ToricProfile> left;
    std::optional<ToricProfile> right;
};

/// The two components of Omega minus Delta(c), carried back to concave
/// profiles by phi'(x, y) = (x, x + y - c) and phi''(x, y) = (x + y - c, y).
inline SplitPieces split(const ToricProfile& omega, const Rational& c)
{
    if (c != inscribed_triangle_size(omega)) throw std::invalid_argument("split level is not the inscribed triangle size");
    const auto& v = omega.vertices();
    std::size_t first = v.size(), last = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].mu1 + v[i].mu2 == c) {
            first = std::min(first, i);
            last = i;
        }
    }

    SplitPieces out;
    if (first > 0) {
        std::vector<Point2> w;
        for (std::size_t i = 0; i <= first; ++i) w.push_back({v[i].mu1, v[i].mu1 + v[i].mu2 - c});
        out.left.emplace(ProfileKind::Concave, std::move(w));
    }
    if (last + 1 < v.size()) {
        std::vector<Point2> w;
        for (std::size_t i = last; i < v.size(); ++i) w.push_back({v[i].mu1 + v[i].mu2 - c, v[i].mu2});
        // A flat tail along the axis leaves nothing behind.
        if (w.front().mu2 > 0) out.right.emplace(ProfileKind::Concave, std::move(w));
    }
    return out;
}

/// Weights are produced largest first, so a truncated run still returns an
/// exact prefix of the full sorted expansion.
inline WeightExpansion weight_expansion(const ToricProfile& omega, const WeightOptions& opts = {})
{
    if (omega.kind() != ProfileKind::Concave) throw std::invalid_argument("weight expansion needs a concave profile");
    if (opts.max_terms < 1) throw std::invalid_argument("max_terms must be at least 1");
    const Rational min_weight = opts.min_weight ? *opts.min_weight : omega.a() / Rational(Integer(1) << 20);
    if (min_weight < 0) throw std::invalid_argument("min_weight must be nonnegative");

    struct Node {
        Rational c;
        std::uint64_t order;
        ToricProfile profile;
    };
    auto lower = [](const Node& x, const Node& y) { return x.c != y.c ? x.c < y.c : x.order > y.order; };
    std::priority_queue<Node, std::vector<Node>, decltype(lower)> queue(lower);

    WeightExpansion out;
    std::uint64_t order = 0;
    auto offer = [&](const ToricProfile& p, const Rational& parent) {
        Rational c = inscribed_triangle_size(p);
        if (c > parent) throw std::logic_error("weight expansion child exceeds its parent");
        if (c < min_weight) {
            out.remainder_area += region_area(p);
            out.truncated = true;
            return;
        }
        queue.push({std::move(c), order++, p});
    };

    offer(omega, inscribed_triangle_size(omega));
    while (!queue.empty()) {
        if (out.weights.size() == opts.max_terms) {
            while (!queue.empty()) {
                out.remainder_area += region_area(queue.top().profile);
                queue.pop();
            }
            out.truncated = true;
            break;
        }
        Node node = queue.top();
        queue.pop();
        out.weights.push_back(node.c);
        auto pieces = split(node.profile, node.c);
        if (pieces.left) offer(*pieces.left, node.c);
        if (pieces.right) offer(*pieces.right, node.c);
    }
    return out;
}

inline Rational weight_sum(const WeightExpansion& w)
{
    Rational s = 0;
    for (const auto& x : w.weights) s += x;
    return s;
}

/// a(Omega) + b(Omega) - affine length of the boundary.
inline Rational mcduff_target(const ToricProfile& omega) { return omega.a() + omega.b() - affine_length(omega); }

}  // namespace symcap
