#pragma once

#include "symcap/geometry.hpp"

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace symcap {

struct Ball {
    Rational a;
};

struct Ellipsoid {
    Rational a, b;
};

struct Polydisk {
    Rational a, b;
};

struct Toric {
    ToricProfile profile;
};

struct Union;

using Domain = std::variant<Ball, Ellipsoid, Polydisk, Toric, std::shared_ptr<const Union>>;

struct Union {
    std::vector<Domain> parts;
};

inline Domain make_union(std::vector<Domain> parts)
{
    if (parts.empty()) throw std::invalid_argument("union needs at least one part");
    return std::make_shared<const Union>(Union{std::move(parts)});
}

inline void validate(const Domain& d)
{
    auto positive = [](const Rational& r, const char* what) {
        if (r <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
    };
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Ball>) {
                positive(x.a, "ball parameter");
            } else if constexpr (std::is_same_v<T, Ellipsoid> || std::is_same_v<T, Polydisk>) {
                positive(x.a, "a");
                positive(x.b, "b");
            } else if constexpr (std::is_same_v<T, std::shared_ptr<const Union>>) {
                if (!x || x->parts.empty()) throw std::invalid_argument("union needs at least one part");
                for (const auto& p : x->parts) validate(p);
            }
        },
        d);
}

inline Rational volume(const Domain& d)
{
    return std::visit(
        [](const auto& x) -> Rational {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return x.a * x.a / 2;
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return x.a * x.b / 2;
            } else if constexpr (std::is_same_v<T, Polydisk>) {
                return x.a * x.b;
            } else if constexpr (std::is_same_v<T, Toric>) {
                return region_area(x.profile);
            } else {
                Rational v = 0;
                for (const auto& p : x->parts) v += volume(p);
                return v;
            }
        },
        d);
}

/// Moment-image profile of a single toric domain; none for unions.
inline std::optional<ToricProfile> toric_profile(const Domain& d)
{
    return std::visit(
        [](const auto& x) -> std::optional<ToricProfile> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return delta_profile(x.a);
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return triangle_profile(x.a, x.b);
            } else if constexpr (std::is_same_v<T, Polydisk>) {
                return rectangle_profile(x.a, x.b);
            } else if constexpr (std::is_same_v<T, Toric>) {
                return x.profile;
            } else {
                return std::nullopt;
            }
        },
        d);
}

/// Ruelle invariant a(Omega) + b(Omega) of a toric domain.
inline std::optional<Rational> ruelle_of(const Domain& d)
{
    auto p = toric_profile(d);
    if (!p) return std::nullopt;
    return p->a() + p->b();
}

}  // namespace symcap
