#pragma once

// JSON domain specs and ECH generator files.

#include "symcap/asymptotics.hpp"
#include "symcap/bounds.hpp"
#include "symcap/domain.hpp"
#include "symcap/ech_index.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace symcap {

/// Malformed or invalid input file.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An axis-aligned box in R^4, usable only as a cube-packing target.
struct BoxSpec {
    Point4 lo{}, hi{};
};

struct DomainSpec {
    std::optional<Domain> domain;      // absent for boxes
    std::optional<PowerSpec> power;    // smooth profile behind a polygonalized domain
    std::optional<BoxSpec> box;
};

namespace detail {

using nlohmann::json;

inline Rational json_rational(const json& v, const std::string& what)
{
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_number_float()) return rational_from_double(v.get<double>());
    } catch (const std::exception& e) {
        throw SpecError(what + ": " + e.what());
    }
    throw SpecError(what + ": expected a rational string or number");
}

inline double json_real(const json& v, const std::string& what)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(json_rational(v, what));
    throw SpecError(what + ": expected a number");
}

inline const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object()) throw SpecError(where + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SpecError(where + ": missing \"" + key + "\"");
    return *it;
}

inline ProfileKind parse_kind(const json& j, const std::string& where)
{
    const auto& k = field(j, "kind", where);
    if (k == "concave") return ProfileKind::Concave;
    if (k == "convex") return ProfileKind::Convex;
    throw SpecError(where + ": kind must be \"concave\" or \"convex\"");
}

inline DomainSpec parse_domain_json(const json& j, const std::string& where)
{
    const auto& type_field = field(j, "type", where);
    if (!type_field.is_string()) throw SpecError(where + ": type must be a string");
    const std::string type = type_field.get<std::string>();
    DomainSpec out;
    try {
        if (type == "ball") {
            out.domain = Ball{json_rational(field(j, "a", where), where + ".a")};
        } else if (type == "ellipsoid") {
            out.domain = Ellipsoid{json_rational(field(j, "a", where), where + ".a"),
                                   json_rational(field(j, "b", where), where + ".b")};
        } else if (type == "polydisk") {
            out.domain = Polydisk{json_rational(field(j, "a", where), where + ".a"),
                                  json_rational(field(j, "b", where), where + ".b")};
        } else if (type == "toric") {
            const auto& vs = field(j, "vertices", where);
            if (!vs.is_array()) throw SpecError(where + ".vertices: expected an array");
            std::vector<Point2> pts;
            for (std::size_t i = 0; i < vs.size(); ++i) {
                const std::string w = where + ".vertices[" + std::to_string(i) + "]";
                if (!vs[i].is_array() || vs[i].size() != 2) throw SpecError(w + ": expected a pair");
                pts.push_back({json_rational(vs[i][0], w), json_rational(vs[i][1], w)});
            }
            if (pts.size() < 2) throw SpecError(where + ".vertices: need at least two vertices");
            out.domain = Toric{ToricProfile(parse_kind(j, where), std::move(pts))};
        } else if (type == "profile") {
            const auto& fam = field(j, "family", where);
            if (fam != "power") throw SpecError(where + ": only the \"power\" family is supported");
            PowerSpec s;
            s.kind = parse_kind(j, where);
            s.a = json_real(field(j, "a", where), where + ".a");
            s.b = json_real(field(j, "b", where), where + ".b");
            s.p = json_real(field(j, "p", where), where + ".p");
            if (j.contains("samples")) s.samples = j["samples"].get<std::size_t>();
            if (j.contains("denominator")) s.denominator = j["denominator"].get<std::int64_t>();
            out.domain = Toric{polygonalize(s)};
            out.power = s;
        } else if (type == "union") {
            const auto& parts = field(j, "parts", where);
            if (!parts.is_array() || parts.empty()) throw SpecError(where + ".parts: expected a nonempty array");
            std::vector<Domain> ds;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                auto p = parse_domain_json(parts[i], where + ".parts[" + std::to_string(i) + "]");
                if (!p.domain) throw SpecError(where + ": boxes cannot be union parts");
                ds.push_back(*p.domain);
            }
            out.domain = make_union(std::move(ds));
        } else if (type == "box") {
            BoxSpec b;
            const auto& lo = field(j, "lo", where);
            const auto& hi = field(j, "hi", where);
            if (!lo.is_array() || lo.size() != 4 || !hi.is_array() || hi.size() != 4)
                throw SpecError(where + ": lo and hi must have four entries");
            for (std::size_t i = 0; i < 4; ++i) {
                b.lo[i] = json_real(lo[i], where + ".lo");
                b.hi[i] = json_real(hi[i], where + ".hi");
                if (!(b.lo[i] < b.hi[i])) throw SpecError(where + ": box must have positive extent");
            }
            out.box = b;
        } else {
            throw SpecError(where + ": unknown type \"" + type + "\"");
        }
        if (out.domain) validate(*out.domain);
    } catch (const SpecError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw SpecError(where + ": " + e.what());
    }
    return out;
}

inline json read_json(const std::string& path)
{
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) throw SpecError("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(path + ": " + e.what());
    }
}

template <class Real>
Real json_generator_real(const json& v, const std::string& what)
{
    if constexpr (std::is_same_v<Real, double>)
        return json_real(v, what);
    else
        return json_rational(v, what);
}

template <class Real>
EchGenerator<Real> parse_generator_as(const json& j)
{
    EchGenerator<Real> g;
    const auto& orbits = field(j, "orbits", "generator");
    if (!orbits.is_array()) throw SpecError("generator.orbits: expected an array");
    try {
        for (std::size_t i = 0; i < orbits.size(); ++i) {
            const std::string w = "generator.orbits[" + std::to_string(i) + "]";
            const auto& o = orbits[i];
            OrbitDatum<Real> d;
            d.m = field(o, "m", w).get<std::int64_t>();
            d.action = json_generator_real<Real>(field(o, "A", w), w + ".A");
            d.theta = json_generator_real<Real>(field(o, "theta", w), w + ".theta");
            d.sl = field(o, "sl", w).get<std::int64_t>();
            d.hyperbolic = o.value("hyperbolic", false);
            g.orbits.push_back(d);
        }
        const std::size_t n = g.orbits.size();
        g.linking.assign(n, std::vector<std::int64_t>(n, 0));
        if (j.contains("linking")) {
            const auto& l = j["linking"];
            if (!l.is_array() || l.size() != n) throw SpecError("generator.linking: expected an n x n array");
            for (std::size_t r = 0; r < n; ++r) {
                if (!l[r].is_array() || l[r].size() != n) throw SpecError("generator.linking: expected an n x n array");
                for (std::size_t c = 0; c < n; ++c) {
                    if (r == c) continue;
                    if (l[r][c].is_null()) throw SpecError("generator.linking: off-diagonal entries must be integers");
                    g.linking[r][c] = l[r][c].get<std::int64_t>();
                }
            }
        } else if (n > 1) {
            throw SpecError("generator: missing \"linking\"");
        }
        validate(g);
    } catch (const SpecError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("generator: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("generator: ") + e.what());
    }
    return g;
}

inline bool all_strings(const json& j)
{
    if (!j.contains("orbits") || !j["orbits"].is_array()) return false;
    for (const auto& o : j["orbits"])
        if (!o.is_object() || !o.contains("A") || !o.contains("theta") || !o["A"].is_string() || !o["theta"].is_string())
            return false;
    return true;
}

}  // namespace detail

inline DomainSpec parse_domain_spec(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(e.what());
    }
    return detail::parse_domain_json(j, "domain");
}

inline DomainSpec load_domain_spec(const std::string& path)
{
    return detail::parse_domain_json(detail::read_json(path), "domain");
}

/// Exact when every action and theta is a string, binary64 otherwise.
using AnyGenerator = std::variant<EchGenerator<Rational>, EchGenerator<double>>;

inline AnyGenerator parse_generator(const nlohmann::json& j)
{
    if (detail::all_strings(j)) return detail::parse_generator_as<Rational>(j);
    return detail::parse_generator_as<double>(j);
}

inline AnyGenerator load_generator(const std::string& path) { return parse_generator(detail::read_json(path)); }

}  // namespace symcap
