#pragma once

// The symcap command line.  stdout carries data only; diagnostics go to the
// error stream.

#include "symcap/asymptotics.hpp"
#include "symcap/bounds.hpp"
#include "symcap/capacities.hpp"
#include "symcap/ech_index.hpp"
#include "symcap/ruelle.hpp"
#include "symcap/spec_io.hpp"
#include "symcap/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace symcap::cli {

enum Exit : int {
    kOk = 0,
    kUsage = 1,         // bad flags, or an unexpected failure
    kBadSpec = 2,       // input file missing, malformed or invalid
    kMismatch = 3,      // valid input the requested operation cannot handle
    kEmptyWindow = 4,
};

class Mismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline unsigned resolve_threads(int flag)
{
    if (flag > 0) return static_cast<unsigned>(flag);
    if (const char* env = std::getenv("SYMCAP_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw CLI::ValidationError("SYMCAP_THREADS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    return default_threads();
}

inline MethodChoice parse_method(const std::string& m)
{
    static const std::map<std::string, MethodChoice> names{{"auto", MethodChoice::Auto},
                                                           {"closed", MethodChoice::Closed},
                                                           {"weights", MethodChoice::Weights},
                                                           {"path", MethodChoice::Path},
                                                           {"complement", MethodChoice::Complement}};
    return names.at(m);
}

inline const Domain& need_domain(const DomainSpec& s, const char* what)
{
    if (!s.domain) throw Mismatch(std::string(what) + " needs a toric domain, not a box");
    return *s.domain;
}

inline ToricProfile need_profile(const DomainSpec& s, const char* what)
{
    const auto p = toric_profile(need_domain(s, what));
    if (!p) throw Mismatch(std::string(what) + " needs a single toric domain, not a union");
    return *p;
}

inline void approximation_note(const DomainSpec& s, std::ostream& err)
{
    if (!s.power) return;
    err << "note: " << s.power->samples << "-sample polygon "
        << (s.power->kind == ProfileKind::Concave ? "contains the smooth domain; capacities are upper bounds"
                                                   : "lies inside the smooth domain; capacities are lower bounds")
        << "\n";
}

inline const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace detail

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

inline int cmd_capacities(const DomainSpec& spec, std::int64_t kmax, const std::string& method, const std::string& format,
                          unsigned threads, Streams io)
{
    SequenceOptions opts;
    opts.threads = threads;
    const auto caps = capacity_sequence(detail::need_domain(spec, "capacities"), kmax, detail::parse_method(method), opts);
    detail::approximation_note(spec, io.err);
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : caps)
            rows.push_back({{"k", r.k},
                            {"c_k", to_string(r.value)},
                            {"c_k_float", to_double(r.value)},
                            {"method", to_string(r.method)},
                            {"lower_bound_only", r.lower_bound_only}});
        io.out << rows.dump(1) << "\n";
    } else {
        io.out << "k,c_k,c_k_float,method,lower_bound_only\n";
        for (const auto& r : caps)
            io.out << r.k << ',' << to_string(r.value) << ',' << format_double(to_double(r.value)) << ','
                   << to_string(r.method) << ',' << detail::flag(r.lower_bound_only) << '\n';
    }
    return kOk;
}

inline int cmd_error_term(const DomainSpec& spec, std::int64_t kmax, double window, unsigned threads, Streams io)
{
    const Domain& d = detail::need_domain(spec, "error-term");
    SequenceOptions opts;
    opts.threads = threads;
    const auto s = error_series(capacity_sequence(d, kmax, MethodChoice::Auto, opts), volume(d), ruelle_of(d), window);
    detail::approximation_note(spec, io.err);
    io.out << "k,c_k,e_k\n";
    for (std::size_t i = 0; i < s.ks.size(); ++i)
        io.out << s.ks[i] << ',' << to_string(s.c[i]) << ',' << format_double(s.e[i]) << '\n';
    io.out << "# window " << s.stats.window.lo << ".." << s.stats.window.hi << " min " << format_double(s.stats.min)
           << " max " << format_double(s.stats.max) << " mean " << format_double(s.stats.mean);
    if (s.ruelle_half) io.out << " target " << format_double(*s.ruelle_half) << " deviation " << format_double(*s.deviation);
    io.out << '\n';
    return kOk;
}

inline int cmd_ruelle(const DomainSpec& spec, std::size_t nodes, Streams io)
{
    io.out << "quantity,value\n";
    if (spec.power) {
        const auto& p = *spec.power;
        const Rational closed = ruelle_toric(rational_from_double(p.a), rational_from_double(p.b));
        io.out << "closed_form," << to_string(closed) << "\nclosed_form_float," << format_double(to_double(closed)) << '\n';
        const auto side = p.kind == ProfileKind::Concave ? PowerSide::ConcaveDomain : PowerSide::ConvexDomain;
        const auto q = ruelle_integral(SmoothProfile::power(p.a, p.b, p.p, side), nodes);
        io.out << "quadrature," << format_double(q.value) << "\nmax_residual," << format_double(q.max_residual)
               << "\nnodes," << q.nodes << '\n';
        return kOk;
    }
    const auto prof = detail::need_profile(spec, "ruelle");
    const Rational closed = ruelle_toric(prof.a(), prof.b());
    io.out << "closed_form," << to_string(closed) << "\nclosed_form_float," << format_double(to_double(closed)) << '\n';
    return kOk;
}

inline int cmd_obstruct(const DomainSpec& source, const DomainSpec& target, const std::string& area_tol, Streams io)
{
    Rational tol;
    try {
        tol = parse_rational(area_tol);
    } catch (const std::exception& e) {
        throw SpecError(std::string("--area-tol: ") + e.what());
    }
    const auto r = embedding_obstruction(detail::need_profile(source, "obstruct"), detail::need_profile(target, "obstruct"), tol);
    io.err << "note: both domains are assumed to satisfy the error-term asymptotics\n";
    io.out << "quantity,value\nverdict," << to_string(r.verdict) << "\nsource_sum," << to_string(r.source_sum)
           << "\ntarget_sum," << to_string(r.target_sum) << "\nsource_area," << to_string(r.source_area)
           << "\ntarget_area," << to_string(r.target_area) << "\nhypotheses,asserted-by-caller\n";
    return kOk;
}

inline int cmd_cube_bound(const DomainSpec& spec, int depth, const std::vector<std::int64_t>& ks, int subsample,
                          unsigned threads, Streams io)
{
    MembershipOracle oracle;
    double vol = 1;
    if (spec.box) {
        oracle = box_oracle(spec.box->lo, spec.box->hi);
        for (int i = 0; i < 4; ++i) vol *= spec.box->hi[i] - spec.box->lo[i];
    } else {
        const auto prof = detail::need_profile(spec, "cube-bound");
        oracle = toric_oracle(prof);
        vol = to_double(region_area(prof));
    }
    PackOptions opts;
    opts.threads = threads;
    opts.subsample = subsample;
    io.out << "k,level,lower_bound,ratio,truncated\n";
    for (const auto& r : exponent_scan(oracle, vol, depth, ks, opts)) {
        io.out << r.k << ',' << r.level << ',' << format_double(r.bound) << ',' << format_double(r.ratio) << ','
               << detail::flag(r.truncated) << '\n';
        if (r.truncated) io.err << "warning: k = " << r.k << " needs level " << r.level << " > depth " << depth << "\n";
    }
    return kOk;
}

inline int cmd_ech_index(const AnyGenerator& gen, bool boundary, Streams io)
{
    IndexOptions opts{boundary};
    return std::visit(
        [&](const auto& g) {
            using Real = typename std::decay_t<decltype(g.orbits)>::value_type;
            if constexpr (std::is_same_v<Real, OrbitDatum<double>>) {
                for (const auto& w : theta_warnings(g)) io.err << "warning: " << w << "\n";
            }
            const auto index = ech_index(g, opts);
            const auto approx = approx_index(g);
            const auto gap = gap_check(g, opts);
            auto show = [](const auto& x) {
                if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>)
                    return format_double(x);
                else
                    return to_string(x);
            };
            io.out << "I,I_approx,gap,bound,ok\n"
                   << index << ',' << show(approx) << ',' << show(gap.gap) << ',' << gap.bound << ','
                   << detail::flag(gap.ok) << '\n';
            return static_cast<int>(kOk);
        },
        gen);
}

inline int cmd_weights(const DomainSpec& spec, const std::string& min_weight, std::size_t max_terms, Streams io)
{
    const auto prof = symcap::detail::as_kind(detail::need_profile(spec, "weights"), ProfileKind::Concave);
    if (!prof) throw Mismatch("weights needs a concave domain");
    WeightOptions opts;
    opts.max_terms = max_terms;
    if (!min_weight.empty()) {
        try {
            opts.min_weight = parse_rational(min_weight);
        } catch (const std::exception& e) {
            throw SpecError(std::string("--min-weight: ") + e.what());
        }
    }
    const auto w = weight_expansion(*prof, opts);
    io.out << "index,weight,weight_float\n";
    for (std::size_t i = 0; i < w.weights.size(); ++i)
        io.out << i + 1 << ',' << to_string(w.weights[i]) << ',' << format_double(to_double(w.weights[i])) << '\n';
    const Rational sum = weight_sum(w), target = mcduff_target(*prof);
    io.out << "# remainder_area " << to_string(w.remainder_area) << "\n# sum " << to_string(sum) << "\n# target "
           << to_string(target) << "\n# check "
           << (w.truncated ? "skipped (truncated)" : (sum == target ? "equal" : "differs")) << '\n';
    return kOk;
}

/// Parses the command line and runs one subcommand; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ECH capacities, Ruelle invariants and error terms of toric domains", "symcap"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads_flag = 0;
    app.add_option("--threads", threads_flag, "worker threads (default: SYMCAP_THREADS, else all cores)")
        ->check(CLI::PositiveNumber);

    std::string domain_path, method = "auto", format = "csv";
    std::int64_t kmax = 0;
    auto* caps = app.add_subcommand("capacities", "c_0 .. c_kmax as CSV or JSON");
    caps->add_option("--domain", domain_path, "domain spec (JSON file, - for stdin)")->required();
    caps->add_option("--kmax", kmax, "largest k")->required()->check(CLI::NonNegativeNumber);
    caps->add_option("--method", method, "auto|closed|weights|path|complement")
        ->check(CLI::IsMember({"auto", "closed", "weights", "path", "complement"}));
    caps->add_option("--out", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    double window = 0.5;
    auto* et = app.add_subcommand("error-term", "e_k with window statistics");
    et->add_option("--domain", domain_path, "domain spec")->required();
    et->add_option("--kmax", kmax, "largest k")->required()->check(CLI::NonNegativeNumber);
    et->add_option("--window", window, "fraction of the k range used for statistics")->check(CLI::Range(0.0, 1.0));

    std::size_t nodes = 256;
    auto* ru = app.add_subcommand("ruelle", "Ruelle invariant, with quadrature for profile specs");
    ru->add_option("--domain", domain_path, "domain spec")->required();
    ru->add_option("--quadrature", nodes, "quadrature nodes")->check(CLI::Range(8, 1 << 24));

    std::string source_path, target_path, area_tol = "0";
    auto* ob = app.add_subcommand("obstruct", "a + b obstruction to volume-filling embeddings");
    ob->add_option("--source", source_path, "source domain spec")->required();
    ob->add_option("--target", target_path, "target domain spec")->required();
    ob->add_option("--area-tol", area_tol, "allowed area difference (rational)");

    int depth = 3, subsample = 5;
    std::vector<std::int64_t> ks;
    auto* cb = app.add_subcommand("cube-bound", "cube-packing lower bounds on e_k");
    cb->add_option("--domain", domain_path, "domain or box spec")->required();
    cb->add_option("--depth", depth, "deepest dyadic level")->check(CLI::Range(1, 12));
    cb->add_option("--k", ks, "comma-separated k values")->required()->delimiter(',')->check(CLI::PositiveNumber);
    cb->add_option("--subsample", subsample, "sample points per axis for nonconvex domains")->check(CLI::Range(2, 64));

    std::string gen_path;
    bool boundary = false;
    auto* ei = app.add_subcommand("ech-index", "ECH index, its approximation and the gap");
    ei->add_option("--generator", gen_path, "generator JSON")->required();
    ei->add_flag("--boundary", boundary, "accept integral k theta");

    std::string min_weight;
    std::size_t max_terms = 4096;
    auto* we = app.add_subcommand("weights", "weight expansion of a concave domain");
    we->add_option("--domain", domain_path, "domain spec")->required();
    we->add_option("--min-weight", min_weight, "stop below this weight (rational)");
    we->add_option("--max-terms", max_terms, "stop after this many weights")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    Streams io{out, err};
    try {
        const unsigned threads = detail::resolve_threads(threads_flag);
        if (caps->parsed()) return cmd_capacities(load_domain_spec(domain_path), kmax, method, format, threads, io);
        if (et->parsed()) return cmd_error_term(load_domain_spec(domain_path), kmax, window, threads, io);
        if (ru->parsed()) return cmd_ruelle(load_domain_spec(domain_path), nodes, io);
        if (ob->parsed()) return cmd_obstruct(load_domain_spec(source_path), load_domain_spec(target_path), area_tol, io);
        if (cb->parsed()) return cmd_cube_bound(load_domain_spec(domain_path), depth, ks, subsample, threads, io);
        if (ei->parsed()) return cmd_ech_index(load_generator(gen_path), boundary, io);
        if (we->parsed()) return cmd_weights(load_domain_spec(domain_path), min_weight, max_terms, io);
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return kBadSpec;
    } catch (const MethodMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kMismatch;
    } catch (const Mismatch& e) {
        err << "error: " << e.what() << "\n";
        return kMismatch;
    } catch (const BoundaryTheta& e) {
        err << "error: " << e.what() << " (pass --boundary to accept)\n";
        return kMismatch;
    } catch (const EmptyWindow& e) {
        err << "error: " << e.what() << "\n";
        return kEmptyWindow;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace symcap::cli
