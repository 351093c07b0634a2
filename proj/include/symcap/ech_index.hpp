#pragma once

// ECH index, its quadratic approximation and the gap between them, evaluated
// on abstract generator data.  Real is double or Rational.

#include "symcap/rational.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcap {

template <class Real>
struct OrbitDatum {
    std::int64_t m = 1;      // multiplicity
    Real action = 1;         // period of the simple orbit
    Real theta = 0;          // rotation number, action times rho
    std::int64_t sl = 0;     // self-linking number
    bool hyperbolic = false;
};

/// Orbits with pairwise linking numbers; the diagonal of `linking` is ignored.
template <class Real>
struct EchGenerator {
    std::vector<OrbitDatum<Real>> orbits;
    std::vector<std::vector<std::int64_t>> linking;
};

class BoundaryTheta : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct IndexOptions {
    bool boundary = false;   // accept integral k theta, where floor and ceil coincide
};

namespace detail {

inline Integer floor_of(double x) { return Integer(static_cast<long long>(std::floor(x))); }
inline Integer floor_of(const Rational& x) { return symcap::floor(x); }
inline bool integral(double x) { return x == std::floor(x); }
inline bool integral(const Rational& x) { return is_integer(x); }
inline double as_real(const Integer& v, double) { return static_cast<double>(v); }
inline Rational as_real(const Integer& v, const Rational&) { return Rational(v); }

template <class Real>
Real abs_real(const Real& x)
{
    return x < 0 ? Real(-x) : x;
}

}  // namespace detail

template <class Real>
void validate(const EchGenerator<Real>& g)
{
    const std::size_t n = g.orbits.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = g.orbits[i];
        std::ostringstream where;
        where << "orbit " << i << ": ";
        if (o.m < 1) throw std::invalid_argument(where.str() + "multiplicity must be positive");
        if (!(o.action > 0)) throw std::invalid_argument(where.str() + "action must be positive");
        if (o.hyperbolic && o.m != 1) throw std::invalid_argument(where.str() + "hyperbolic orbits have multiplicity 1");
    }
    if (g.linking.size() != n) throw std::invalid_argument("linking matrix must be square of the orbit count");
    for (std::size_t i = 0; i < n; ++i) {
        if (g.linking[i].size() != n) throw std::invalid_argument("linking matrix must be square of the orbit count");
        for (std::size_t j = 0; j < i; ++j)
            if (g.linking[i][j] != g.linking[j][i]) throw std::invalid_argument("linking matrix must be symmetric");
    }
}

/// Sum of m_i A_i.
template <class Real>
Real action(const EchGenerator<Real>& g)
{
    validate(g);
    Real total = 0;
    for (const auto& o : g.orbits) total += Real(o.m) * o.action;
    return total;
}

/// sum m_i^2 sl_i + sum_{i != j} m_i m_j l_ij + sum_i sum_{k <= m_i} (floor(k theta_i) + ceil(k theta_i)).
template <class Real>
std::int64_t ech_index(const EchGenerator<Real>& g, const IndexOptions& opts = {})
{
    validate(g);
    Integer total = 0;
    const std::size_t n = g.orbits.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = g.orbits[i];
        total += Integer(o.m) * o.m * o.sl;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) total += Integer(o.m) * g.orbits[j].m * g.linking[i][j];
        for (std::int64_t k = 1; k <= o.m; ++k) {
            const Real x = Real(k) * o.theta;
            const Integer f = detail::floor_of(x);
            if (detail::integral(x)) {
                if (!opts.boundary) {
                    std::ostringstream os;
                    os << "orbit " << i << ": " << k << " * theta is an integer";
                    throw BoundaryTheta(os.str());
                }
                total += 2 * f;
            } else {
                total += 2 * f + 1;
            }
        }
    }
    return to_int64(total);
}

/// sum_ij m_i m_j A_i A_j f_ij + sum_i m_i A_i rho_i with f_ij = l_ij / (A_i A_j),
/// f_ii = (sl_i + theta_i) / A_i^2 and rho_i = theta_i / A_i.
template <class Real>
Real approx_index(const EchGenerator<Real>& g)
{
    validate(g);
    Real total = 0;
    const std::size_t n = g.orbits.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& oi = g.orbits[i];
        for (std::size_t j = 0; j < n; ++j) {
            const auto& oj = g.orbits[j];
            const Real f = i == j ? Real((Real(oi.sl) + oi.theta) / (oi.action * oi.action))
                                  : Real(Real(g.linking[i][j]) / (oi.action * oj.action));
            total += Real(oi.m) * Real(oj.m) * oi.action * oj.action * f;
        }
        total += Real(oi.m) * oi.action * (oi.theta / oi.action);
    }
    return total;
}

/// The index recovered from the approximation by subtracting the per-term
/// errors 2 k theta - floor(k theta) - ceil(k theta).
template <class Real>
Real rewrite_index(const EchGenerator<Real>& g)
{
    Real total = approx_index(g);
    for (const auto& o : g.orbits) {
        for (std::int64_t k = 1; k <= o.m; ++k) {
            const Real x = Real(k) * o.theta;
            const Integer f = detail::floor_of(x);
            const Integer fc = detail::integral(x) ? Integer(2 * f) : Integer(2 * f + 1);
            total -= 2 * x - detail::as_real(fc, x);
        }
    }
    return total;
}

template <class Real>
struct GapResult {
    Real gap = 0;
    std::int64_t bound = 0;   // sum of multiplicities
    bool ok = true;
};

template <class Real>
GapResult<Real> gap_check(const EchGenerator<Real>& g, const IndexOptions& opts = {})
{
    GapResult<Real> r;
    const Real exact = Real(ech_index(g, opts));
    r.gap = detail::abs_real(Real(approx_index(g) - exact));
    for (const auto& o : g.orbits) r.bound += o.m;
    r.ok = r.gap <= Real(r.bound);
    return r;
}

/// Orbits where some k theta (k <= m) lies within `tol` of an integer
/// without being one: floor and ceil there are fragile in binary64.
inline std::vector<std::string> theta_warnings(const EchGenerator<double>& g, double tol = 1e-9)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.orbits.size(); ++i) {
        const auto& o = g.orbits[i];
        for (std::int64_t k = 1; k <= o.m; ++k) {
            const double x = static_cast<double>(k) * o.theta;
            const double d = std::abs(x - std::round(x));
            if (d > 0 && d < tol) {
                std::ostringstream os;
                os << "orbit " << i << ": " << k << " * theta is within " << tol << " of an integer";
                out.push_back(os.str());
                break;
            }
        }
    }
    return out;
}

}  // namespace symcap
