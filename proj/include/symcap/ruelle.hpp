#pragma once

// Ruelle invariant of a toric domain: the closed form a + b and a quadrature
// of the rotation density along the boundary curve.

#include "symcap/rational.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcap {

inline Rational ruelle_toric(const Rational& a, const Rational& b)
{
    if (a <= 0 || b <= 0) throw std::invalid_argument("a and b must be positive");
    return a + b;
}

struct TangentIntercepts {
    double alpha = 0;   // mu1-axis intercept
    double beta = 0;    // mu2-axis intercept
};

/// Axis intercepts of the tangent line at `point` with direction `velocity`.
inline TangentIntercepts tangent_intercepts(std::array<double, 2> point, std::array<double, 2> velocity)
{
    const auto [m1, m2] = point;
    const auto [d1, d2] = velocity;
    if (!(d1 * d2 < 0)) throw std::domain_error("tangent slope must be negative");
    const double delta = m1 * d2 - d1 * m2;
    if (delta == 0) throw std::domain_error("tangent line passes through the origin");
    return {delta / d2, -delta / d1};
}

/// (alpha + beta) / (alpha beta).
inline double rotation_density(std::array<double, 2> point, std::array<double, 2> velocity)
{
    const auto t = tangent_intercepts(point, velocity);
    return (t.alpha + t.beta) / (t.alpha * t.beta);
}

struct CurveSample {
    double mu1, mu2, dmu1, dmu2;
};

enum class PowerSide { ConcaveDomain, ConvexDomain };

/// Smooth curve from (a, 0) to (0, b) with negative slope, parametrized over
/// [0, 1].  Power curves are (x/a)^p + (y/b)^p = 1 on the convex side and
/// (x/a)^(1/p) + (y/b)^(1/p) = 1 on the concave side.  Sampled curves carry
/// their values at the midpoints (i + 1/2)/N of a uniform grid.
class SmoothProfile {
public:
    enum class Family { Line, Power, Samples };

    static SmoothProfile line(double a, double b) { return SmoothProfile(Family::Line, a, b, 1, PowerSide::ConvexDomain); }

    static SmoothProfile power(double a, double b, double p, PowerSide side)
    {
        if (!(p > 1)) throw std::invalid_argument("power exponent must exceed 1");
        return SmoothProfile(Family::Power, a, b, p, side);
    }

    /// Samples ordered from (a, 0) toward (0, b).  Consecutive positions must
    /// agree with the trapezoid rule on the tangents to first order.
    static SmoothProfile samples(double a, double b, std::vector<CurveSample> s, double tolerance = 1e-2)
    {
        if (s.size() < 2) throw std::invalid_argument("need at least two samples");
        const double h = 1.0 / static_cast<double>(s.size());
        const double scale = std::max(a, b);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            for (int c = 0; c < 2; ++c) {
                const double pos = c == 0 ? s[i + 1].mu1 - s[i].mu1 : s[i + 1].mu2 - s[i].mu2;
                const double vel = c == 0 ? s[i].dmu1 + s[i + 1].dmu1 : s[i].dmu2 + s[i + 1].dmu2;
                if (std::abs(pos - 0.5 * h * vel) > tolerance * scale * h) {
                    std::ostringstream os;
                    os << "sample " << i << " is inconsistent with its tangent data";
                    throw std::invalid_argument(os.str());
                }
            }
        }
        SmoothProfile out(Family::Samples, a, b, 1, PowerSide::ConvexDomain);
        out.samples_ = std::move(s);
        return out;
    }

    Family family() const { return family_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double p() const { return p_; }
    PowerSide side() const { return side_; }
    const std::vector<CurveSample>& sampled() const { return samples_; }

    /// Position and velocity at parameter tau in (0, 1).
    CurveSample at(double tau) const
    {
        switch (family_) {
        case Family::Line: return {a_ * (1 - tau), b_ * tau, -a_, b_};
        case Family::Power: return power_at(tau);
        case Family::Samples: break;
        }
        throw std::logic_error("sampled profiles have no closed-form parametrization");
    }

private:
    SmoothProfile(Family f, double a, double b, double p, PowerSide side) : family_(f), a_(a), b_(b), p_(p), side_(side)
    {
        if (!(a > 0) || !(b > 0)) throw std::invalid_argument("a and b must be positive");
    }

    /// mu = (a cos^e s, b sin^e s), s = (pi/2) I(tau) where I is the
    /// regularized incomplete beta function of order m.  The flat ends of I
    /// absorb the endpoint singularities of the power curve: near either end
    /// mu behaves like tau^(m e), and m e >= 8.
    CurveSample power_at(double tau) const
    {
        const double e = side_ == PowerSide::ConvexDomain ? 2.0 / p_ : 2.0 * p_;
        const double m = std::ceil(8.0 / e);
        const double half_pi = std::acos(0.0);
        const double s = half_pi * boost::math::ibeta(m, m, tau);
        const double ds = half_pi * boost::math::ibeta_derivative(m, m, tau);
        // cos s = sin(pi/2 - s) keeps full relative precision near s = pi/2
        const double c = std::sin(half_pi * boost::math::ibetac(m, m, tau)), sn = std::sin(s);
        return {a_ * std::pow(c, e), b_ * std::pow(sn, e), -a_ * e * std::pow(c, e - 1) * sn * ds,
                b_ * e * std::pow(sn, e - 1) * c * ds};
    }

    Family family_;
    double a_, b_, p_;
    PowerSide side_;
    std::vector<CurveSample> samples_;
};

enum class RuelleMode {
    Full,      // rotation density times mu1 dmu2 - mu2 dmu1, via the intercepts
    Reduced,   // the simplified integrand -dmu1 + dmu2
};

struct RuelleQuadrature {
    double value = 0;
    double max_residual = 0;   // relative residual of beta mu1 + alpha mu2 = alpha beta
    std::size_t nodes = 0;
};

namespace detail {

inline double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double ruelle_term(const CurveSample& c, RuelleMode mode, double& residual, double tau)
{
    if (mode == RuelleMode::Reduced) return -c.dmu1 + c.dmu2;
    TangentIntercepts t;
    try {
        t = tangent_intercepts({c.mu1, c.mu2}, {c.dmu1, c.dmu2});
    } catch (const std::domain_error& e) {
        std::ostringstream os;
        os << e.what() << " at parameter " << tau << " (mu = " << c.mu1 << ", " << c.mu2 << ")";
        throw std::domain_error(os.str());
    }
    const double ab = t.alpha * t.beta;
    residual = std::max(residual, std::abs(t.beta * c.mu1 + t.alpha * c.mu2 - ab) / std::max(1.0, std::abs(ab)));
    const double delta = c.mu1 * c.dmu2 - c.dmu1 * c.mu2;
    return (t.alpha + t.beta) / ab * delta;
}

}  // namespace detail

/// Integral of the rotation density against mu1 dmu2 - mu2 dmu1 along the
/// curve from (a, 0) to (0, b), or in the opposite direction when `reversed`.
/// Composite 8-point Gauss-Legendre on n_nodes / 8 equal panels; sampled
/// profiles use the midpoint rule on their own grid.
inline RuelleQuadrature ruelle_integral(const SmoothProfile& profile, std::size_t n_nodes,
                                        RuelleMode mode = RuelleMode::Full, bool reversed = false)
{
    RuelleQuadrature out;
    std::vector<double> terms;
    auto flip = [&](CurveSample c) {
        if (reversed) {
            c.dmu1 = -c.dmu1;
            c.dmu2 = -c.dmu2;
        }
        return c;
    };

    if (profile.family() == SmoothProfile::Family::Samples) {
        const auto& s = profile.sampled();
        const double h = 1.0 / static_cast<double>(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::size_t j = reversed ? s.size() - 1 - i : i;
            terms.push_back(h * detail::ruelle_term(flip(s[j]), mode, out.max_residual, (static_cast<double>(i) + 0.5) * h));
        }
    } else {
        if (n_nodes < 8) throw std::invalid_argument("need at least 8 quadrature nodes");
        using Rule = boost::math::quadrature::gauss<double, 8>;
        const auto& x = Rule::abscissa();
        const auto& w = Rule::weights();
        const std::size_t panels = n_nodes / 8;
        const double h = 1.0 / static_cast<double>(panels);
        for (std::size_t k = 0; k < panels; ++k) {
            const double mid = (static_cast<double>(k) + 0.5) * h;
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (const double sgn : {-1.0, 1.0}) {
                    if (x[i] == 0 && sgn > 0) continue;
                    const double u = mid + sgn * 0.5 * h * x[i];
                    const double tau = reversed ? 1 - u : u;
                    terms.push_back(0.5 * h * w[i] *
                                    detail::ruelle_term(flip(profile.at(tau)), mode, out.max_residual, tau));
                }
            }
        }
    }
    out.nodes = terms.size();
    out.value = detail::pairwise_sum(terms.data(), terms.size());
    return out;
}

}  // namespace symcap
