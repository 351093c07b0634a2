#include "symcap/ech_index.hpp"

#include "corpus.hpp"

#include <gtest/gtest.h>

using namespace symcap;

namespace {

EchGenerator<double> single(std::int64_t m, double a, double theta, std::int64_t sl)
{
    return {{{m, a, theta, sl, false}}, {{0}}};
}

EchGenerator<Rational> single_q(std::int64_t m, Rational a, Rational theta, std::int64_t sl)
{
    return {{{m, a, theta, sl, false}}, {{0}}};
}

/// Literal evaluation with floor and ceil taken separately.
Integer index_oracle(const EchGenerator<Rational>& g)
{
    Integer total = 0;
    for (std::size_t i = 0; i < g.orbits.size(); ++i) {
        const auto& o = g.orbits[i];
        total += Integer(o.m * o.m * o.sl);
        for (std::size_t j = 0; j < g.orbits.size(); ++j)
            if (i != j) total += Integer(o.m * g.orbits[j].m * g.linking[i][j]);
        for (std::int64_t k = 1; k <= o.m; ++k) {
            const Rational x = k * o.theta;
            total += floor(x) + ceil(x);
        }
    }
    return total;
}

}  // namespace

TEST(Action, Examples)
{
    EXPECT_EQ(action(single(1, 1, 0.5, 0)), 1);
    EchGenerator<double> two{{{2, 1, 0.5, 0, false}, {1, 3, 0.5, 0, false}}, {{0, 0}, {0, 0}}};
    EXPECT_EQ(action(two), 5);
    EXPECT_EQ(action(EchGenerator<double>{}), 0);
}

TEST(EchIndex, Examples)
{
    EXPECT_EQ(ech_index(single_q(1, 1, Rational(6, 5), -1)), 2);
    EXPECT_EQ(ech_index(single_q(2, 1, Rational(6, 5), -1)), 4);
    EXPECT_EQ(ech_index(single(1, 1, 1.2, -1)), 2);
    EXPECT_EQ(ech_index(single(2, 1, 1.2, -1)), 4);
}

TEST(EchIndex, UnlinkedOrbitsAdd)
{
    corpus::Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        auto g = corpus::random_rational_generator(rng);
        auto h = corpus::random_rational_generator(rng);
        EchGenerator<Rational> both = g;
        const std::size_t n = g.orbits.size(), m = h.orbits.size();
        both.orbits.insert(both.orbits.end(), h.orbits.begin(), h.orbits.end());
        both.linking.assign(n + m, std::vector<std::int64_t>(n + m, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) both.linking[i][j] = g.linking[i][j];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) both.linking[n + i][n + j] = h.linking[i][j];
        IndexOptions b{true};
        EXPECT_EQ(ech_index(both, b), ech_index(g, b) + ech_index(h, b));
    }
}

TEST(EchIndex, MatchesLiteralFormula)
{
    corpus::Rng rng(11);
    for (int t = 0; t < 2000; ++t) {
        const auto g = corpus::random_rational_generator(rng);
        EXPECT_EQ(Integer(ech_index(g, {true})), index_oracle(g));
    }
}

TEST(EchIndex, BoundaryThetaNeedsOptIn)
{
    EXPECT_THROW(ech_index(single_q(2, 1, Rational(1, 2), 0)), BoundaryTheta);
    EXPECT_THROW(ech_index(single(1, 1, 3.0, 0)), BoundaryTheta);
    // floor and ceil coincide: 2 * 3 with sl = 0
    EXPECT_EQ(ech_index(single(1, 1, 3.0, 0), {true}), 6);
}

TEST(ApproxIndex, Examples)
{
    EXPECT_NEAR(approx_index(single(1, 1, 1.2, -1)), 1.4, 1e-15);
    EXPECT_EQ(approx_index(single_q(1, 1, Rational(6, 5), -1)), Rational(7, 5));
    for (int th = -4; th <= 4; ++th) {
        const auto g = single_q(1, Rational(3, 7), th, 2);
        EXPECT_EQ(approx_index(g), Rational(ech_index(g, {true})));
    }
}

TEST(ApproxIndex, InvariantUnderActionScaling)
{
    corpus::Rng rng(5);
    for (int t = 0; t < 500; ++t) {
        auto g = corpus::random_rational_generator(rng);
        const Rational before = approx_index(g);
        const Rational c(rng.uniform(1, 9), rng.uniform(1, 9));
        for (auto& o : g.orbits) o.action *= c;
        EXPECT_EQ(approx_index(g), before);
    }
}

TEST(GapCheck, Examples)
{
    const auto r = gap_check(single(1, 1, 1.2, -1));
    EXPECT_NEAR(r.gap, 0.6, 1e-15);
    EXPECT_EQ(r.bound, 1);
    EXPECT_TRUE(r.ok);

    EchGenerator<Rational> integral{{{2, 1, 3, -1, false}, {1, 2, -2, 1, true}}, {{0, 4}, {4, 0}}};
    const auto z = gap_check(integral, {true});
    EXPECT_EQ(z.gap, 0);
    EXPECT_EQ(z.bound, 3);
}

TEST(GapCheck, HoldsOnRandomGenerators)
{
    corpus::Rng rng(2024);
    for (int t = 0; t < 20000; ++t) {
        const auto g = corpus::random_generator(rng);
        const auto r = gap_check(g);
        ASSERT_TRUE(r.ok) << "trial " << t << " gap " << r.gap << " bound " << r.bound;
        EXPECT_LT(r.gap, static_cast<double>(r.bound));
    }
}

TEST(RewriteIndex, IsAnExactIdentity)
{
    corpus::Rng rng(99);
    for (int t = 0; t < 2000; ++t) {
        const auto g = corpus::random_rational_generator(rng);
        EXPECT_EQ(rewrite_index(g), Rational(ech_index(g, {true})));
    }
}

TEST(Validate, RejectsMalformedGenerators)
{
    EchGenerator<double> hyp{{{2, 1, 0.3, 0, true}}, {{0}}};
    EXPECT_THROW(ech_index(hyp), std::invalid_argument);
    EchGenerator<double> asym{{{1, 1, 0.3, 0, false}, {1, 1, 0.3, 0, false}}, {{0, 1}, {2, 0}}};
    EXPECT_THROW(approx_index(asym), std::invalid_argument);
    EchGenerator<double> shape{{{1, 1, 0.3, 0, false}}, {}};
    EXPECT_THROW(action(shape), std::invalid_argument);
    EXPECT_THROW(action(single(0, 1, 0.3, 0)), std::invalid_argument);
    EXPECT_THROW(action(single(1, 0, 0.3, 0)), std::invalid_argument);
}

TEST(ThetaWarnings, FlagsNearIntegers)
{
    EXPECT_TRUE(theta_warnings(single(1, 1, 1.2, 0)).empty());
    EXPECT_TRUE(theta_warnings(single(1, 1, 2.0, 0)).empty());
    EXPECT_EQ(theta_warnings(single(2, 1, 0.5 + 1e-12, 0)).size(), 1u);
}
