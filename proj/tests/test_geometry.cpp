#include "symcap/geometry.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace symcap;

namespace {

Rational R(const char* s) { return parse_rational(s); }

Polyline line(std::initializer_list<std::pair<const char*, const char*>> pts)
{
    std::vector<Point2> v;
    for (auto [x, y] : pts) v.push_back({R(x), R(y)});
    return Polyline(std::move(v));
}

ToricProfile unit_square() { return rectangle_profile(1, 1); }

/// Random convex lattice path inside [0, box]^2.
std::vector<IntVec2> random_convex_path(corpus::Rng& rng, std::int64_t box)
{
    for (;;) {
        auto edges = corpus::random_edges(rng, static_cast<std::size_t>(rng.uniform(0, 4)), false);
        std::int64_t a = 0, b = 0;
        std::vector<IntVec2> v;
        for (auto& e : edges) {
            const std::int64_t m = rng.uniform(1, 2);
            e.dx *= m;
            e.dy *= m;
            a += e.dx;
            b -= e.dy;
        }
        if (a > box || b > box) continue;
        v.push_back({0, b});
        for (const auto& e : edges) v.push_back({v.back().x + e.dx, v.back().y + e.dy});
        return v;
    }
}

std::vector<IntVec2> random_concave_path(corpus::Rng& rng, std::int64_t box)
{
    for (;;) {
        auto edges = corpus::random_edges(rng, static_cast<std::size_t>(rng.uniform(0, 4)), true);
        std::int64_t a = 0, b = 0;
        for (const auto& e : edges) {
            a += e.dx;
            b -= e.dy;
        }
        if (a > box || b > box) continue;
        if (!edges.empty() && edges.back().dy == 0) continue;
        std::vector<IntVec2> v{{0, b}};
        for (const auto& e : edges) v.push_back({v.back().x + e.dx, v.back().y + e.dy});
        return v;
    }
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimalsExactly)
{
    EXPECT_EQ(R("3/6"), Rational(1, 2));
    EXPECT_EQ(R("-1.25"), Rational(-5, 4));
    EXPECT_EQ(R("2e-3"), Rational(1, 500));
    EXPECT_EQ(R(" 7 "), Rational(7));
    EXPECT_EQ(to_string(R("6/4")), "3/2");
    EXPECT_THROW(R("1/0"), std::invalid_argument);
    EXPECT_THROW(R("abc"), std::invalid_argument);
    EXPECT_THROW(R(""), std::invalid_argument);
}

TEST(Rational, FloorCeilAndDoubleRoundTrip)
{
    EXPECT_EQ(symcap::floor(R("-3/2")), -2);
    EXPECT_EQ(symcap::ceil(R("-3/2")), -1);
    EXPECT_EQ(symcap::floor(R("3/2")), 1);
    EXPECT_EQ(symcap::ceil(Rational(4)), 4);
    EXPECT_EQ(to_double(rational_from_double(0.1)), 0.1);
    EXPECT_EQ(rational_from_double(0.375), Rational(3, 8));
}

TEST(AffineLength, Examples)
{
    EXPECT_EQ(affine_length(line({{"0", "1"}, {"2", "0"}})), 1);
    EXPECT_EQ(affine_length(line({{"0", "0"}, {"3", "3"}})), 3);
    EXPECT_EQ(affine_length(line({{"0", "2"}, {"1", "1"}, {"3", "0"}})), 2);
    EXPECT_EQ(affine_length(line({{"0", "0"}, {"1/2", "0"}})), Rational(1, 2));
}

TEST(AffineLength, MatchesLatticeWalk)
{
    corpus::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Rational dx(rng.uniform(-20, 20), rng.uniform(1, 6));
        const Rational dy(rng.uniform(-20, 20), rng.uniform(1, 6));
        if (dx == 0 && dy == 0) continue;
        EXPECT_EQ(affine_length(Polyline({{0, 0}, {dx, dy}})), oracle::segment_affine_length(dx, dy));
    }
}

TEST(AffineLength, InvariantUnderIntegralAffineMaps)
{
    corpus::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        // random SL(2,Z) element as a product of elementary shears
        IntegralAffineMap::Matrix m{{{1, 0}, {0, 1}}};
        for (int s = 0; s < 4; ++s) {
            const std::int64_t t = rng.uniform(-2, 2);
            IntegralAffineMap::Matrix e = (s % 2) ? IntegralAffineMap::Matrix{{{1, t}, {0, 1}}}
                                                  : IntegralAffineMap::Matrix{{{1, 0}, {t, 1}}};
            IntegralAffineMap::Matrix p{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) p[i][j] = e[i][0] * m[0][j] + e[i][1] * m[1][j];
            m = p;
        }
        const IntegralAffineMap map(m, {rng.uniform(-3, 3), rng.uniform(-3, 3)});
        std::vector<Point2> v;
        for (int i = 0; i < 4; ++i) v.push_back({Rational(rng.uniform(-9, 9), rng.uniform(1, 4)),
                                                 Rational(rng.uniform(-9, 9), rng.uniform(1, 4))});
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) distinct = distinct && !(v[i] == v[i + 1]);
        if (!distinct) continue;
        const Polyline p(v);
        EXPECT_EQ(affine_length(apply_affine(map, p)), affine_length(p));
    }
}

TEST(IntegralAffineMap, Examples)
{
    const Polyline p = line({{"0", "0"}, {"1", "2"}});
    EXPECT_EQ(apply_affine(IntegralAffineMap::identity(), p), p);
    const IntegralAffineMap phi2({{{1, 1}, {0, 1}}}, {-1, 0});
    EXPECT_EQ(phi2({2, 0}), (Point2{1, 0}));
    const IntegralAffineMap phi1({{{1, 0}, {1, 1}}}, {0, -1});
    EXPECT_EQ(phi1({0, 1}), (Point2{0, 0}));
    EXPECT_THROW(IntegralAffineMap({{{2, 0}, {0, 1}}}, {0, 0}), std::invalid_argument);
}

TEST(AreaUnderAffineMap, Preserved)
{
    // The image of Delta(1) under a shear keeps its area; checked with the
    // shoelace formula on the mapped triangle.
    const IntegralAffineMap map({{{1, 1}, {0, 1}}}, {2, -1});
    std::vector<Point2> tri{{0, 0}, {1, 0}, {0, 1}};
    Rational twice = 0, twice_img = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        twice += cross(tri[i], tri[(i + 1) % 3]);
        twice_img += cross(map(tri[i]), map(tri[(i + 1) % 3]));
    }
    EXPECT_EQ(twice, twice_img);
    for (const auto& p : corpus::concave_profiles(10, 5)) {
        // shear along mu2 preserves the profile shape class; compare areas
        std::vector<Point2> v;
        for (const auto& w : p.vertices()) v.push_back({w.mu1, w.mu2 + w.mu1});
        std::vector<Point2> poly{{0, 0}};
        for (auto it = p.vertices().rbegin(); it != p.vertices().rend(); ++it) poly.push_back(*it);
        std::vector<Point2> img;
        for (const auto& w : poly) img.push_back({w.mu1, w.mu2 + w.mu1});
        Rational s = 0, t = 0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            s += cross(poly[i], poly[(i + 1) % poly.size()]);
            t += cross(img[i], img[(i + 1) % img.size()]);
        }
        EXPECT_EQ(s / 2, region_area(p));
        EXPECT_EQ(s, t);
    }
}

TEST(ToricProfile, Validation)
{
    EXPECT_NO_THROW(ToricProfile(ProfileKind::Concave, {{0, 2}, {1, 1}, {3, 0}}));
    EXPECT_THROW(ToricProfile(ProfileKind::Concave, {{0, 1}, {1, 1}, {2, 0}}), std::invalid_argument);
    EXPECT_THROW(ToricProfile(ProfileKind::Convex, {{0, 2}, {1, 1}, {3, 0}}), std::invalid_argument);
    EXPECT_THROW(ToricProfile(ProfileKind::Convex, {{1, 1}, {1, 0}}), std::invalid_argument);
    EXPECT_THROW(ToricProfile(ProfileKind::Convex, {{0, 1}, {1, 0}, {1, -1}}), std::invalid_argument);
    const ToricProfile merged(ProfileKind::Concave, {{0, 2}, {1, 1}, {2, 0}});
    EXPECT_EQ(merged.vertices().size(), 2u);
    EXPECT_EQ(merged.a(), 2);
    EXPECT_EQ(merged.b(), 2);
}

TEST(DualNorm, Examples)
{
    EXPECT_EQ(dual_norm({1, 1}, unit_square()), 2);
    EXPECT_EQ(dual_norm({0, 0}, unit_square()), 0);
    EXPECT_EQ(dual_norm({1, 0}, delta_profile(R("5/2"), ProfileKind::Convex)), R("5/2"));
    EXPECT_EQ(dual_norm({-3, 1}, unit_square()), 4);
    EXPECT_THROW(dual_norm({1, 0}, delta_profile(1)), std::invalid_argument);
}

TEST(DualNorm, HomogeneousAndSubadditive)
{
    const auto profiles = corpus::convex_profiles(20, 17);
    corpus::Rng rng(2);
    for (const auto& p : profiles) {
        for (int i = 0; i < 30; ++i) {
            const IntVec2 u{rng.uniform(-9, 9), rng.uniform(-9, 9)};
            const IntVec2 v{rng.uniform(-9, 9), rng.uniform(-9, 9)};
            const std::int64_t t = rng.uniform(1, 5);
            EXPECT_EQ(dual_norm({t * u.x, t * u.y}, p), t * dual_norm(u, p));
            EXPECT_LE(dual_norm(u + v, p), dual_norm(u, p) + dual_norm(v, p));
        }
    }
}

TEST(AntiNorm, Examples)
{
    EXPECT_EQ(anti_norm({1, 1}, delta_profile(1)), 1);
    EXPECT_EQ(anti_norm({1, 0}, delta_profile(1)), 0);
    EXPECT_EQ(anti_norm({2, 2}, delta_profile(1)), 2);
    EXPECT_THROW(anti_norm({1, 1}, unit_square()), std::invalid_argument);
}

TEST(AntiNorm, Homogeneous)
{
    corpus::Rng rng(8);
    for (const auto& p : corpus::concave_profiles(20, 4)) {
        for (int i = 0; i < 20; ++i) {
            const IntVec2 u{rng.uniform(0, 9), rng.uniform(0, 9)};
            const std::int64_t t = rng.uniform(1, 6);
            EXPECT_EQ(anti_norm({t * u.x, t * u.y}, p), t * anti_norm(u, p));
        }
    }
}

TEST(OmegaLength, Examples)
{
    EXPECT_EQ(omega_length(LatticePath(PathKind::ConvexPath, {{0, 0}, {1, 0}}), unit_square()), 1);
    EXPECT_EQ(omega_length(LatticePath(PathKind::ConcavePath, {{0, 1}, {1, 0}}), delta_profile(1)), 1);
    EXPECT_EQ(omega_length(LatticePath::trivial(PathKind::ConvexPath), unit_square()), 0);
}

TEST(LatticeCount, ConvexExamples)
{
    EXPECT_EQ(lattice_count_convex(LatticePath(PathKind::ConvexPath, {{0, 1}, {1, 0}})), 3);
    EXPECT_EQ(lattice_count_convex(LatticePath::trivial(PathKind::ConvexPath)), 1);
    EXPECT_EQ(lattice_count_convex(LatticePath(PathKind::ConvexPath, {{0, 0}, {2, 0}})), 3);
    EXPECT_EQ(lattice_count_convex(LatticePath(PathKind::ConvexPath, {{0, 2}, {0, 0}})), 3);
}

TEST(LatticeCount, ConcaveExamples)
{
    EXPECT_EQ(lattice_count_concave(LatticePath(PathKind::ConcavePath, {{0, 1}, {1, 0}})), 1);
    EXPECT_EQ(lattice_count_concave(LatticePath(PathKind::ConcavePath, {{0, 2}, {2, 0}})), 3);
    EXPECT_EQ(lattice_count_concave(LatticePath::trivial(PathKind::ConcavePath)), 0);
}

TEST(LatticeCount, RejectsNonLatticeVertices)
{
    const std::vector<Point2> pts{{0, Rational(1, 2)}, {1, 0}};
    EXPECT_THROW(LatticePath::from_points(PathKind::ConvexPath, pts), std::invalid_argument);
    EXPECT_THROW(LatticePath(PathKind::ConvexPath, {{0, 1}, {1, 1}, {2, 1}, {1, 0}}), std::invalid_argument);
}

TEST(LatticeCount, PickMatchesEnumerationInBox)
{
    corpus::Rng rng(42);
    for (int i = 0; i < 400; ++i) {
        const auto v = random_convex_path(rng, 12);
        const LatticePath path(PathKind::ConvexPath, v);
        EXPECT_EQ(lattice_count_convex(path), oracle::count_convex(path.vertices()));
    }
    for (int i = 0; i < 400; ++i) {
        const auto v = random_concave_path(rng, 12);
        const LatticePath path(PathKind::ConcavePath, v);
        EXPECT_EQ(lattice_count_concave(path), oracle::count_concave(path.vertices()));
    }
}

TEST(LatticeCount, ExhaustiveSmallBox)
{
    std::size_t seen = 0;
    oracle::for_each_convex_path(5, [&](const std::vector<IntVec2>& v) {
        ++seen;
        EXPECT_EQ(lattice_count_convex(LatticePath(PathKind::ConvexPath, v)), oracle::count_convex(v));
    });
    EXPECT_GT(seen, 100u);
    oracle::for_each_concave_path(6, [&](const std::vector<IntVec2>& v) {
        EXPECT_EQ(lattice_count_concave(LatticePath(PathKind::ConcavePath, v)), oracle::count_concave(v));
    });
}

TEST(RegionArea, Examples)
{
    EXPECT_EQ(region_area(delta_profile(1)), R("1/2"));
    EXPECT_EQ(region_area(unit_square()), 1);
    EXPECT_EQ(region_area(triangle_profile(2, 1)), 1);
}
