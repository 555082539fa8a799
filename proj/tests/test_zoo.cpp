#include "common.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <set>

using namespace heis;
using heis::testing::square;

TEST(Cantor, Gaps) {
    const IntervalComplement k0 = make_cantor(0, 2.0);
    EXPECT_TRUE(k0.intervals.empty());
    EXPECT_EQ(k0.components().size(), 1u);

    const IntervalComplement k1 = make_cantor(1, 1.0);
    ASSERT_EQ(k1.intervals.size(), 1u);
    EXPECT_NEAR(k1.intervals[0].first, -1.0 / 3, 1e-15);
    EXPECT_NEAR(k1.intervals[0].second, 1.0 / 3, 1e-15);

    const IntervalComplement k2 = make_cantor(2, 1.0);
    ASSERT_EQ(k2.intervals.size(), 3u);
    const double expect[3][2] = {{-7.0 / 9, -5.0 / 9}, {-1.0 / 3, 1.0 / 3}, {5.0 / 9, 7.0 / 9}};
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(k2.intervals[i].first, expect[i][0], 1e-15);
        EXPECT_NEAR(k2.intervals[i].second, expect[i][1], 1e-15);
    }
    EXPECT_EQ(make_cantor(3, 1.0).intervals.size(), 7u);
    EXPECT_TRUE(k2.contains(1.0));
    EXPECT_TRUE(k2.contains(-1.0));
    EXPECT_FALSE(k2.contains(0.0));
    EXPECT_THROW(make_cantor(-1, 1.0), std::invalid_argument);
}

TEST(IntervalComplement, Validation) {
    EXPECT_THROW((IntervalComplement{0.0, {}}.validate()), std::invalid_argument);
    EXPECT_THROW((IntervalComplement{1.0, {{0.5, 0.2}}}.validate()), std::invalid_argument);
    EXPECT_THROW((IntervalComplement{1.0, {{-2, 0}}}.validate()), std::invalid_argument);
    EXPECT_THROW((IntervalComplement{1.0, {{0, 0.5}, {0.4, 0.6}}}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((IntervalComplement{1.0, {{-1, 0}, {0, 1}}}.validate()));
}

TEST(Plane, Properties) {
    const Grid unit = square(0, 1, 0, 1, 9, 9);
    EXPECT_EQ(energy(make_plane(0, 0, unit)), 0.0);
    EXPECT_NEAR(energy(make_plane(1, 0, unit)), 0.5, 1e-12);
    const GraphGrid g = make_plane(0.8, 0.1, unit);
    EXPECT_LT(max_abs_unmasked(g, harmonic_residual(g)), 1e-12);
}

TEST(Parabola, Properties) {
    const GraphGrid g = make_parabola(square(-1, 1, -1, 1, 33, 33));
    for (double v : partial(g, g.values, Axis::z)) EXPECT_EQ(v, 0.0);
    for (double v : nabla_f(g, intrinsic_gradient(g)).values) EXPECT_NEAR(v, 2.0, 1e-9);
    EXPECT_LT(max_abs_unmasked(g, harmonic_residual(g)), 1e-8);
}

TEST(Herringbone, ValuesAndSlopes) {
    for (double a : {0.5, 1.0, 2.0}) {
        const PiecewiseGraph pg = make_herringbone(a, square(-1, 1, -5, 5, 9, 21));
        EXPECT_NEAR(pg.f(0.3, 1.0), -a, 1e-15);
        EXPECT_NEAR(pg.f(0.3, -4.0), 2 * a, 1e-15);
        EXPECT_EQ(pg.sigma0(0.0), 0.0);
        EXPECT_EQ(pg.sigma_plus(0.0), -a * a / 2);
        EXPECT_EQ(pg.sigma_minus(0.0), a * a / 2);
        EXPECT_EQ(pg.delta(0.2), 0.0);
        EXPECT_TRUE(pg.grid.has_mask());
        // Only the cells adjacent to z = 0 are masked.
        for (int i = 0; i < 8; ++i)
            for (int k = 0; k < 20; ++k) EXPECT_EQ(pg.grid.masked(i, k), k == 9 || k == 10);
    }
    EXPECT_THROW(make_herringbone(0.0, square(0, 1, -1, 1, 3, 3)), std::invalid_argument);
    EXPECT_THROW(make_herringbone(1.0, square(0, 1, 0, 1, 3, 3)), std::invalid_argument);
}

TEST(BrokenHerringbone, Delta) {
    const PiecewiseGraph pg = make_broken_herringbone(-0.1, 0.3, square(0, 1, -1, 1, 9, 9));
    EXPECT_NEAR(pg.delta(0.5), 0.01 - 0.09, 1e-15);
    // Each side is ruled by rays of the stated slopes: nabla_f f = -f d_z f.
    const ScalarField t = intrinsic_gradient(pg.grid);
    for (int i = 0; i < 9; ++i)
        for (int k = 0; k < 9; ++k)
            if (!pg.grid.node_masked(i, k)) EXPECT_NEAR(t(i, k), t.grid.z(k) > 0 ? -0.1 : 0.3, 1e-12);
    EXPECT_THROW(make_broken_herringbone(0.1, 0.3, square(0, 1, -1, 1, 3, 3)), std::invalid_argument);
}

TEST(Flex, WedgeMatchesHerringbone) {
    const double d = 0.5;
    FlexSurface fs;
    fs.cy = [](double) { return 0.0; };
    fs.sigma = [](double) { return 0.0; };
    fs.delta = [d](double) { return d; };
    fs.s0 = -1.0;
    fs.s1 = 2.0;
    fs.eps = 1.0;
    const Grid grid = square(0, 1, -0.1, 0.1, 11, 21);
    const FlexResult flex = make_flex(fs, grid, 32, 8);
    const PiecewiseGraph hb = make_herringbone(std::sqrt(2 * d), grid);
    for (std::size_t n = 0; n < grid.size(); ++n) EXPECT_NEAR(flex.piecewise.grid.values[n], hb.grid.values[n], 1e-10);
    EXPECT_EQ(flex.piecewise.grid.singular_mask, hb.grid.singular_mask);
    EXPECT_EQ(flex.cloud.size(), 32u * 17u);
}

TEST(Flex, EqualSlopeAverageAndRuling) {
    const FlexSurface fs = heis::testing::demo_flex();
    const FlexResult r = make_flex(fs, heis::testing::demo_flex_grid(33));
    for (double s : {0.1, 0.5, 0.9}) {
        const PiecewiseGraph& pg = r.piecewise;
        EXPECT_DOUBLE_EQ(0.5 * (pg.sigma_plus(s) + pg.sigma_minus(s)), pg.sigma0(s));
        EXPECT_DOUBLE_EQ(pg.delta(s), 0.0);
    }
    // Points of rho lie on the graph: f(Pi(rho(s,t))) = y(rho(s,t)).
    for (double s : {0.55, 0.7, 0.9})
        for (double t : {-0.2, -0.05, 0.05, 0.2}) {
            const Point p = fs.rho(s, t);
            const Point v = proj_Pi(p);
            EXPECT_NEAR(flex_value(fs, v.x, v.z), p.y, 1e-10);
        }
    // The directrix is horizontal: cz' = (s sigma - cy) / 2 with sigma = cy'.
    const double s = 0.6, h = 1e-5;
    EXPECT_NEAR((fs.cz_at(s + h) - fs.cz_at(s - h)) / (2 * h), 0.5 * (s * fs.sigma(s) - fs.cy(s)), 1e-8);
}

TEST(Flex, CrossingLeavesAreRejected) {
    FlexSurface fs = heis::testing::demo_flex();
    // Strongly varying slopes make neighbouring leaves cross.
    fs.delta = [](double s) { return 0.1 + 20.0 * s * s; };
    fs.sigma = [](double s) { return -10.0 * s; };
    fs.cy = [](double s) { return -5.0 * s * s; };
    EXPECT_THROW(make_flex(fs, heis::testing::demo_flex_grid(9)), std::domain_error);
    EXPECT_THROW(flex_value(heis::testing::demo_flex(), 5.0, 0.0), std::domain_error);
}

namespace {

int count_kind(const RayFan& fan, RayKind k) {
    int n = 0;
    for (const auto& r : fan.rays) n += r.kind == k;
    return n;
}

// Every branch origin sits on its parent nexus ray.
void expect_parents_consistent(const RayFan& fan) {
    for (const auto& r : fan.rays) {
        if (r.kind != RayKind::branch) continue;
        ASSERT_GE(r.parent, 0);
        const Ray& p = fan.rays[r.parent];
        EXPECT_EQ(p.kind, RayKind::nexus);
        const double len = std::hypot(p.dir.x, p.dir.y);
        const double t = (r.origin.x * p.dir.x + r.origin.y * p.dir.y) / (len * len);
        const Point q = p.at(t);
        EXPECT_NEAR(q.x, r.origin.x, 1e-12);
        EXPECT_NEAR(q.y, r.origin.y, 1e-12);
        EXPECT_NEAR(q.z, r.origin.z, 1e-12);
    }
}

}  // namespace

TEST(LambdaK, HerringboneCase) {
    const double a = 1.2, alpha = a * a / 2;
    const RayFan fan = make_lambda_K(IntervalComplement{alpha, {{-alpha, alpha}}});
    EXPECT_EQ(count_kind(fan, RayKind::nexus), 2);
    expect_parents_consistent(fan);
    const FanEvaluator eval(fan);
    const Grid grid = square(-1, 1, -1, 1, 21, 21);
    const PiecewiseGraph hb = make_herringbone(a, grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int k = 0; k < grid.nz; ++k)
            EXPECT_NEAR(eval.graph_value(grid.x(i), grid.z(k)), hb.grid(i, k), 1e-10);
    const GraphGrid g = rayfan_to_graph(fan, grid);
    for (std::size_t n = 0; n < grid.size(); ++n) EXPECT_NEAR(g.values[n], hb.grid.values[n], 1e-10);
}

TEST(LambdaK, FullIntervalIsAFanOfAllSlopes) {
    const double alpha = 0.8;
    const RayFan fan = make_lambda_K(IntervalComplement{alpha, {}});
    EXPECT_EQ(count_kind(fan, RayKind::nexus), 1);
    EXPECT_GT(count_kind(fan, RayKind::fan), 10);
    const auto [lo, hi] = fan_slope_bounds(fan);
    EXPECT_DOUBLE_EQ(lo, -alpha);
    EXPECT_DOUBLE_EQ(hi, alpha);
    // Fan rays lie in the plane z = 0 on |y| <= alpha x.
    EXPECT_EQ(fan_height(fan, 1.0, 0.3), 0.0);
    const GraphGrid g = rayfan_to_graph(fan, square(-1, 1, -1, 1, 33, 33));
    const ScalarField t = intrinsic_gradient(g);
    // The sampled graph has a kink on the wedge edge; skip stencils that straddle it.
    const auto inside = [&](int i, int k) { return std::abs(g(i, k)) < alpha * g.grid.x(i); };
    int checked = 0;
    for (int i = 0; i < 33; ++i)
        for (int k = 0; k < 33; ++k) {
            bool mixed = g.node_masked(i, k);
            for (int di = -2; di <= 2; ++di)
                for (int dk = -2; dk <= 2; ++dk) {
                    const int a = std::clamp(i + di, 0, 32), b = std::clamp(k + dk, 0, 32);
                    mixed = mixed || inside(a, b) != inside(i, k);
                }
            if (mixed) continue;
            EXPECT_LE(std::abs(t(i, k)), alpha + 1e-6);
            ++checked;
        }
    EXPECT_GT(checked, 500);
}

TEST(LambdaK, CantorDepthThreeStructure) {
    const IntervalComplement K = make_cantor(3, 1.0);
    const FanSampling s{2.0, 0.25, 0.05};
    const RayFan fan = make_lambda_K(K, s);
    EXPECT_EQ(fan.gaps.size(), 8u);
    EXPECT_EQ(count_kind(fan, RayKind::nexus), 8);
    EXPECT_EQ(count_kind(fan, RayKind::branch), 8 * 2 * 8);
    expect_parents_consistent(fan);
    // sup K and inf K come back out of the fan.
    const auto [lo, hi] = fan_slope_bounds(fan);
    EXPECT_DOUBLE_EQ(lo, -1.0);
    EXPECT_DOUBLE_EQ(hi, 1.0);
}

TEST(LambdaK, ZGraphAndScaleInvariance) {
    const RayFan fan = make_lambda_K(make_cantor(2, 0.5));
    const FanEvaluator eval(fan);
    const Box3 box{-1, 1, -1, 1, -1, 1};
    const auto pts = rayfan_sample(fan, box, 10.0);
    for (const Point& p : pts) {
        EXPECT_NEAR(p.z, eval.height(p.x, p.y), 1e-12);
        for (double t : {0.5, 3.0}) {
            const Point q = apply_auto(Stretch{t, t}, p);
            EXPECT_NEAR(q.z, eval.height(q.x, q.y), 1e-11 * (1 + std::abs(q.z)));
        }
    }
}

TEST(LambdaK, SampledPointsAreIntrinsicLipschitz) {
    const double alpha = 0.5;
    const RayFan fan = make_lambda_K(make_cantor(1, alpha), {1.0, 0.2, 0.2});
    const auto pts = rayfan_sample(fan, Box3{-1, 1, -1, 1, -1, 1}, 6.0);
    ASSERT_GT(pts.size(), 50u);
    EXPECT_TRUE(lipschitz_check(pts, alpha).ok);
}

TEST(SigmaK, ThreeDirections) {
    const double eps = 0.2;
    const RayFan fan = make_sigma_K({-eps, 0.0, eps});
    EXPECT_EQ(fan.gaps.size(), 3u);
    EXPECT_EQ(count_kind(fan, RayKind::fan), 3);
    EXPECT_EQ(count_kind(fan, RayKind::nexus), 3);
    expect_parents_consistent(fan);
    // The closing gap ends on exactly the first direction.
    EXPECT_EQ(fan.gaps.back().upper.x, fan.gaps.front().lower.x);
    EXPECT_EQ(fan.gaps.back().upper.y, fan.gaps.front().lower.y);
    EXPECT_THROW(make_sigma_K({0.3, 0.3}), std::invalid_argument);
}

TEST(SigmaK, OppositeDirections) {
    const RayFan fan = make_sigma_K({0.0, std::numbers::pi});
    ASSERT_EQ(fan.gaps.size(), 2u);
    // Bisectors point straight up and down; their slopes are undefined.
    int vertical = 0;
    for (const auto& r : fan.rays)
        if (r.kind == RayKind::nexus) vertical += !r.slope().has_value();
    EXPECT_EQ(vertical, 2);
    expect_parents_consistent(fan);
}

TEST(SigmaK, ScaledCantorAndStretch) {
    const IntervalComplement K = make_cantor(2, 1.0);
    const int n = 4;
    const RayFan sk = make_sigma_K(K, 1.0 / (n * n));
    const RayFan st = stretch_fan(sk, 1.0 / n, n);
    // Stretching by (1/n, n) multiplies slopes by n^2, so the K-ray slopes become n^2 tan(k / n^2) ~ k.
    const auto [lo, hi] = fan_slope_bounds(st);
    EXPECT_NEAR(lo, -1.0, 2e-3);
    EXPECT_NEAR(hi, 1.0, 2e-3);
    EXPECT_THROW(make_sigma_K(K, 4.0), std::invalid_argument);
    // Heights transform as z -> ab z.
    const FanEvaluator e0(sk), e1(st);
    for (double x : {0.3, -0.4})
        for (double y : {0.2, -0.7}) EXPECT_NEAR(e1.height(x / n, y * n), e0.height(x, y), 1e-12);
}

TEST(RayFanSample, OnRaysAndLinearInDensity) {
    const RayFan fan = make_lambda_K(make_cantor(1, 1.0));
    const Box3 box{-1, 1, -1, 1, -1, 1};
    const auto a = rayfan_sample(fan, box, 20.0), b = rayfan_sample(fan, box, 40.0);
    EXPECT_NEAR(static_cast<double>(b.size()) / a.size(), 2.0, 0.1);
    for (const Point& p : a) EXPECT_TRUE(box.contains(p));
    EXPECT_THROW(rayfan_sample(fan, Box3{10, 11, 10, 11, 10, 11}, 5.0), std::domain_error);
    EXPECT_THROW(rayfan_sample(fan, box, 0.0), std::invalid_argument);
}

TEST(RayFanToGraph, GraphEquationAwayFromNexus) {
    const RayFan fan = make_lambda_K(make_cantor(1, 1.0));
    const GraphGrid g = rayfan_to_graph(fan, square(-1, 1, -1, 1, 41, 41));
    const FanEvaluator eval(fan);
    for (int i = 0; i < 41; ++i)
        for (int k = 0; k < 41; ++k) {
            const Point p = psi_f(g, {g.grid.x(i), 0, g.grid.z(k)});
            EXPECT_NEAR(p.z, eval.height(p.x, p.y), 1e-9);
        }
    EXPECT_TRUE(g.has_mask());
}
