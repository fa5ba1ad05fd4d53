#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "crossing/coreint.hpp"
#include "crossing/errors.hpp"
#include "crossing/level.hpp"
#include "crossing/mc.hpp"
#include "oracle.hpp"

using namespace crossing;

namespace {

RenewalModel fig4() { return RenewalModel::ordinary(make_erlang(1.6, 2), make_exponential(0.6)); }
RenewalModel fig3() { return RenewalModel::ordinary(make_exponential(0.8), make_pareto(10, 0.05)); }
RenewalModel expexp() { return RenewalModel::ordinary(make_exponential(1.0), make_exponential(1.0)); }

// upper-tail quantile by bisection on the series cdf
double z(double a) {
    return oracle::bisect([a](double x) { return 1 - oracle::phi_series(x) - a; }, 0, 10);
}

}  // namespace

TEST(LevelZero, Examples) {
    const auto s = summary_from_md(1, 6);
    EXPECT_NEAR(level_zero(s, 0.05, 100), 100 + std::sqrt(6.0) * z(0.05) * 10, 1e-9);
    EXPECT_NEAR(level_zero(s, 0.05, 100), 140.29, 5e-3);
    EXPECT_DOUBLE_EQ(level_zero(s, 0.5, 100), 100.0);
}

TEST(LevelZero, CompoundTailAtLevel) {
    const auto m = expexp();
    const double u = level_zero(m.summary(), 0.05, 400);
    EXPECT_NEAR(u, 400 + std::sqrt(2.0) * z(0.05) * 20, 1e-9);
    EXPECT_NEAR(u, 446.52, 5e-3);
    McConfig cfg;
    cfg.npaths = 100000;
    const auto e = estimate_compound_tail(m, u, 400, cfg);
    EXPECT_GE(e.phat, 0.03);
    EXPECT_LE(e.phat, 0.07);
}

TEST(Band, ZeroDeltaIsHalfAlphaQuantile) {
    for (double a : {0.01, 0.05, 0.1})
        for (auto side : {BandSide::Below, BandSide::Above}) EXPECT_NEAR(x_alpha_band(0, a, side), z(a / 2), 1e-9);
    EXPECT_NEAR(x_alpha_band(0, 0.05, BandSide::Below), 1.959964, 1e-6);
}

TEST(Band, ResidualAndMonotone) {
    const double x = x_alpha_band(1, 0.05, BandSide::Below);
    // independent evaluation of 1 - Phi(x - d) + Phi(-d - x) e^{2 d x}
    const double lhs = 1 - oracle::phi_series(x - 1) + oracle::phi_series(-1 - x) * std::exp(2 * x);
    EXPECT_NEAR(lhs, 0.05, 1e-10);
    EXPECT_NEAR(band_lhs(x, 1, BandSide::Below), 0.05, 1e-10);
    double prev = 0;
    for (double d = 0; d <= 3; d += 0.25) {
        const double xd = x_alpha_band(d, 0.05, BandSide::Below);
        EXPECT_GT(xd, prev);
        prev = xd;
        const double xa = x_alpha_band(d, 0.05, BandSide::Above);
        EXPECT_NEAR(band_lhs(xa, d, BandSide::Above), 0.05, 1e-10);
    }
    EXPECT_THROW(x_alpha_band(-1, 0.05, BandSide::Below), DomainError);
}

TEST(Super, ResidualAndMonotone) {
    const double x = x_alpha_super(2, 1, 0.05);
    const double lhs = (1 - oracle::phi_series(0.0)) * std::exp(-0.5 * x) + oracle::phi_series(std::sqrt(x));
    EXPECT_NEAR(lhs, 1.05, 1e-10);
    EXPECT_NEAR(super_lhs(x, 2), 1.05, 1e-10);
    const auto s = fig4().summary();
    double prev = INFINITY;
    for (double f : {1.5, 2.0, 3.0, 4.0}) {
        const double c = f * s.cstar;
        const double lvl = s.Dsq / (s.M * s.M) * x_alpha_super(c, s.M, 0.05);
        EXPECT_LT(lvl, prev);
        prev = lvl;
        EXPECT_NEAR(super_lhs(x_alpha_super(c, s.M, 0.05), c * s.M), 1.05, 1e-10);
    }
    // past cM ~ 4.7 the left side never reaches 1.05
    EXPECT_THROW(x_alpha_super(5 * s.cstar, s.M, 0.05), SolverError);
    EXPECT_THROW(x_alpha_super(0.5, 1, 0.05), RegimeError);
}

TEST(Super, HeuristicApproachesLimit) {
    const auto s = fig4().summary();
    const double c = 2 * s.cstar;
    const double lim = level_asym(s, 0.05, 200, c, Regime::SuperCritical);
    double prev = INFINITY;
    for (double t : {200.0, 800.0, 3200.0}) {
        const double gap = std::abs(solve_heuristic_level(s, 0.05, t, c).level - lim);
        EXPECT_LE(gap, prev + 1e-9) << t;
        prev = gap;
    }
}

TEST(Heuristic, Fig4Points) {
    const auto m = fig4();
    const auto s = m.summary();
    EXPECT_NEAR(s.cstar, 4.0 / 3.0, 1e-14);
    const double asym = s.diffusion_scale() * z(0.025) * std::sqrt(200.0);
    EXPECT_NEAR(asym, 50.6, 0.1);
    EXPECT_NEAR(level_asym(s, 0.05, 200, s.cstar, Regime::CriticalBand), asym, 1e-6);
    const auto r = solve_heuristic_level(m, 0.05, 200, s.cstar);
    EXPECT_NEAR(r.level, asym, 0.1 * asym);
    EXPECT_LE(r.residual, 1e-10);
    EXPECT_LE(r.bracket_lo, r.level);
    EXPECT_GE(r.bracket_hi, r.level);
    EXPECT_NEAR(std::abs(a_kernel({r.level, s.cstar, 200, 0, s.M, s.Dsq}) - 0.05), 0.0, 1e-10);
    const double lz = level_zero(s, 0.05, 200);
    EXPECT_NEAR(solve_heuristic_level(m, 0.05, 200, 0).level, lz, 0.05 * lz);
    EXPECT_NEAR(level_asym(s, 0.05, 200, 0, Regime::SubCritical), lz, 1e-9);
}

TEST(Heuristic, Fig3CriticalValue) {
    const auto s = fig3().summary();
    EXPECT_NEAR(s.cstar, 1.7778, 1e-3);
    EXPECT_NEAR(level_asym(s, 0.05, 200, s.cstar, Regime::CriticalBand),
                s.diffusion_scale() * z(0.025) * std::sqrt(200.0), 1e-6);
}

TEST(Heuristic, MonotoneInCAndAlpha) {
    const auto s = fig4().summary();
    double prev = INFINITY;
    for (int i = 0; i <= 30; ++i) {
        const double lvl = solve_heuristic_level(s, 0.05, 200, 0.1 * i).level;
        EXPECT_LE(lvl, prev + 1e-8);
        prev = lvl;
    }
    prev = INFINITY;
    for (double a : {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.45}) {
        const double lvl = solve_heuristic_level(s, a, 200, s.cstar).level;
        EXPECT_LT(lvl, prev);
        prev = lvl;
    }
    // the peak of A in u sits above the starting guess here
    EXPECT_GT(solve_heuristic_level(s, 0.45, 200, s.cstar).level, 8.0);
    EXPECT_THROW(solve_heuristic_level(s, 0.5, 200, 1), DomainError);
    EXPECT_THROW(solve_heuristic_level(s, 0.05, 0, 1), DomainError);
}

TEST(Regimes, ClassificationAndMismatch) {
    const auto s = fig4().summary();
    EXPECT_EQ(classify_regime(0.5 * s.cstar, s), Regime::SubCritical);
    EXPECT_EQ(classify_regime(s.cstar, s), Regime::CriticalBand);
    EXPECT_EQ(classify_regime(2 * s.cstar, s), Regime::SuperCritical);
    EXPECT_THROW(level_asym(s, 0.05, 200, 2 * s.cstar, Regime::SubCritical), RegimeError);
}

TEST(Structure, LimitsAndShape) {
    const auto s = fig4().summary();
    EXPECT_NEAR(structure_function(s, 0.05, 3200, 8), z(0.05), 0.05 * z(0.05));
    EXPECT_NEAR(structure_function(s, 0.05, 3200, 0), z(0.025), 0.05 * z(0.025));
    const double top = structure_function(s, 0.05, 3200, 0);
    double prev = -INFINITY;
    for (double y = -5; y < 0; y += 0.5) {
        const double v = structure_function(s, 0.05, 3200, y);
        EXPECT_GT(v, prev);
        EXPECT_LT(v, top);
        prev = v;
    }
    prev = INFINITY;
    for (double y = 0.5; y <= 5; y += 0.5) {
        const double v = structure_function(s, 0.05, 3200, y);
        EXPECT_LT(v, prev);
        EXPECT_LT(v, top);
        prev = v;
    }
}

TEST(Bounds, OrderAndContainment) {
    const auto m = fig4();
    const auto s = m.summary();
    const double slack = 0.05 * s.diffusion_scale() * z(0.025) * std::sqrt(200.0);
    for (int i = 0; i <= 20; ++i) {
        const double c = 0.9 * s.cstar * i / 20;
        const auto b = bounds_subcritical(s, 0.05, 200, c);
        EXPECT_LT(b.lo, b.hi);
        EXPECT_NEAR(b.lo, level_zero(s, 0.05, 200) - c * 200, 1e-9);
        const double lvl = solve_heuristic_level(s, 0.05, 200, c).level;
        EXPECT_GE(lvl, b.lo - slack) << c;
        EXPECT_LE(lvl, b.hi + slack) << c;
    }
    EXPECT_THROW(bounds_subcritical(s, 0.05, 200, 1.5), RegimeError);
}

TEST(Kappa, ClosedFormAndRoots) {
    EXPECT_NEAR(adjustment_coefficient(expexp(), 2), 0.5, 1e-12);
    EXPECT_NEAR(upper_bound_supercritical(expexp(), 0.05, 2), 2 * std::log(10.0), 1e-12);
    EXPECT_NEAR(upper_bound_supercritical(expexp(), 0.05, 2), 4.605, 1e-3);

    const auto m = fig4();
    const double k = adjustment_coefficient(m, 2);
    // E exp(-2 k T) for Erlang(8/5, 2) is (1.6 / (1.6 + 2 k))^2
    EXPECT_NEAR(std::pow(1.6 / (1.6 + 2 * k), 2), 1 - k / 0.6, 1e-12);
    EXPECT_LE(std::abs(lundberg_residual(m, 2, k)), 1e-12);
    EXPECT_NEAR(upper_bound_supercritical(m, 0.05, 2), -std::log(0.05) / k, 1e-9);

    double prev = INFINITY;
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double kk = adjustment_coefficient(m, (4.0 / 3.0) * (1 + e));
        EXPECT_LT(kk, prev);
        prev = kk;
    }
    EXPECT_LT(prev, 1e-3);
    EXPECT_THROW(adjustment_coefficient(m, 1.0), RegimeError);
}

TEST(Kappa, HeavyTailedJumpsUnsupported) {
    const auto m = RenewalModel::ordinary(make_erlang(1.6, 2), make_pareto(10, 0.05));
    EXPECT_THROW(adjustment_coefficient(m, 10), UnsupportedModelError);
    EXPECT_THROW(adjustment_coefficient(fig3(), 3), UnsupportedModelError);
    const auto light = RenewalModel::ordinary(make_exponential(0.8), make_erlang(2, 3));
    const double k = adjustment_coefficient(light, 3);
    // E exp(k Y) = (2 / (2 - k))^3 = 1 + c k / delta
    EXPECT_NEAR(std::pow(2 / (2 - k), 3), 1 + 3 * k / 0.8, 1e-10);
}

TEST(Convexity, Fig4SuperCritical) {
    const auto s = fig4().summary();
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(s.cstar + (1.5 * s.cstar) * i / 19);
    const auto r = convexity_check(s, 0.05, 200, grid);
    EXPECT_TRUE(r.convex);
    EXPECT_EQ(r.values.size(), 20u);
    EXPECT_EQ(r.second_differences.size(), 18u);
    EXPECT_TRUE(r.violations.empty());
}

TEST(Convexity, CheckerSelfTest) {
    std::vector<double> line;
    for (int i = 0; i < 10; ++i) line.push_back(3 - 0.5 * i);
    const auto r = convexity_check(line);
    EXPECT_TRUE(r.convex);
    for (double d : r.second_differences) EXPECT_NEAR(d, 0.0, 1e-12);
    const std::vector<double> bump{0, 1, 0, 1, 0};
    const auto b = convexity_check(bump);
    EXPECT_FALSE(b.convex);
    EXPECT_EQ(b.violations, (std::vector<std::size_t>{1, 3}));
}

TEST(Convexity, ShortHorizonIsReportedNotThrown) {
    const auto s = fig4().summary();
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(s.cstar + (1.5 * s.cstar) * i / 19);
    EXPECT_NO_THROW(convexity_check(s, 0.05, 20, grid));
}

TEST(Proximity, McAndHeuristicLevelsApproachAsTGrows) {
    const auto m = fig4();
    const double c = m.summary().cstar;
    McConfig cfg;
    cfg.npaths = 100000;
    double gap[2];
    int i = 0;
    for (double t : {200.0, 800.0}) {
        const double mc = simulate_level(m, 0.05, t, c, cfg).level;
        gap[i++] = std::abs(mc - solve_heuristic_level(m, 0.05, t, c).level) / std::sqrt(t);
    }
    EXPECT_LT(gap[1], gap[0]);
}
