#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "crossing/coreint.hpp"
#include "crossing/deriv.hpp"
#include "crossing/errors.hpp"
#include "oracle.hpp"

using namespace crossing;

namespace {

constexpr double kM = 1.0, kDsq = 6.0;

CoreParams P(double u, double c, double t) { return {u, c, t, 0.0, kM, kDsq}; }

double A(double u, double c, double t) { return a_kernel(P(u, c, t)); }

std::vector<double> fig1_cgrid() {
    std::vector<double> g;
    for (int i = 0; i < 60; ++i) g.push_back(0.05 + (3.0 - 0.05) * i / 59);
    return g;
}

}  // namespace

TEST(ADc, MatchesFiniteDifference) {
    const double fd = oracle::central([](double c) { return A(40, c, 100); }, 1.0, 1e-5);
    EXPECT_NEAR(a_dc(P(40, 1, 100)), fd, 1e-4 * std::abs(fd));
    for (double c : {0.3, 0.8, 1.2, 2.0})
        for (double u : {20.0, 40.0, 160.0}) {
            const double d = oracle::central([&](double cc) { return A(u, cc, 100); }, c, 1e-5);
            EXPECT_NEAR(a_dc(P(u, c, 100)), d, 1e-4 * std::abs(d) + 1e-10) << c << " " << u;
        }
}

TEST(ADu, MatchesFiniteDifference) {
    const double fd = oracle::central([](double u) { return A(u, 0.8, 100); }, 40.0, 1e-5);
    EXPECT_NEAR(a_du(P(40, 0.8, 100)), fd, 1e-4 * std::abs(fd));
    for (double c : {0.3, 1.0, 1.2, 2.0})
        for (double u : {20.0, 40.0, 160.0}) {
            const double d = oracle::central([&](double uu) { return A(uu, c, 100); }, u, 1e-4);
            EXPECT_NEAR(a_du(P(u, c, 100)), d, 1e-4 * std::abs(d) + 1e-10) << c << " " << u;
        }
}

TEST(ADerivatives, RawAndRearrangedAgree) {
    for (double c : fig1_cgrid()) {
        const auto p = P(40, c, 100);
        // the c-derivative has addends of size u/(c^3 D^2), so compare relative to that
        const double scale = std::max(1.0, 40 / (c * c * c * kDsq));
        EXPECT_NEAR(a_dc(p, DisplayForm::Raw), a_dc(p, DisplayForm::Rearranged), 1e-12 * scale) << c;
        EXPECT_NEAR(a_du(p, DisplayForm::Raw), a_du(p, DisplayForm::Rearranged), 1e-12) << c;
    }
}

TEST(ADerivatives, NeedUnconditionalPositiveArguments) {
    EXPECT_THROW(a_dc({40, 1, 100, 5, kM, kDsq}), DomainError);
    EXPECT_THROW(a_du(P(40, 0, 100)), DomainError);
    EXPECT_THROW(a_du(P(40, 1, 0)), DomainError);
}

TEST(ApproxDerivatives, DecompositionSumsToValue) {
    for (double c : fig1_cgrid()) {
        for (const auto& r : {approx_dc(P(40, c, 100)), approx_du(P(40, c, 100))}) {
            double s = 0;
            for (const auto& [name, v] : r.decomposition) s += v;
            EXPECT_NEAR(s, r.value, 1e-12);
        }
    }
    EXPECT_EQ(approx_dc(P(40, 1, 100)).decomposition.size(), 4u);
    EXPECT_EQ(approx_du(P(40, 1, 100)).decomposition.size(), 2u);
}

TEST(ApproxDerivatives, DomainAndQuality) {
    EXPECT_THROW(approx_dc(P(40, 0, 100)), DomainError);
    EXPECT_THROW(approx_du(P(0, 1, 100)), DomainError);
    EXPECT_EQ(approx_dc(P(2, 1, 100)).quality, Quality::SmallUWarning);
    EXPECT_EQ(approx_dc(P(40, 1, 100)).quality, Quality::LargeU);
    // inside the near-critical band the quadrature path is used
    EXPECT_NO_THROW(approx_dc(P(40, 1.0 + 1e-6, 100)));
}

TEST(ApproxDc, NegativeOnFigureSweep) {
    for (double c : fig1_cgrid())
        if (c < 2.0) EXPECT_LT(approx_dc(P(40, c, 100)).value, 0.0) << c;
}

TEST(ApproxDc, CloseToFiniteDifferenceOfApproximationAtLargeU) {
    // at t = 100 the window is too short for u = 160
    // Plain approximation from M and D^2 alone is the kernel A
    for (double t : {400.0, 1000.0}) {
        const double fd = oracle::central([&](double c) { return A(160, c, t); }, 0.8, 1e-5);
        EXPECT_NEAR(approx_dc(P(160, 0.8, t)).value, fd, 0.1 * std::abs(fd)) << t;
    }
}

TEST(ApproxDu, SignChangeInU) {
    for (double c : {0.8, 1.2}) {
        double last_positive = 0;
        for (double u = 0.5; u <= 200; u += 0.5)
            if (approx_du(P(u, c, 100)).value > 0) last_positive = u;
        for (double u = last_positive + 0.5; u <= 200; u += 0.5) EXPECT_LT(approx_du(P(u, c, 100)).value, 0.0);
        EXPECT_LT(last_positive, 40.0) << c;
    }
}

TEST(ApproxDerivatives, GapToExactDerivativeShrinks) {
    auto dc_gap = [](double u) {
        double g = 0;
        for (double c : fig1_cgrid())
            g = std::max(g, std::abs(approx_dc(P(u, c, 100)).value - a_dc(P(u, c, 100))));
        return g;
    };
    EXPECT_LE(dc_gap(320), 0.5 * dc_gap(160));
    EXPECT_LT(dc_gap(40), 1.0);
    for (double c : {0.8, 1.2}) {
        auto du_gap = [c](double u) { return std::abs(approx_du(P(u, c, 100)).value - a_du(P(u, c, 100))); };
        EXPECT_LE(du_gap(320), 0.5 * du_gap(160)) << c;
    }
}

TEST(Implicit, Circle) {
    const Bivariate F = [](double x, double y) { return x * x + y * y - 1; };
    const Partials d{1.2, 1.6, 2, 0, 2};
    EXPECT_NEAR(implicit_first(F, 0.6, 0.8, d), -0.75, 1e-12);
    EXPECT_NEAR(implicit_second(F, 0.6, 0.8, d), -1.953125, 1e-12);
    EXPECT_NEAR(implicit_first(F, 0.6, 0.8), -0.75, 1e-8);
    EXPECT_NEAR(implicit_second(F, 0.6, 0.8), -1.953125, 1e-5);
}

TEST(Implicit, LineParabolaExponential) {
    const Bivariate line = [](double x, double y) { return x - y; };
    EXPECT_NEAR(implicit_first(line, 1, 1, Partials{1, -1, 0, 0, 0}), 1.0, 1e-12);
    EXPECT_NEAR(implicit_first(line, 1, 1), 1.0, 1e-8);
    EXPECT_NEAR(implicit_second(line, 1, 1, Partials{1, -1, 0, 0, 0}), 0.0, 1e-12);
    EXPECT_NEAR(implicit_second(line, 1, 1), 0.0, 1e-6);

    const Bivariate par = [](double x, double y) { return x * x - y; };
    for (double x : {-1.5, 0.3, 2.0}) {
        EXPECT_NEAR(implicit_first(par, x, x * x, Partials{2 * x, -1, 2, 0, 0}), 2 * x, 1e-8);
        EXPECT_NEAR(implicit_second(par, x, x * x, Partials{2 * x, -1, 2, 0, 0}), 2.0, 1e-8);
    }

    // y = exp(x) written as log(y) - x = 0
    const Bivariate ex = [](double x, double y) { return std::log(y) - x; };
    for (double x : {-1.0, 0.0, 1.5}) {
        const double y = std::exp(x);
        const Partials d{-1, 1 / y, 0, 0, -1 / (y * y)};
        EXPECT_NEAR(implicit_first(ex, x, y, d), y, 1e-8 * y);
        EXPECT_NEAR(implicit_second(ex, x, y, d), y, 1e-8 * y);
    }
}

TEST(Implicit, Errors) {
    const Bivariate F = [](double x, double y) { return x * x + y * y - 1; };
    EXPECT_THROW(implicit_first(F, 1, 0, Partials{2, 0, 2, 0, 2}), SingularImplicitError);
    EXPECT_THROW(implicit_first(F, 0.5, 0.5), DomainError);
}

TEST(Implicit, FixedProbabilityLevelSlope) {
    const double alpha = 0.05, t = 100;
    auto level = [&](double c) {
        return oracle::bisect([&](double u) { return A(u, c, t) - alpha; }, 60, 400);
    };
    const Bivariate F = [&](double c, double u) { return A(u, c, t) - alpha; };
    for (double c : {0.3, 0.6, 0.8}) {
        const double u = level(c);
        const double h = 1e-4;
        const double slope = (level(c + h) - level(c - h)) / (2 * h);
        EXPECT_NEAR(implicit_first(F, c, u), slope, 1e-3 * std::max(1.0, std::abs(slope))) << c;
        const Partials d{a_dc(P(u, c, t)), a_du(P(u, c, t))};
        EXPECT_NEAR(implicit_first(F, c, u, d), slope, 1e-3 * std::max(1.0, std::abs(slope))) << c;
    }
}

TEST(Implicit, LevelCurveConvexAboveCritical) {
    const double alpha = 0.05, t = 3200;
    const Bivariate F = [&](double c, double u) { return A(u, c, t) - alpha; };
    for (double c : {1.3, 1.6, 2.0}) {
        const double u = oracle::bisect([&](double uu) { return A(uu, c, t) - alpha; }, 1, 200);
        EXPECT_GT(implicit_second(F, c, u), 0.0) << c;
    }
}
