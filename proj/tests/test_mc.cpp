#include <gtest/gtest.h>

#include <cmath>

#include "crossing/coreint.hpp"
#include "crossing/mc.hpp"

using namespace crossing;

namespace {

RenewalModel expexp() { return RenewalModel::ordinary(make_exponential(1.0), make_exponential(1.0)); }
RenewalModel fig4() { return RenewalModel::ordinary(make_erlang(1.6, 2), make_exponential(0.6)); }

McConfig config(std::uint64_t n, unsigned threads = 0) {
    McConfig c;
    c.npaths = n;
    c.threads = threads;
    return c;
}

}  // namespace

TEST(Indicator, MatchesFullTrajectoryScan) {
    for (const auto& m : {expexp(), fig4()})
        for (double c : {0.0, 0.7, 1.0, 1.5})
            for (int i = 0; i < 10000; ++i) {
                RandomStream a(99, i), b(99, i);
                ASSERT_EQ(crossing_indicator(m, 5, c, 20, a), crossing_indicator_reference(m, 5, c, 20, b))
                    << c << " " << i;
            }
}

TEST(Indicator, NoJumpsBeforeHorizon) {
    const auto m = expexp();
    int hits = 0;
    for (int i = 0; i < 10000; ++i) {
        RandomStream r(1, i);
        hits += crossing_indicator(m, 1e-9, 1, 1e-12, r);
    }
    EXPECT_EQ(hits, 0);
}

TEST(Indicator, FirstJumpAtZeroLevel) {
    // with u = 0 the first epoch alone crosses with probability P{Y > c T} = 1/2
    const auto e = estimate_crossing_prob(expexp(), 0, 1, 50, config(100000));
    EXPECT_GT(e.phat, 0.5);
    const auto m = expexp();
    int first = 0, any = 0;
    for (int i = 0; i < 20000; ++i) {
        RandomStream r(5, i);
        const double T = m.first_interval->sample(r), Y = m.jump->sample(r);
        RandomStream s(5, i);
        const bool hit = crossing_indicator(m, 0, 1, 50, s);
        if (Y > T && T <= 50) {
            ++first;
            EXPECT_TRUE(hit);
        }
        any += hit;
    }
    EXPECT_GE(any, first);
}

TEST(Estimate, StdErrorFormulaAndUnreachableLevel) {
    const auto e = estimate_crossing_prob(expexp(), 10, 1, 50, config(40000));
    EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(e.phat * (1 - e.phat) / e.npaths));
    EXPECT_EQ(e.hits, static_cast<std::uint64_t>(std::llround(e.phat * e.npaths)));
    EXPECT_EQ(e.seed, McConfig{}.seed);
    const auto big = estimate_crossing_prob(expexp(), 1e6, 1, 100, config(100000));
    EXPECT_EQ(big.phat, 0.0);
    EXPECT_EQ(big.std_error, 0.0);
}

TEST(Estimate, SameSeedSameAnswerAcrossThreadCounts) {
    const auto m = fig4();
    const auto a = estimate_crossing_prob(m, 30, 1.2, 100, config(50000, 1));
    for (unsigned th : {2u, 3u, 8u}) {
        const auto b = estimate_crossing_prob(m, 30, 1.2, 100, config(50000, th));
        EXPECT_EQ(a.hits, b.hits);
        EXPECT_EQ(a.phat, b.phat);
    }
    const auto l1 = simulate_level(m, 0.05, 100, 1.2, config(20000, 1));
    const auto l4 = simulate_level(m, 0.05, 100, 1.2, config(20000, 4));
    EXPECT_EQ(l1.level, l4.level);
    auto other = config(50000, 2);
    other.seed = 7;
    EXPECT_NE(estimate_crossing_prob(m, 30, 1.2, 100, other).hits, a.hits);
}

TEST(Estimate, ZeroRateIsCompoundTail) {
    const auto m = expexp();
    const auto cfg = config(100000);
    for (double u : {400.0, 420.0, 440.0}) {
        const auto e = estimate_crossing_prob(m, u, 0, 400, cfg);
        const auto v = estimate_compound_tail(m, u, 400, cfg);
        EXPECT_EQ(e.hits, v.hits);
        EXPECT_NEAR(e.phat, normal_compound_tail(m, u, 400), 3 * e.std_error + 0.02) << u;
    }
}

TEST(Estimate, InverseGaussianApproximation) {
    const auto m = expexp();
    const auto e = estimate_crossing_prob(m, 40, 1, 100, config(1000000));
    EXPECT_NEAR(e.phat, approx_crossing_prob(m, 40, 1, 100).value, 3 * e.std_error + 0.01);
}

TEST(Level, MonotoneInRateWithCommonNumbers) {
    const auto m = fig4();
    const auto cfg = config(50000);
    double prev = INFINITY;
    for (double c : {0.6, 0.9, 1.2, 4.0 / 3.0, 1.6}) {
        const auto r = simulate_level(m, 0.05, 200, c, cfg);
        EXPECT_LE(r.level, prev) << c;
        EXPECT_EQ(r.method, LevelMethod::McBisection);
        EXPECT_LE(r.bracket_lo, r.level);
        EXPECT_GE(r.bracket_hi, r.level);
        prev = r.level;
    }
}

TEST(Level, HitsTargetProbability) {
    const auto m = fig4();
    const auto cfg = config(50000);
    const auto r = simulate_level(m, 0.05, 200, 1.0, cfg);
    const auto e = estimate_crossing_prob(m, r.level, 1.0, 200, cfg);
    EXPECT_NEAR(e.phat, 0.05, 2e-3);
}

TEST(Suprema, ConsistentWithIndicator) {
    const auto m = expexp();
    const auto cfg = config(5000);
    const auto sup = simulate_suprema(m, 1, 30, cfg);
    ASSERT_EQ(sup.size(), 5000u);
    std::uint64_t above = 0;
    for (double s : sup) above += s > 5;
    EXPECT_EQ(above, estimate_crossing_prob(m, 5, 1, 30, cfg).hits);
}
