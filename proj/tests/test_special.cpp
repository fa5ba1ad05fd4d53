#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"
#include "oracle.hpp"

using namespace crossing;

TEST(Normal, CdfBasics) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_pdf(0.0, 1.0, 0.0), 0.3989423, 1e-7);
    EXPECT_NEAR(normal_cdf(1.95996), 0.975, 1e-6);
}

TEST(Normal, CdfMatchesSeries) {
    for (double x = -6.0; x <= 6.0; x += 0.25) EXPECT_NEAR(normal_cdf(x), oracle::phi_series(x), 1e-14) << x;
}

TEST(Normal, PdfRejectsNonPositiveVariance) {
    EXPECT_THROW(normal_pdf(0.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(normal_pdf(0.0, -1.0, 1.0), DomainError);
}

TEST(Normal, LogCdfDeepTail) {
    for (double x : {-1.0, -5.0, -20.0, -36.0}) EXPECT_NEAR(log_normal_cdf(x), std::log(normal_cdf(x)), 1e-10);
    // Mills ratio leading terms at x = -60
    const double x = -60;
    const double approx = -0.5 * x * x - std::log(-x) - 0.5 * std::log(2 * std::numbers::pi) + std::log1p(-1 / (x * x));
    EXPECT_NEAR(log_normal_cdf(x), approx, 1e-6);
}

TEST(Normal, CdfDiffAvoidsCancellation) {
    EXPECT_NEAR(normal_cdf_diff(8.0, 9.0), oracle::simpson([](long double s) {
                    return std::exp(-0.5L * s * s) / std::sqrt(2 * std::numbers::pi_v<long double>);
                }, 8.0L, 9.0L, 2000),
                1e-20);
}

TEST(Quantile, Examples) {
    EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-14);
    auto bis = [](double a) { return oracle::bisect([a](double z) { return 1 - oracle::phi_series(z) - a; }, -10, 10); };
    EXPECT_NEAR(normal_quantile(0.05), bis(0.05), 1e-10);
    EXPECT_NEAR(normal_quantile(0.025), bis(0.025), 1e-10);
    EXPECT_NEAR(normal_quantile(0.05), 1.644854, 1e-6);
    EXPECT_NEAR(normal_quantile(0.025), 1.959964, 1e-6);
}

TEST(Quantile, ResidualAndRoundTrip) {
    for (double a : {1e-12, 1e-6, 0.001, 0.01, 0.1, 0.3, 0.7, 0.99}) {
        const double z = normal_quantile(a);
        EXPECT_NEAR(normal_cdf(-z) / a, 1.0, 1e-10) << a;
    }
    // Phi(6) is within 1e-9 of 1 and rounds away most digits, so go through the small tail
    for (double x = -6.0; x <= 6.0; x += 0.5) {
        const double z = x >= 0 ? normal_quantile(normal_cdf(-x)) : -normal_quantile(normal_cdf(x));
        EXPECT_NEAR(z, x, 1e-9) << x;
    }
}

TEST(Quantile, RejectsOutOfRange) {
    EXPECT_THROW(normal_quantile(0.0), DomainError);
    EXPECT_THROW(normal_quantile(1.0), DomainError);
    EXPECT_THROW(normal_quantile(-0.5), DomainError);
}

namespace {

// K_p(z) = int_0^inf exp(-z cosh s) cosh(p s) ds
double bessel_integral(double p, double z) {
    return oracle::simpson([=](long double s) { return std::exp(-z * std::cosh(s)) * std::cosh(p * s); }, 0.0L,
                           30.0L, 60000);
}

}  // namespace

TEST(Bessel, HalfOrderValue) {
    EXPECT_NEAR(bessel_k_half_integer(0.5, 1.0), 0.461069, 1e-6);
    EXPECT_NEAR(bessel_k_half_integer(0.5, 1.0), std::sqrt(std::numbers::pi / 2) * std::exp(-1.0), 1e-15);
    EXPECT_DOUBLE_EQ(bessel_k_half_integer(-0.5, 1.0), bessel_k_half_integer(0.5, 1.0));
}

TEST(Bessel, RecurrenceMatchesIntegral) {
    for (double p : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5})
        for (double z : {0.3, 1.0, 2.0, 5.0}) {
            const double ref = bessel_integral(p, z);
            EXPECT_NEAR(bessel_k_half_integer(p, z), ref, 1e-9 * std::max(1.0, ref)) << p << " " << z;
        }
    EXPECT_NEAR(bessel_k_half_integer(1.5, 2.0), bessel_k_half_integer(0.5, 2.0) * 1.5, 1e-15);
}

TEST(Bessel, ScaledForm) {
    EXPECT_NEAR(bessel_k_half_integer_scaled(2.5, 800.0),
                std::sqrt(std::numbers::pi / 1600.0) * (1 + 3 / 800.0 + 3 / (800.0 * 800.0)), 1e-15);
}

TEST(Bessel, Errors) {
    EXPECT_THROW(bessel_k_half_integer(0.5, 0.0), DomainError);
    EXPECT_THROW(bessel_k_half_integer(1.0, 1.0), UnsupportedOrderError);
}

namespace {

// numerically normalised kernel x^{p-1} exp(-lambda (x - mu)^2 / (2 mu^2 x))
struct KernelOracle {
    GigParams g;
    double upper;
    long double norm;
    explicit KernelOracle(GigParams gp) : g(gp) {
        upper = 60.0 * g.mu + 60.0 * g.mu * g.mu / g.lambda + 10.0;
        norm = integral(upper);
    }
    long double kernel(long double x) const {
        if (x <= 0) return 0.0L;
        return std::pow(x, g.p - 1.0L) * std::exp(-g.lambda * (x - g.mu) * (x - g.mu) / (2.0L * g.mu * g.mu * x));
    }
    double pdf(double x) const { return static_cast<double>(kernel(x) / norm); }
    // Simpson on geometrically growing pieces
    long double integral(double x) const {
        long double total = 0, lo = 0;
        for (double hi = g.mu / 256.0;; hi *= 2.0) {
            const double top = std::min(hi, x);
            total += oracle::simpson([this](long double y) { return kernel(y); }, lo, top, 4000);
            if (top >= x) break;
            lo = top;
        }
        return total;
    }
    double cdf(double x) const { return static_cast<double>(integral(x) / norm); }
};

}  // namespace

TEST(Gig, NormalisesToOne) {
    const GigParams g{1.0, 2.0, -0.5};
    const KernelOracle k(g);
    const double total = oracle::simpson([&](long double x) { return x > 0 ? gig_pdf(g, x) : 0.0; }, 0.0L, 10.0L,
                                         200000) +
                         oracle::simpson([&](long double x) { return gig_pdf(g, x); }, 10.0L, k.upper, 200000);
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Gig, TwoFormsAgree) {
    for (double p : {-0.5, -2.5, 0.7})
        for (double x : {0.2, 1.0, 3.0}) {
            const GigParams g{1.0, 1.0, p};
            EXPECT_NEAR(gig_pdf(g, x), gig_pdf_phi_form(g, x), 1e-14 * std::max(1.0, gig_pdf(g, x)));
        }
}

TEST(Gig, PdfMatchesNormalisedKernel) {
    for (GigParams g : {GigParams{1, 4, -0.5}, GigParams{2, 3, -2.5}, GigParams{1.5, 0.7, 1.3}}) {
        const KernelOracle k(g);
        for (double x : {0.3, 1.0, 2.5}) EXPECT_NEAR(gig_pdf(g, x), k.pdf(x), 1e-9) << g.p << " " << x;
    }
}

TEST(Gig, ClosedFormsMatchQuadratureSweep) {
    for (double p : {-0.5, -2.5})
        for (double mu : {0.5, 1.0, 2.0, 5.0})
            for (double lam : {0.5, 1.0, 2.0, 10.0}) {
                const GigParams g{mu, lam, p};
                const KernelOracle k(g);
                for (double x : {0.5, 1.0, 2.0, 5.0})
                    EXPECT_NEAR(gig_cdf(g, x), k.cdf(x), 1e-8) << p << " " << mu << " " << lam << " " << x;
            }
}

TEST(Gig, CdfLimitsAndMonotone) {
    for (double p : {-0.5, -2.5, 0.3}) {
        const GigParams g{1.0, 2.0, p};
        EXPECT_LT(gig_cdf(g, 1e-6), 1e-12);
        EXPECT_NEAR(gig_cdf(g, 1e4), 1.0, 1e-10);
        double prev = 0;
        for (double x = 0.05; x < 10; x += 0.05) {
            const double v = gig_cdf(g, x);
            EXPECT_GE(v, prev - 1e-15);
            prev = v;
        }
    }
}

TEST(Gig, LargeShiftDoesNotOverflow) {
    // 2 lambda / mu far beyond the double exponent range
    const GigParams g{0.01, 10.0, -0.5};
    for (double x : {0.005, 0.01, 0.02}) {
        const double v = gig_cdf(g, x);
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_NEAR(gig_cdf(g, 0.01), KernelOracle(g).cdf(0.01), 1e-8);
}

TEST(Gig, DomainErrors) {
    EXPECT_THROW(gig_pdf({1, 1, -0.5}, 0.0), DomainError);
    EXPECT_THROW(gig_pdf({0, 1, -0.5}, 1.0), DomainError);
    EXPECT_THROW(gig_cdf({1, -1, -0.5}, 1.0), DomainError);
}
