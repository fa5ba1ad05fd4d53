#include "crossing/special.hpp"

#include <cmath>
#include <vector>
#include <limits>
#include <numbers>

#include "crossing/errors.hpp"

namespace crossing {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

bool is_half_integer(double p) {
    const double twice = 2.0 * p;
    return std::abs(twice - std::round(twice)) < 1e-12 &&
           std::abs(std::fmod(std::round(twice), 2.0)) == 1.0;
}

void check_gig(const GigParams& g) {
    if (!(g.mu > 0) || !(g.lambda > 0) || !std::isfinite(g.p))
        throw DomainError("GIG parameters need mu > 0, lambda > 0");
}

// log(e^z K_p(z))
double log_scaled_bessel_k(double p, double z) {
    if (is_half_integer(p)) return std::log(bessel_k_half_integer_scaled(p, z));
    if (z < 600.0) {
        const double k = std::cyl_bessel_k(std::abs(p), z);
        if (k > 0 && std::isfinite(k)) return std::log(k) + z;
    }
    // large-argument expansion
    const double mu4 = 4.0 * p * p;
    const double s = 1.0 + (mu4 - 1.0) / (8.0 * z) + (mu4 - 1.0) * (mu4 - 9.0) / (128.0 * z * z);
    return 0.5 * std::log(std::numbers::pi / (2.0 * z)) + std::log(s);
}

double log_gig_norm(const GigParams& g) {
    // log of e^{-omega} / (2 mu^p K_p(omega)), omega = lambda/mu
    const double omega = g.lambda / g.mu;
    return -std::log(2.0) - g.p * std::log(g.mu) - log_scaled_bessel_k(g.p, omega);
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_pdf(double mean, double variance, double x) {
    if (!(variance > 0)) throw DomainError("normal_pdf: variance must be positive");
    const double d = x - mean;
    return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_normal_cdf(double x) {
    if (x > 0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
    if (x > -37.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
    // Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
    const double r = 1.0 / (x * x);
    double term = 1.0, series = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * r;
        series += term;
    }
    return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double normal_cdf_diff(double a, double b) {
    if (a > 0) return normal_cdf(-a) - normal_cdf(-b);
    return normal_cdf(b) - normal_cdf(a);
}

double normal_quantile(double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("normal_quantile: alpha must lie in (0,1)");
    // lower-tail quantile of p = alpha, then z = -x
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p = alpha;
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement, twice to reach full precision
    for (int k = 0; k < 2; ++k) {
        const double e = (x < 0 ? normal_cdf(x) - p : (1.0 - p) - normal_cdf(-x));
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x = x - u / (1.0 + 0.5 * x * u);
    }
    return -x;
}

double bessel_k_half_integer_scaled(double p, double z) {
    if (!(z > 0)) throw DomainError("bessel_k_half_integer: z must be positive");
    if (!is_half_integer(p)) throw UnsupportedOrderError("bessel_k_half_integer: order must be a half-integer");
    const double nu = std::abs(p);
    double km = std::sqrt(std::numbers::pi / (2.0 * z));  // K_{-1/2}
    double k = km;                                        // K_{1/2}
    for (double order = 0.5; order < nu - 0.25; order += 1.0) {
        const double next = km + (2.0 * order / z) * k;
        km = k;
        k = next;
    }
    return k;
}

double bessel_k_half_integer(double p, double z) {
    return bessel_k_half_integer_scaled(p, z) * std::exp(-z);
}

double gig_pdf(const GigParams& g, double x) {
    check_gig(g);
    if (!(x > 0)) throw DomainError("gig_pdf: x must be positive");
    // e^{-omega}/(2 mu^p K_p(omega)) x^{p-1} exp(-lambda (x-mu)^2/(2 mu^2 x))
    const double log_kernel =
        (g.p - 1.0) * std::log(x) - g.lambda * (x - g.mu) * (x - g.mu) / (2.0 * g.mu * g.mu * x);
    return std::exp(log_gig_norm(g) + log_kernel);
}

double gig_pdf_phi_form(const GigParams& g, double x) {
    check_gig(g);
    if (!(x > 0)) throw DomainError("gig_pdf: x must be positive");
    const double arg = std::sqrt(g.lambda / x) * (x / g.mu - 1.0);
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(x, g.p - 1.0) * normal_pdf(arg) *
           std::exp(log_gig_norm(g));
}

double gig_cdf(const GigParams& g, double x, const QuadratureConfig& quad) {
    check_gig(g);
    if (!(x > 0)) throw DomainError("gig_cdf: x must be positive");
    const double mu = g.mu, lam = g.lambda;
    const double s = std::sqrt(lam / x);
    const double a = s * (x / mu - 1.0);
    const double b = -s * (x / mu + 1.0);
    const double shift = 2.0 * lam / mu;
    double value;
    if (std::abs(g.p + 0.5) < 1e-14) {
        value = normal_cdf(a) + std::exp(shift + log_normal_cdf(b));
    } else if (std::abs(g.p + 2.5) < 1e-14) {
        const double r = (lam * lam - 3.0 * lam * mu + 3.0 * mu * mu) /
                         (lam * lam + 3.0 * lam * mu + 3.0 * mu * mu);
        const double extra = 2.0 * std::sqrt(lam) * mu * mu * (lam + 3.0 * x) /
                             (std::pow(x, 1.5) * (lam * lam + 3.0 * lam * mu + 3.0 * mu * mu)) *
                             normal_pdf(a);
        value = normal_cdf(a) + r * std::exp(shift + log_normal_cdf(b)) + extra;
    } else {
        // integrate from 0; the kernel vanishes there faster than any power.
        // Geometric breakpoints so that no panel is long compared to the bulk.
        std::vector<double> bp;
        for (double b = mu / 1024.0; b < x; b *= 2.0) bp.push_back(b);
        auto f = [&](double y) { return y > 0 ? gig_pdf(g, y) : 0.0; };
        value = integrate(f, 0.0, x, quad, bp).value;
    }
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace crossing
