#include "crossing/coreint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"

namespace crossing {

namespace {

struct Effective {
    double u;  // u + c v
    double t;  // t - v
};

Effective effective(const CoreParams& p) {
    if (!(p.Dsq > 0) || !(p.M > 0)) throw DomainError("M and D^2 must be positive");
    if (p.c < 0 || p.v < 0 || p.u < 0) throw DomainError("u, c, v must be nonnegative");
    const double ue = p.u + p.c * p.v;
    if (!(ue > 0)) throw DomainError("level u + c v must be positive");
    return {ue, p.t - p.v};
}

// Mode and spread, in x = w - 1, of the inverse Gaussian law behind E^k.
std::vector<double> peak_breakpoints(double c, double M, double Dsq, double u, double xmax) {
    const double lam = u / (c * c * Dsq);
    const double drift = std::abs(1.0 - c * M);
    double mode, sd;
    if (drift == 0.0) {
        mode = lam / 3.0;
        sd = lam;
    } else {
        const double mu = 1.0 / drift;
        const double r = 1.5 * mu / lam;
        mode = mu * (std::sqrt(1.0 + r * r) - r);
        sd = std::sqrt(mu * mu * mu / lam);
    }
    std::vector<double> bp;
    for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
        const double x = mode - 1.0 + k * sd;
        if (x > 0 && x < xmax) bp.push_back(x);
    }
    return bp;
}

// F(w2) - F(w1) for the inverse Gaussian with mean mu and shape lam
double ig_mass(double w1, double w2, double mu, double lam) {
    auto a = [&](double w) { return std::sqrt(lam / w) * (w / mu - 1.0); };
    auto b = [&](double w) { return -std::sqrt(lam / w) * (w / mu + 1.0); };
    const double shift = 2.0 * lam / mu;
    const double central = normal_cdf_diff(a(w1), a(w2));
    const double reflected = std::exp(shift + log_normal_cdf(b(w2))) - std::exp(shift + log_normal_cdf(b(w1)));
    return central + reflected;
}

}  // namespace

bool near_critical(double c, double M) { return std::abs(1.0 - c * M) <= 1e-4 * M; }

bool small_u(double u, double M, double Dsq) { return u * M * M / Dsq < 5.0; }

double elem_integral(int k, const CoreParams& p, const QuadratureConfig& quad) {
    if (k < 0) throw DomainError("elem_integral: k must be nonnegative");
    const auto e = effective(p);
    if (e.t <= 0) return 0.0;
    if (!(p.c > 0)) throw DomainError("elem_integral: c = 0 has a degenerate window; use elem_limit_c0");
    const double xmax = p.c * e.t / e.u;
    const double m = p.c * p.M;
    const double s2 = p.c * p.c * p.Dsq / e.u;
    auto f = [&](double x) {
        const double w = x + 1.0;
        const double d = x - m * w;
        const double var = s2 * w;
        return std::pow(w, -k) * std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
    };
    const auto bp = peak_breakpoints(p.c, p.M, p.Dsq, e.u, xmax);
    return integrate(f, 0.0, xmax, quad, bp).value;
}

double elem_closed1(const CoreParams& p) {
    const auto e = effective(p);
    if (e.t <= 0) return 0.0;
    if (!(p.c > 0)) throw DomainError("elem_closed1: c must be positive");
    if (near_critical(p.c, p.M)) throw NearCriticalError("elem_closed1: c inside the near-critical band");
    const double w2 = 1.0 + p.c * e.t / e.u;
    const double lam = e.u / (p.c * p.c * p.Dsq);
    const double drift = 1.0 - p.c * p.M;
    if (drift > 0) return std::max(0.0, ig_mass(1.0, w2, 1.0 / drift, lam));
    const double mu_hat = -1.0 / drift;
    // e^{-2 lam/mu_hat} [F(w2) - F(w1)]; the reflected part carries e^{+2 lam/mu_hat}
    auto a = [&](double w) { return std::sqrt(lam / w) * (w / mu_hat - 1.0); };
    auto b = [&](double w) { return -std::sqrt(lam / w) * (w / mu_hat + 1.0); };
    const double central = std::exp(-2.0 * lam / mu_hat) * normal_cdf_diff(a(1.0), a(w2));
    const double reflected = normal_cdf_diff(b(1.0), b(w2));
    return std::max(0.0, central + reflected);
}

double elem_limit_c0(double u, double t, double M, double Dsq) {
    if (!(u > 0) || !(t > 0)) throw DomainError("elem_limit_c0: u and t must be positive");
    const double D = std::sqrt(Dsq);
    return normal_cdf_diff((M * u - t) / (D * std::sqrt(u)), M * std::sqrt(u) / D);
}

double elem_limit_cstar(double u, double t, double M, double Dsq, double cstar) {
    if (!(u > 0) || !(t > 0)) throw DomainError("elem_limit_cstar: u and t must be positive");
    const double D = std::sqrt(Dsq);
    return 2.0 * normal_cdf_diff(M * u / (D * std::sqrt(u + cstar * t)), M * std::sqrt(u) / D);
}

double a_kernel(const CoreParams& p) {
    const auto e = effective(p);
    if (e.t <= 0) return 0.0;
    if (p.c == 0) return elem_limit_c0(e.u, e.t, p.M, p.Dsq);
    if (std::abs(1.0 - p.c * p.M) <= 1e-14) return elem_limit_cstar(e.u, e.t, p.M, p.Dsq, 1.0 / p.M);
    if (near_critical(p.c, p.M)) return elem_integral(1, p);
    return elem_closed1(p);
}

ApproxResult approx_crossing_prob(const RenewalModel& model, double u, double c, double t,
                                  ApproxVariant variant) {
    const auto s = model.summary();
    if (!(u > 0)) throw DomainError("approx_crossing_prob: u must be positive");
    if (c < 0) throw DomainError("approx_crossing_prob: c must be nonnegative");
    double value = 0.0;
    if (t > 0) {
        const auto& f1 = *model.first_interval;
        const QuadratureConfig outer{1e-10, 1e-8, 200};
        const double m1 = f1.mean();
        const double bp[] = {0.25 * m1, m1, 3.0 * m1, 10.0 * m1};
        switch (variant) {
            case ApproxVariant::Plain:
                value = a_kernel({u, c, t, 0.0, s.M, s.Dsq});
                break;
            case ApproxVariant::ConditionalWeighted:
                value = integrate(
                            [&](double v) {
                                return v >= t ? 0.0 : a_kernel({u, c, t, v, s.M, s.Dsq}) * f1.density(v);
                            },
                            0.0, t, outer, bp)
                            .value;
                break;
            case ApproxVariant::ConvolutionWeighted:
                value = integrate(
                            [&](double v) {
                                return v >= t ? 0.0 : a_kernel({u, c, t - v, 0.0, s.M, s.Dsq}) * f1.density(v);
                            },
                            0.0, t, outer, bp)
                            .value;
                break;
        }
    }
    const double clamped = std::clamp(value, 0.0, 1.0);
    const bool was_clamped = clamped != value;
    const Quality q = (was_clamped || small_u(u, s.M, s.Dsq)) ? Quality::SmallUWarning : Quality::LargeU;
    return {clamped, was_clamped, q};
}

double compound_mean(const MomentSummary& s, double t) {
    return (s.EY / s.ET) * t + s.EY * (s.DT - s.ET * s.ET) / (2.0 * s.ET * s.ET);
}

double compound_variance(const MomentSummary& s, double t, VarianceConvention conv) {
    const double num = s.EY * s.EY * s.DT + s.ET * s.ET * s.DY;
    const double den = conv == VarianceConvention::Printed ? s.EY * s.EY * s.EY : s.ET * s.ET * s.ET;
    return num / den * t;
}

double normal_compound_tail(const RenewalModel& model, double u, double t, VarianceConvention conv) {
    const auto s = model.summary();
    const double var = compound_variance(s, t, conv);
    if (!(var > 0)) throw DomainError("normal_compound_tail: variance must be positive");
    return normal_cdf(-(u - compound_mean(s, t)) / std::sqrt(var));
}

}  // namespace crossing
