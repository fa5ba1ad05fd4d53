#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace crossing {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;        ///< sum of |K21 - G10| over the final partition
    int subdivisions = 0;      ///< number of bisections performed
    bool converged = false;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule on [-1, 1].
// Index 10 is the centre; odd indices are the Gauss nodes.
extern const double kKronrodNodes[11];
extern const double kKronrodWeights[11];
extern const double kGaussWeights[5];

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk21(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kron = fc * kKronrodWeights[10];
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double fsum = f(centre - dx) + f(centre + dx);
        kron += kKronrodWeights[j] * fsum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * fsum;
    }
    kron *= half;
    gauss *= half;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (21 point) integration of f over [a, b].
/// Interior breakpoints (ignored if outside (a, b)) seed the initial partition.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {},
                           std::span<const double> breakpoints = {}) {
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Segment> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto s = detail::gk21(f, cuts[i], cuts[i + 1]);
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    int splits = 0;
    while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) &&
           splits < cfg.max_subdivisions) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
        heap.pop();
        auto left = detail::gk21(f, worst.a, mid);
        auto right = detail::gk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // recompute sums to shed accumulated rounding from the running updates
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sign * total;
    out.error = err;
    out.subdivisions = splits;
    out.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    return out;
}

/// Integral of f over [a, inf) through x = a + s/(1-s).
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureConfig& cfg = {},
                                       std::span<const double> breakpoints = {}) {
    auto g = [&](double s) {
        if (s >= 1.0) return 0.0;
        const double one_minus = 1.0 - s;
        const double x = a + s / one_minus;
        const double v = f(x) / (one_minus * one_minus);
        return std::isfinite(v) ? v : 0.0;
    };
    std::vector<double> mapped;
    for (double p : breakpoints)
        if (p > a) mapped.push_back((p - a) / (1.0 + p - a));
    return integrate(g, 0.0, 1.0, cfg, mapped);
}

/// Composite trapezoid rule on equally spaced samples.
inline double trapezoid(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

}  // namespace crossing
