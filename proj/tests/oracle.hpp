#pragma once

// Reference computations used only by the tests. Deliberately naive and
// independent of the library's own quadrature, special functions and solvers.

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson in long double with n (even) panels.
inline double simpson(const std::function<long double(long double)>& f, long double a, long double b, int n) {
    if (n % 2) ++n;
    const long double h = (b - a) / n;
    long double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
    return static_cast<double>(s * h / 3.0L);
}

/// Standard normal cdf from the series Phi(x) = 1/2 + phi(x) sum x^{2n+1}/(2n+1)!!.
inline double phi_series(double x) {
    const long double xl = x;
    long double term = xl, sum = xl;
    for (int n = 1; n < 500 && std::fabs(term) > 1e-30L * std::fabs(sum); ++n) {
        term *= xl * xl / (2 * n + 1);
        sum += term;
    }
    const long double dens = std::exp(-0.5L * xl * xl) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    return static_cast<double>(0.5L + dens * sum);
}

/// Plain bisection for a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Central difference.
inline double central(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace oracle
