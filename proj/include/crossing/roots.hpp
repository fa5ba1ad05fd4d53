#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "crossing/errors.hpp"

namespace crossing {

struct RootOptions {
    double width_tol = 1e-3;    ///< bisection phase stops at this bracket width
    double f_tol = 1e-10;       ///< polish stops once |f| <= f_tol
    double x_tol = 0.0;         ///< polish also stops at this bracket width
    int max_iter = 300;
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;  ///< |f(root)|
    double lo = 0.0, hi = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection down to width_tol, then Illinois regula falsi (keeps the bracket).
/// f(lo) and f(hi) must differ in sign.
template <class F>
RootResult solve_bracketed(F&& f, double lo, double hi, const RootOptions& opt = {}) {
    double flo = f(lo), fhi = f(hi);
    RootResult r;
    r.lo = lo;
    r.hi = hi;
    if (flo == 0.0 || fhi == 0.0) {
        r.root = flo == 0.0 ? lo : hi;
        r.converged = true;
        return r;
    }
    if ((flo > 0) == (fhi > 0))
        throw BracketError("no sign change on bracket", lo, hi, flo, fhi);

    int it = 0;
    double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double fbest = std::min(std::abs(flo), std::abs(fhi));
    auto accept = [&](double x, double fx) {
        if (std::abs(fx) < fbest) {
            best = x;
            fbest = std::abs(fx);
        }
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
            return 0;
        }
        hi = x;
        fhi = fx;
        return 1;
    };

    while (hi - lo > opt.width_tol && it < opt.max_iter && fbest > opt.f_tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        accept(mid, f(mid));
        ++it;
    }

    int last_side = -1;
    while (it < opt.max_iter && fbest > opt.f_tol && hi - lo > opt.x_tol) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) break;
        const int side = accept(x, f(x));
        // Illinois: halve the retained endpoint value after repeated same-side steps
        if (side == last_side) {
            if (side == 0)
                fhi *= 0.5;
            else
                flo *= 0.5;
        }
        last_side = side;
        ++it;
    }
    r.root = best;
    r.residual = fbest;
    r.lo = lo;
    r.hi = hi;
    r.iterations = it;
    r.converged = fbest <= opt.f_tol || hi - lo <= opt.x_tol;
    return r;
}

/// Newton iteration confined to [lo, hi]; steps leaving the bracket fall back to bisection.
template <class F, class DF>
RootResult solve_newton_safeguarded(F&& f, DF&& df, double lo, double hi,
                                    const RootOptions& opt = {}) {
    double flo = f(lo), fhi = f(hi);
    if ((flo > 0) == (fhi > 0) && flo != 0.0 && fhi != 0.0)
        throw BracketError("no sign change on bracket", lo, hi, flo, fhi);
    RootResult r;
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    int it = 0;
    while (it < opt.max_iter && std::abs(fx) > opt.f_tol && hi - lo > opt.x_tol) {
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        const double d = df(x);
        double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
        fx = f(x);
        ++it;
    }
    r.root = x;
    r.residual = std::abs(fx);
    r.lo = lo;
    r.hi = hi;
    r.iterations = it;
    r.converged = r.residual <= opt.f_tol || hi - lo <= opt.x_tol;
    return r;
}

}  // namespace crossing
