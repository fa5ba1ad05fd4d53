#include "crossing/level.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crossing/coreint.hpp"
#include "crossing/errors.hpp"
#include "crossing/roots.hpp"
#include "crossing/special.hpp"

namespace crossing {

std::string to_string(LevelMethod m) {
    switch (m) {
        case LevelMethod::RootOnA: return "root_on_a";
        case LevelMethod::AsymSub: return "asym_sub";
        case LevelMethod::AsymCriticalBand: return "asym_critical_band";
        case LevelMethod::AsymSuper: return "asym_super";
        case LevelMethod::McBisection: return "mc_bisection";
    }
    return "unknown";
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::SubCritical: return "sub_critical";
        case Regime::CriticalBand: return "critical_band";
        case Regime::SuperCritical: return "super_critical";
    }
    return "unknown";
}

Regime classify_regime(double c, const MomentSummary& s, const RegimeConfig& cfg) {
    if (c < 0) throw DomainError("rate c must be nonnegative");
    if (c < cfg.k_sub * s.cstar) return Regime::SubCritical;
    if (c > cfg.k_super * s.cstar) return Regime::SuperCritical;
    return Regime::CriticalBand;
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0 && alpha < 0.5)) throw DomainError("alpha must lie in (0, 1/2)");
}

}  // namespace

LevelReport solve_heuristic_level(const MomentSummary& s, double alpha, double t, double c,
                                  const LevelSolverConfig& cfg) {
    check_alpha(alpha);
    if (!(t > 0)) throw DomainError("horizon t must be positive");
    if (c < 0) throw DomainError("rate c must be nonnegative");
    auto f = [&](double u) { return a_kernel({u, c, t, 0.0, s.M, s.Dsq}) - alpha; };

    const double u0 = std::max(1.0, (s.cstar - c) * t);
    double lo = u0, hi = u0;
    double flo = f(u0), fhi = flo;
    int n = 0;
    if (flo <= 0) {
        // A rises before it falls; climb to the decreasing branch if we start left of the peak
        double x = u0, fx = flo;
        for (double fn = f(2.0 * x); fx <= 0 && fn > fx; fn = f(2.0 * x)) {
            if (++n > cfg.max_expansions) break;
            x *= 2.0;
            fx = fn;
        }
        if (fx > 0) {
            lo = hi = x;
            flo = fhi = fx;
        } else if (x > u0) {
            throw BracketError("level bracket: A peaks below alpha", u0, x, f(u0) + alpha, fx + alpha);
        }
    }
    if (flo > 0) {
        while (fhi > 0) {
            if (++n > cfg.max_expansions)
                throw BracketError("level bracket: A stays above alpha while doubling u", lo, hi, flo + alpha,
                                   fhi + alpha);
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = f(hi);
        }
    } else {
        while (flo <= 0) {
            if (++n > cfg.max_expansions)
                throw BracketError("level bracket: A stays below alpha while halving u", lo, hi, flo + alpha,
                                   fhi + alpha);
            hi = lo;
            fhi = flo;
            lo *= 0.5;
            flo = f(lo);
        }
    }
    RootOptions ro;
    ro.width_tol = cfg.width_rel * std::max(1.0, hi);
    ro.f_tol = cfg.tol;
    ro.max_iter = cfg.max_iter;
    const auto r = solve_bracketed(f, lo, hi, ro);
    if (!(r.residual <= cfg.tol)) throw SolverError("heuristic level: residual tolerance not met");
    LevelReport rep;
    rep.c = c;
    rep.alpha = alpha;
    rep.t = t;
    rep.level = r.root;
    rep.method = LevelMethod::RootOnA;
    rep.residual = r.residual;
    rep.bracket_lo = std::min(r.lo, r.root);
    rep.bracket_hi = std::max(r.hi, r.root);
    rep.iterations = r.iterations + n;
    return rep;
}

LevelReport solve_heuristic_level(const RenewalModel& model, double alpha, double t, double c,
                                  const LevelSolverConfig& cfg) {
    return solve_heuristic_level(model.summary(), alpha, t, c, cfg);
}

double level_zero(const MomentSummary& s, double alpha, double t) {
    if (!(t > 0)) throw DomainError("horizon t must be positive");
    return t / s.M + s.diffusion_scale() * normal_quantile(alpha) * std::sqrt(t);
}

double band_lhs(double x, double delta, BandSide side) {
    if (side == BandSide::Below)
        return normal_cdf(delta - x) + std::exp(2.0 * delta * x + log_normal_cdf(-delta - x));
    return normal_cdf(-delta - x) + std::exp(-2.0 * delta * x + log_normal_cdf(delta - x));
}

double x_alpha_band(double delta, double alpha, BandSide side) {
    check_alpha(alpha);
    if (delta < 0) throw DomainError("x_alpha_band: delta must be nonnegative");
    auto g = [&](double x) { return band_lhs(x, delta, side) - alpha; };
    auto dg = [&](double x) {
        if (side == BandSide::Below)
            return -2.0 * normal_pdf(x - delta) + 2.0 * delta * std::exp(2.0 * delta * x + log_normal_cdf(-delta - x));
        return -2.0 * normal_pdf(x + delta) - 2.0 * delta * std::exp(-2.0 * delta * x + log_normal_cdf(delta - x));
    };
    RootOptions ro;
    ro.f_tol = 1e-14;
    ro.x_tol = 1e-15;
    const auto r = solve_newton_safeguarded(g, dg, 0.0, normal_quantile(alpha / 2.0) + delta + 5.0, ro);
    if (!(r.residual <= 1e-12)) throw SolverError("x_alpha_band: residual tolerance not met");
    return r.root;
}

double super_lhs(double x, double cM) {
    const double rx = std::sqrt(x);
    return normal_cdf(-((cM - 2.0) / cM) * rx) * std::exp(-2.0 * (cM - 1.0) / (cM * cM) * x) + normal_cdf(rx);
}

double x_alpha_super(double c, double M, double alpha) {
    check_alpha(alpha);
    const double cM = c * M;
    if (!(cM > 1.0)) throw RegimeError("x_alpha_super: needs c M > 1");
    auto g = [&](double x) { return super_lhs(x, cM) - 1.0 - alpha; };
    // locate the hump on a geometric scan, then refine by golden section
    double best_x = 0.0, best_g = g(0.0);
    double x = 1e-6;
    double last = 0.0;
    for (int i = 0; i < 400; ++i, x *= 1.1) {
        const double gx = g(x);
        if (gx > best_g) {
            best_g = gx;
            best_x = x;
        }
        last = x;
        if (gx < best_g && best_g > 0 && gx < 0) break;
    }
    double a = best_x / 1.1, b = std::min(best_x * 1.1, last);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 200 && b - a > 1e-12 * std::max(1.0, b); ++i) {
        const double m1 = b - phi * (b - a), m2 = a + phi * (b - a);
        if (g(m1) > g(m2))
            b = m2;
        else
            a = m1;
    }
    const double peak = 0.5 * (a + b);
    if (!(g(peak) > 0)) throw SolverError("x_alpha_super: equation has no positive root");
    double hi = std::max(peak * 2.0, 1.0);
    for (int i = 0; g(hi) > 0; ++i) {
        if (i > 200) throw SolverError("x_alpha_super: no sign change within budget");
        hi *= 2.0;
    }
    RootOptions ro;
    ro.width_tol = 1e-6 * hi;
    ro.f_tol = 1e-13;
    ro.x_tol = 1e-14 * hi;
    const auto r = solve_bracketed(g, peak, hi, ro);
    if (!(r.residual <= 1e-10)) throw SolverError("x_alpha_super: residual tolerance not met");
    return r.root;
}

double level_asym(const MomentSummary& s, double alpha, double t, double c, Regime regime,
                  const RegimeConfig& rc) {
    check_alpha(alpha);
    if (!(t > 0)) throw DomainError("horizon t must be positive");
    if (classify_regime(c, s, rc) != regime)
        throw RegimeError("level_asym: rate c=" + std::to_string(c) + " is classified as " +
                          to_string(classify_regime(c, s, rc)) + ", not " + to_string(regime));
    const double scale = s.diffusion_scale();
    switch (regime) {
        case Regime::SubCritical:
            return (s.cstar - c) * t + scale * normal_quantile(alpha) * std::sqrt(t);
        case Regime::CriticalBand: {
            const double delta = (s.cstar - c) * std::sqrt(t) / scale;
            const BandSide side = delta >= 0 ? BandSide::Below : BandSide::Above;
            return scale * x_alpha_band(std::abs(delta), alpha, side) * std::sqrt(t);
        }
        case Regime::SuperCritical:
            return s.Dsq / (s.M * s.M) * x_alpha_super(c, s.M, alpha);
    }
    return 0.0;
}

double structure_function(const MomentSummary& s, double alpha, double t, double y) {
    const double scale = s.diffusion_scale();
    const double c = s.cstar - scale * y / std::sqrt(t);
    if (c < 0) throw DomainError("structure_function: y maps to a negative rate");
    const auto rep = solve_heuristic_level(s, alpha, t, c);
    return (rep.level - std::max(0.0, (s.cstar - c) * t)) / (scale * std::sqrt(t));
}

LevelBounds bounds_subcritical(const MomentSummary& s, double alpha, double t, double c) {
    check_alpha(alpha);
    if (c < 0) throw DomainError("rate c must be nonnegative");
    if (c > s.cstar) throw RegimeError("bounds_subcritical: c exceeds c*");
    const double base = (s.cstar - c) * t;
    const double w = s.diffusion_scale() * std::sqrt(t);
    return {base + w * normal_quantile(alpha), base + w * normal_quantile(alpha / 2.0)};
}

namespace {

enum class LundbergCase { ExpExp, ExpT, ExpY };

struct Lundberg {
    LundbergCase kind;
    const Exponential* t_exp;
    const Exponential* y_exp;
    double kmax;
};

Lundberg lundberg_case(const RenewalModel& model) {
    const auto* te = dynamic_cast<const Exponential*>(model.interval.get());
    const auto* ye = dynamic_cast<const Exponential*>(model.jump.get());
    if (te && ye) return {LundbergCase::ExpExp, te, ye, ye->rate()};
    if (ye) return {LundbergCase::ExpY, te, ye, ye->rate()};
    if (te) {
        const double kmax = model.jump->mgf_abscissa();
        if (!(kmax > 0))
            throw UnsupportedModelError("adjustment coefficient: jump law has no exponential moments");
        return {LundbergCase::ExpT, te, ye, kmax};
    }
    throw UnsupportedModelError("adjustment coefficient: needs exponential T or exponential Y");
}

}  // namespace

double lundberg_residual(const RenewalModel& model, double c, double kappa) {
    const auto lc = lundberg_case(model);
    if (lc.kind == LundbergCase::ExpY || lc.kind == LundbergCase::ExpExp)
        return model.interval->laplace(kappa * c) - 1.0 + kappa / lc.y_exp->rate();
    const auto m = model.jump->mgf(kappa);
    if (!m) return std::numeric_limits<double>::infinity();
    return *m - 1.0 - c * kappa / lc.t_exp->rate();
}

double adjustment_coefficient(const RenewalModel& model, double c) {
    const auto s = model.summary();
    if (!(c > s.cstar)) throw RegimeError("adjustment coefficient needs c > c*");
    const auto lc = lundberg_case(model);
    if (lc.kind == LundbergCase::ExpExp) return lc.y_exp->rate() - lc.t_exp->rate() / c;

    auto h = [&](double k) { return lundberg_residual(model, c, k); };
    double lo = 0.5 * lc.kmax;
    for (int i = 0; h(lo) >= 0; ++i) {
        if (i > 400) throw RegimeError("adjustment coefficient: no positive root");
        lo *= 0.5;
    }
    double hi = lc.kmax;
    if (lc.kind == LundbergCase::ExpT) {
        double gap = 0.5 * (lc.kmax - lo);
        hi = lc.kmax - gap;
        for (int i = 0; !(h(hi) > 0); ++i) {
            if (i > 200) throw SolverError("adjustment coefficient: no sign change below the mgf abscissa");
            gap *= 0.5;
            hi = lc.kmax - gap;
        }
    }
    RootOptions ro;
    ro.width_tol = 1e-6 * hi;
    ro.f_tol = 1e-14;
    ro.x_tol = 1e-15 * hi;
    const auto r = solve_bracketed(h, lo, hi, ro);
    if (!(r.residual <= 1e-12)) throw SolverError("adjustment coefficient: residual tolerance not met");
    return r.root;
}

double upper_bound_supercritical(const RenewalModel& model, double alpha, double c) {
    check_alpha(alpha);
    const auto s = model.summary();
    if (!(c > s.cstar)) throw RegimeError("upper bound needs c > c*");
    const auto* te = dynamic_cast<const Exponential*>(model.interval.get());
    const auto* ye = dynamic_cast<const Exponential*>(model.jump.get());
    if (te && ye) {
        const double delta = te->rate(), rho = ye->rate();
        return std::max(0.0, -std::log(alpha * c * rho / delta) / (rho - delta / c));
    }
    return -std::log(alpha) / adjustment_coefficient(model, c);
}

ConvexityReport convexity_check(std::span<const double> values, double rel_tol) {
    ConvexityReport rep;
    rep.values.assign(values.begin(), values.end());
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    rep.tolerance = rel_tol * scale;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double d2 = values[i + 1] - 2.0 * values[i] + values[i - 1];
        rep.second_differences.push_back(d2);
        if (d2 < -rep.tolerance) rep.violations.push_back(i);
    }
    rep.convex = rep.violations.empty();
    return rep;
}

ConvexityReport convexity_check(const MomentSummary& s, double alpha, double t, std::span<const double> cgrid,
                                double rel_tol) {
    if (cgrid.size() < 3) throw DomainError("convexity_check: need at least three grid points");
    const double step = cgrid[1] - cgrid[0];
    for (std::size_t i = 1; i < cgrid.size(); ++i)
        if (std::abs((cgrid[i] - cgrid[i - 1]) - step) > 1e-6 * std::abs(step))
            throw DomainError("convexity_check: grid must be equally spaced");
    std::vector<double> levels;
    levels.reserve(cgrid.size());
    for (double c : cgrid) levels.push_back(solve_heuristic_level(s, alpha, t, c).level);
    return convexity_check(levels, rel_tol);
}

}  // namespace crossing
