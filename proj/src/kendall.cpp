#include "crossing/kendall.hpp"

#include <algorithm>
#include <cmath>

#include "crossing/errors.hpp"
#include "crossing/quadrature.hpp"

namespace crossing {

namespace {

enum class Frame { Conditional, Unconditional };
enum class Want { Probability, DerivC, DerivU };
enum class LevelLaw { Table, Poisson };

struct Request {
    double u, c, t, v;
    Frame frame;
    Want want;
    LevelLaw law;
    BoundaryForm boundary = BoundaryForm::Corrected;
};

std::vector<double> sampled(std::size_t len, double h, auto&& f) {
    std::vector<double> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = f(static_cast<double>(i) * h);
    return out;
}

KendallResult run(const RenewalModel& model, const Request& rq, const KendallGrid& grid) {
    const auto& law_t = *model.interval;
    const auto& law_t1 = *model.first_interval;
    const auto& law_y = *model.jump;
    const bool cond = rq.frame == Frame::Conditional;
    const bool deriv = rq.want != Want::Probability;
    const bool dc = rq.want == Want::DerivC;
    const double u = rq.u, c = rq.c;

    if (u < 0 || c < 0 || !(rq.t > 0)) throw DomainError("kendall: need u, c >= 0 and t > 0");
    if (grid.time_points < 2 || grid.level_points < 2) throw DomainError("kendall: grids need at least two cells");
    if (cond && !(rq.v > 0 && rq.v <= rq.t)) throw DomainError("kendall: conditional evaluation needs 0 < v < t");
    const double lead = cond ? u + c * rq.v : 1.0;  // (u + c v) in the conditional frame
    const double base_level = cond ? u + c * rq.v : u;
    if (!(base_level > 0)) throw DomainError("kendall: level u + c v must be positive");

    KendallResult res;
    const double span = cond ? rq.t - rq.v : rq.t;
    if (span <= 0) return res;

    const std::size_t nt = grid.time_points;
    const std::size_t lent = nt + 1;
    const double ht = span / static_cast<double>(nt);
    std::vector<double> x(lent), zabs(lent), y(lent);
    for (std::size_t j = 0; j < lent; ++j) {
        y[j] = static_cast<double>(j) * ht;
        x[j] = base_level + c * y[j];
        zabs[j] = cond ? rq.v + y[j] : y[j];
    }
    const double window = grid.level_window.value_or(u + c * rq.t);
    if (window < x.back() * (1.0 - 1e-12)) throw WindowError("kendall: level window does not cover u + c t");

    const double ey = law_y.mean(), dy = law_y.variance();
    if (!std::isfinite(dy)) throw UnsupportedModelError("kendall: jump law needs a finite variance");
    const std::size_t N = truncation_order(window, ey, dy, grid.eps);
    if (N > grid.max_orders) throw BudgetError("kendall: truncation order exceeds max_orders");

    res.diag.orders = N;
    res.diag.h_time = ht;
    res.diag.window_time = span;
    res.diag.window_level = window;

    // level axis
    const bool table = rq.law == LevelLaw::Table;
    double rho = 0.0;
    if (!table) {
        const auto* e = dynamic_cast<const Exponential*>(&law_y);
        if (!e) throw UnsupportedModelError("kendall_exp_y: jump law must be exponential");
        rho = e->rate();
    }
    const std::size_t ny = table ? grid.level_points : 1;
    const std::size_t leny = ny + 1;
    const double hy = window / static_cast<double>(ny);
    res.diag.h_level = table ? hy : 0.0;
    std::vector<std::size_t> idx(lent);
    std::vector<double> frac(lent), surv_x(lent);
    for (std::size_t j = 0; j < lent; ++j) {
        surv_x[j] = law_y.survival(x[j]);
        if (!table) continue;
        const double pos = x[j] / hy;
        idx[j] = std::min(static_cast<std::size_t>(pos), leny - 2);
        frac[j] = pos - static_cast<double>(idx[j]);
    }
    auto interp = [&](const std::vector<double>& m, std::size_t j) {
        return m[idx[j]] + frac[j] * (m[idx[j] + 1] - m[idx[j]]);
    };

    // P{M(x)=n} = F^{*n}(x) - F^{*(n+1)}(x); the partition telescopes to 1 - F^{*(N+1)}
    std::optional<GridConvolver> cy;
    GridConvolver::Operand fy_op, fd_op, surv_op, row_y;
    std::vector<double> cdf_n, cdf_next, m, q, scratch;
    auto cumulative = [&](const std::vector<double>& row, std::vector<double>& out) {
        out.assign(leny, 0.0);
        for (std::size_t i = 1; i < leny; ++i) out[i] = out[i - 1] + 0.5 * hy * (row[i - 1] + row[i]);
    };
    if (table) {
        cy.emplace(leny, grid.method);
        fy_op = cy->prepare(sampled(leny, hy, [&](double s) { return law_y.density(s); }));
        if (deriv) {
            surv_op = cy->prepare(sampled(leny, hy, [&](double s) { return law_y.survival(s); }));
            fd_op = cy->prepare(sampled(leny, hy, [&](double s) { return law_y.density_derivative(s); }));
        }
        cdf_n = sampled(leny, hy, [&](double s) { return law_y.cdf(s); });
        row_y = fy_op;
        m.resize(leny);
    }
    const double fy0 = law_y.density(0.0);

    // time axis
    GridConvolver ct(lent, grid.method);
    const auto ft_op = ct.prepare(sampled(lent, ht, [&](double s) { return law_t.density(s); }));
    std::vector<double> f1(lent);
    for (std::size_t j = 0; j < lent; ++j) f1[j] = law_t1.density(y[j]);
    GridConvolver::Operand w_op, f1_op;
    if (!cond) {
        std::vector<double> w(lent);
        for (std::size_t j = 0; j < lent; ++j) w[j] = x[j] * f1[j];
        w_op = ct.prepare(std::move(w));
        if (deriv) f1_op = ct.prepare(f1);
    }
    GridConvolver::Operand row_t = ft_op;
    std::vector<double> a(lent), b(lent), tmp;
    GridConvolver::Operand prev_y;

    std::vector<double> acc_p(lent, 0.0), acc_1(lent, 0.0), acc_2(lent, 0.0), acc_3(lent, 0.0);
    std::vector<double> poisson_sum(lent, 0.0);
    if (!table)
        for (std::size_t j = 0; j < lent; ++j) poisson_sum[j] = std::exp(-rho * x[j]);

    for (std::size_t n = 1; n <= N; ++n) {
        // time-axis weights: A = f_T^{*n} (conditional) or g_n; B for the D1 term
        if (n > 1) {
            ct.convolve(row_t, ft_op, ht, tmp);
            row_t = ct.prepare(std::move(tmp));
        }
        const auto& rt = row_t.values;
        if (cond) {
            a = rt;
            if (deriv)
                for (std::size_t j = 0; j < lent; ++j) b[j] = y[j] * rt[j];
        } else {
            ct.convolve(row_t, w_op, ht, a);
            if (deriv) {
                std::vector<double> yr(lent);
                for (std::size_t j = 0; j < lent; ++j) yr[j] = y[j] * rt[j];
                const auto yr_op = ct.prepare(std::move(yr));
                ct.convolve(yr_op, f1_op, ht, b);
            }
        }

        // level-axis quantities m_n = P{M(x)=n}, q_n = its x-derivative without the f^{*n}(0) part
        double f0n = 0.0;
        if (table) {
            f0n = row_y.values[0];
            cy->convolve(row_y, fy_op, hy, scratch);
            auto next = cy->prepare(std::move(scratch));
            cumulative(next.values, cdf_next);
            for (std::size_t i = 0; i < leny; ++i) m[i] = cdf_n[i] - cdf_next[i];
            if (deriv) {
                // dRow_1 = f'; dRow_n = f(0) f^{*(n-1)} + f' * f^{*(n-1)}
                GridConvolver::Operand drow_op;
                if (n == 1) {
                    drow_op = fd_op;
                } else {
                    std::vector<double> drow;
                    cy->convolve(prev_y, fd_op, hy, drow);
                    for (std::size_t i = 0; i < leny; ++i) drow[i] += fy0 * prev_y.values[i];
                    drow_op = cy->prepare(std::move(drow));
                }
                cy->convolve(drow_op, surv_op, hy, q);
                prev_y = row_y;
            }
            row_y = std::move(next);
            std::swap(cdf_n, cdf_next);
        } else {
            f0n = n == 1 ? fy0 : 0.0;
        }

        const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
        for (std::size_t j = 0; j < lent; ++j) {
            double mj;
            if (table) {
                mj = interp(m, j);
            } else {
                const double r = rho * x[j];
                mj = r > 0 ? std::exp(-r + static_cast<double>(n) * std::log(r) - lgn) : 0.0;
                poisson_sum[j] += mj;
            }
            const double inv_x = 1.0 / x[j];
            acc_p[j] += lead * inv_x * mj * a[j];
            if (deriv) {
                const double qj = interp(q, j);
                acc_1[j] += (dc ? -u : c) * inv_x * inv_x * mj * b[j];
                const double w2 = lead * (dc ? zabs[j] : 1.0) * inv_x;
                acc_2[j] += w2 * qj * a[j];
                acc_3[j] += w2 * surv_x[j] * f0n * a[j];
            }
        }
    }

    // audit of the truncated renewal-count distribution over the x range in use
    double neglected = 0.0;
    if (table) {
        // cdf_n now holds F^{*(N+1)}
        const auto i1 = std::min(leny - 1, static_cast<std::size_t>(std::ceil(x.back() / hy)));
        for (std::size_t i = 0; i <= i1; ++i) neglected = std::max(neglected, std::abs(cdf_n[i]));
    } else {
        for (double s : poisson_sum) neglected = std::max(neglected, std::abs(1.0 - s));
    }
    res.diag.neglected_mass = neglected;
    if (!(neglected <= grid.mass_tolerance))
        throw AccuracyError("kendall: neglected renewal mass " + std::to_string(neglected) + " exceeds tolerance");

    if (!deriv) {
        const double series = trapezoid(acc_p, ht);
        if (cond) {
            res.terms = {{"series", series}};
        } else {
            std::vector<double> first(lent);
            for (std::size_t j = 0; j < lent; ++j) first[j] = surv_x[j] * f1[j];
            res.terms = {{"first_jump", trapezoid(first, ht)}, {"series", series}};
        }
    } else {
        if (!cond) {
            std::vector<double> bnd(lent);
            for (std::size_t j = 0; j < lent; ++j) {
                const double weight = (dc || rq.boundary == BoundaryForm::AsPrinted) ? zabs[j] : 1.0;
                bnd[j] = -law_y.density(x[j]) * weight * f1[j];
            }
            res.terms.push_back({"boundary", trapezoid(bnd, ht)});
        }
        res.terms.push_back({"d1", trapezoid(acc_1, ht)});
        res.terms.push_back({"d2", trapezoid(acc_2, ht)});
        res.terms.push_back({"d3", trapezoid(acc_3, ht)});
    }
    for (const auto& [name, val] : res.terms) res.value += val;
    return res;
}

}  // namespace

KendallResult kendall_conditional(const RenewalModel& model, double u, double c, double t, double v,
                                  const KendallGrid& grid) {
    return run(model, {u, c, t, v, Frame::Conditional, Want::Probability, LevelLaw::Table}, grid);
}

KendallResult kendall_unconditional(const RenewalModel& model, double u, double c, double t,
                                    const KendallGrid& grid) {
    if (!(u > 0)) throw DomainError("kendall_unconditional: u must be positive");
    return run(model, {u, c, t, 0.0, Frame::Unconditional, Want::Probability, LevelLaw::Table}, grid);
}

KendallResult kendall_exp_y(const RenewalModel& model, double u, double c, double t, const KendallGrid& grid) {
    if (!(u > 0)) throw DomainError("kendall_exp_y: u must be positive");
    return run(model, {u, c, t, 0.0, Frame::Unconditional, Want::Probability, LevelLaw::Poisson}, grid);
}

KendallResult kendall_dc(const RenewalModel& model, double u, double c, double t, double v,
                         const KendallGrid& grid) {
    return run(model, {u, c, t, v, Frame::Conditional, Want::DerivC, LevelLaw::Table}, grid);
}

KendallResult kendall_du(const RenewalModel& model, double u, double c, double t, double v,
                         const KendallGrid& grid) {
    return run(model, {u, c, t, v, Frame::Conditional, Want::DerivU, LevelLaw::Table}, grid);
}

KendallResult kendall_dc_unconditional(const RenewalModel& model, double u, double c, double t,
                                       const KendallGrid& grid) {
    if (!(u > 0)) throw DomainError("kendall_dc_unconditional: u must be positive");
    return run(model, {u, c, t, 0.0, Frame::Unconditional, Want::DerivC, LevelLaw::Table}, grid);
}

KendallResult kendall_du_unconditional(const RenewalModel& model, double u, double c, double t,
                                       const KendallGrid& grid, BoundaryForm boundary) {
    if (!(u > 0)) throw DomainError("kendall_du_unconditional: u must be positive");
    return run(model, {u, c, t, 0.0, Frame::Unconditional, Want::DerivU, LevelLaw::Table, boundary}, grid);
}

}  // namespace crossing
