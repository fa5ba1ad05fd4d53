#include "crossing/deriv.hpp"

#include <cmath>
#include <limits>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"

namespace crossing {

namespace {

struct Triple {
    double e0, e1, e2;
};

Triple elementary(const CoreParams& p) {
    if (!(p.c > 0) || !(p.u > 0)) throw DomainError("derivative approximations need c > 0 and u > 0");
    return {elem_integral(0, p), elem_integral(1, p), elem_integral(2, p)};
}

DerivReport finish(std::vector<std::pair<std::string, double>> parts, double u, const CoreParams& p) {
    double sum = 0.0;
    for (const auto& [name, v] : parts) sum += v;
    return {sum, std::move(parts), small_u(u, p.M, p.Dsq) ? Quality::SmallUWarning : Quality::LargeU};
}

// phi_{cM(1+ct/u), (c^2 D^2/u)(1+ct/u)}(ct/u)
double window_density(const CoreParams& p) {
    const double x = p.c * p.t / p.u;
    const double w = 1.0 + x;
    return normal_pdf(p.c * p.M * w, p.c * p.c * p.Dsq / p.u * w, x);
}

void require_unconditional(const CoreParams& p) {
    if (p.v != 0.0) throw DomainError("derivative of A is defined for v = 0");
    if (!(p.c > 0) || !(p.u > 0) || !(p.t > 0)) throw DomainError("need u, c, t > 0");
}

}  // namespace

DerivReport approx_dc(const CoreParams& p) {
    const auto e = elementary(p);
    const double drift = 1.0 - p.c * p.M;
    const double k = p.c * p.c * p.Dsq;
    const double ue = p.u + p.c * p.v;
    return finish({{"level_group", p.M * ue / k * (drift * e.e0 - e.e1)},
                   {"shape_group", -p.M * p.u / k * (drift * e.e1 - e.e2)},
                   {"e1_over_c", -e.e1 / p.c},
                   {"e2_over_c", e.e2 / p.c}},
                  ue, p);
}

DerivReport approx_du(const CoreParams& p) {
    const auto e = elementary(p);
    const double drift = 1.0 - p.c * p.M;
    return finish({{"drift_group", p.M / (p.c * p.Dsq) * (drift * e.e1 - e.e2)},
                   {"level_group", (e.e1 - e.e2) / p.u}},
                  p.u + p.c * p.v, p);
}

double a_dc(const CoreParams& p, DisplayForm form) {
    require_unconditional(p);
    const auto e = elementary(p);
    const double c = p.c, u = p.u, drift = 1.0 - c * p.M;
    const double k3 = c * c * c * p.Dsq;
    const double boundary = p.t / (u + c * p.t) * window_density(p);
    if (form == DisplayForm::Raw)
        return u * drift / k3 * e.e0 - (u * (2.0 - c * p.M) / (c * c * p.Dsq) + 1.0) / c * e.e1 +
               u / k3 * e.e2 + boundary;
    return u / k3 * (drift * e.e0 - e.e1) - u / k3 * (drift * e.e1 - e.e2) - e.e1 / c + boundary;
}

double a_du(const CoreParams& p, DisplayForm form) {
    require_unconditional(p);
    const auto e = elementary(p);
    const double c = p.c, u = p.u, drift = 1.0 - c * p.M;
    const double k2 = c * c * p.Dsq;
    const double boundary = c * p.t / (u * (u + c * p.t)) * window_density(p);
    if (form == DisplayForm::Raw)
        return -drift * drift / (2.0 * k2) * e.e0 + e.e1 / (2.0 * u) + drift / k2 * e.e1 -
               e.e2 / (2.0 * k2) - boundary;
    return (drift * e.e1 - e.e2) / k2 - (drift * drift * e.e0 - e.e2) / (2.0 * k2) + e.e1 / (2.0 * u) -
           boundary;
}

Partials finite_difference_partials(const Bivariate& F, double x0, double y0) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double hx = std::cbrt(eps) * std::max(1.0, std::abs(x0));
    const double hy = std::cbrt(eps) * std::max(1.0, std::abs(y0));
    const double kx = std::pow(eps, 0.25) * std::max(1.0, std::abs(x0));
    const double ky = std::pow(eps, 0.25) * std::max(1.0, std::abs(y0));
    const double f0 = F(x0, y0);
    Partials d;
    d.fx = (F(x0 + hx, y0) - F(x0 - hx, y0)) / (2.0 * hx);
    d.fy = (F(x0, y0 + hy) - F(x0, y0 - hy)) / (2.0 * hy);
    d.fxx = (F(x0 + kx, y0) - 2.0 * f0 + F(x0 - kx, y0)) / (kx * kx);
    d.fyy = (F(x0, y0 + ky) - 2.0 * f0 + F(x0, y0 - ky)) / (ky * ky);
    d.fxy = (F(x0 + kx, y0 + ky) - F(x0 + kx, y0 - ky) - F(x0 - kx, y0 + ky) + F(x0 - kx, y0 - ky)) /
            (4.0 * kx * ky);
    return d;
}

namespace {

Partials resolve(const Bivariate& F, double x0, double y0, const std::optional<Partials>& analytic,
                 const ImplicitOptions& opt) {
    const double f0 = F(x0, y0);
    if (!(std::abs(f0) <= opt.feasibility_tol))
        throw DomainError("implicit derivative: point is not on the curve F = 0");
    const Partials d = analytic ? *analytic : finite_difference_partials(F, x0, y0);
    if (!(std::abs(d.fy) > opt.singular_tol)) throw SingularImplicitError("implicit derivative: dF/dy vanishes");
    return d;
}

}  // namespace

double implicit_first(const Bivariate& F, double x0, double y0, const std::optional<Partials>& analytic,
                      const ImplicitOptions& opt) {
    const auto d = resolve(F, x0, y0, analytic, opt);
    return -d.fx / d.fy;
}

double implicit_second(const Bivariate& F, double x0, double y0, const std::optional<Partials>& analytic,
                       const ImplicitOptions& opt) {
    const auto d = resolve(F, x0, y0, analytic, opt);
    const double fy = d.fy;
    return -(d.fxx / fy - 2.0 * d.fxy * d.fx / (fy * fy) + d.fyy * d.fx * d.fx / (fy * fy * fy));
}

}  // namespace crossing
