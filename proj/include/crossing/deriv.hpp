#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crossing/coreint.hpp"

namespace crossing {

struct DerivReport {
    double value;
    std::vector<std::pair<std::string, double>> decomposition;  ///< addends summing to value
    Quality quality;
};

/// F_{u,c}(t): approximation of d/dc P{T <= t}. With v > 0 the conditional
/// version with leading coefficient M(u + c v)/(c^2 D^2) is returned.
DerivReport approx_dc(const CoreParams& p);
/// G_{u,c}(t): approximation of d/du P{T <= t}.
DerivReport approx_du(const CoreParams& p);

enum class DisplayForm { Raw, Rearranged };

/// Exact d/dc of A(t) = E^1 (requires v = 0).
double a_dc(const CoreParams& p, DisplayForm form = DisplayForm::Raw);
/// Exact d/du of A(t) = E^1 (requires v = 0).
double a_du(const CoreParams& p, DisplayForm form = DisplayForm::Raw);

using Bivariate = std::function<double(double, double)>;

struct Partials {
    double fx = 0, fy = 0;
    double fxx = 0, fxy = 0, fyy = 0;
};

struct ImplicitOptions {
    double feasibility_tol = 1e-8;  ///< |F(x0, y0)| must not exceed this
    double singular_tol = 1e-12;    ///< |F_y| at or below this is singular
};

/// Central differences with steps eps^{1/3} (first order) and eps^{1/4}
/// (second order) scaled by max(1, |argument|).
Partials finite_difference_partials(const Bivariate& F, double x0, double y0);

/// f'(x0) = -F_x / F_y for the curve F(x, f(x)) = 0 through (x0, y0).
double implicit_first(const Bivariate& F, double x0, double y0,
                      const std::optional<Partials>& analytic = std::nullopt,
                      const ImplicitOptions& opt = {});
/// f''(x0) = -(F_xx/F_y - 2 F_xy F_x / F_y^2 + F_yy F_x^2 / F_y^3).
double implicit_second(const Bivariate& F, double x0, double y0,
                       const std::optional<Partials>& analytic = std::nullopt,
                       const ImplicitOptions& opt = {});

}  // namespace crossing
