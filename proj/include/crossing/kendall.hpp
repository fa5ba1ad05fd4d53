#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crossing/convolution.hpp"
#include "crossing/dist.hpp"

namespace crossing {

struct KendallGrid {
    std::size_t time_points = 8000;   ///< intervals on the time axis
    std::size_t level_points = 16000; ///< intervals on the level axis
    double eps = 1e-10;               ///< series truncation target
    double mass_tolerance = 1e-4;     ///< largest accepted |1 - sum_n P{M(x)=n}|
    std::optional<double> level_window;  ///< defaults to u + c t
    std::size_t max_orders = 20000;
    ConvolutionMethod method = ConvolutionMethod::Fft;
};

struct KendallDiagnostics {
    double neglected_mass = 0;  ///< max |1 - sum_{n<=N} P{M(x)=n}| over the x range used
    std::size_t orders = 0;     ///< truncation order N
    double h_time = 0, h_level = 0;
    double window_time = 0, window_level = 0;
};

struct KendallResult {
    double value = 0;
    KendallDiagnostics diag;
    std::vector<std::pair<std::string, double>> terms;  ///< named addends of value
};

/// P{v < T <= t | T1 = v}.
/// The identity is exact when Y is exponential (M(x) Poisson). For other jump
/// laws this evaluates the same formula, which then differs from simulation.
KendallResult kendall_conditional(const RenewalModel& model, double u, double c, double t, double v,
                                  const KendallGrid& grid = {});

/// P{T <= t}: first-jump term plus the conditional part integrated against f_{T1}.
KendallResult kendall_unconditional(const RenewalModel& model, double u, double c, double t,
                                    const KendallGrid& grid = {});

/// P{T <= t} for exponential Y through Poisson renewal probabilities.
KendallResult kendall_exp_y(const RenewalModel& model, double u, double c, double t, const KendallGrid& grid = {});

/// d/dc and d/du of P{v < T <= t | T1 = v} as D1 + D2 + D3.
KendallResult kendall_dc(const RenewalModel& model, double u, double c, double t, double v,
                         const KendallGrid& grid = {});
KendallResult kendall_du(const RenewalModel& model, double u, double c, double t, double v,
                         const KendallGrid& grid = {});

/// Boundary term of the unconditional u-derivative.
enum class BoundaryForm {
    Corrected,  ///< -int f_Y(u + c v) f_{T1}(v) dv
    AsPrinted,  ///< -int f_Y(u + c v) v f_{T1}(v) dv, same weight as the c-derivative
};

KendallResult kendall_dc_unconditional(const RenewalModel& model, double u, double c, double t,
                                       const KendallGrid& grid = {});
KendallResult kendall_du_unconditional(const RenewalModel& model, double u, double c, double t,
                                       const KendallGrid& grid = {},
                                       BoundaryForm boundary = BoundaryForm::Corrected);

}  // namespace crossing
