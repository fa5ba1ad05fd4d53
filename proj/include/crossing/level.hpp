#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "crossing/dist.hpp"

namespace crossing {

enum class LevelMethod { RootOnA, AsymSub, AsymCriticalBand, AsymSuper, McBisection };

std::string to_string(LevelMethod m);

struct LevelReport {
    double c = 0, alpha = 0, t = 0;
    double level = 0;
    LevelMethod method = LevelMethod::RootOnA;
    double residual = 0;  ///< |objective| at the returned level
    double bracket_lo = 0, bracket_hi = 0;
    int iterations = 0;
};

enum class Regime { SubCritical, CriticalBand, SuperCritical };

std::string to_string(Regime r);

struct RegimeConfig {
    double k_sub = 0.9;    ///< c < k_sub c* is sub-critical
    double k_super = 1.1;  ///< c > k_super c* is super-critical
};

Regime classify_regime(double c, const MomentSummary& s, const RegimeConfig& cfg = {});

struct LevelSolverConfig {
    double tol = 1e-10;        ///< residual |A - alpha| at the solution
    double width_rel = 1e-3;   ///< bisection phase stops at this relative width
    int max_expansions = 80;   ///< bracket doublings / halvings
    int max_iter = 300;
};

/// Root u of A_{u,c}(t) = alpha on the decreasing branch of A.
LevelReport solve_heuristic_level(const MomentSummary& s, double alpha, double t, double c,
                                  const LevelSolverConfig& cfg = {});
LevelReport solve_heuristic_level(const RenewalModel& model, double alpha, double t, double c,
                                  const LevelSolverConfig& cfg = {});

/// t/M + (D/M^{3/2}) z_alpha sqrt(t).
double level_zero(const MomentSummary& s, double alpha, double t);

enum class BandSide { Below, Above };

/// Left side of the critical-band equation; equals alpha at x_alpha(delta).
double band_lhs(double x, double delta, BandSide side);
double x_alpha_band(double delta, double alpha, BandSide side);

/// Left side of the super-critical equation: equals 1 + alpha at x_alpha(c).
double super_lhs(double x, double cM);
/// Larger positive root of super_lhs = 1 + alpha (the one past the maximum).
double x_alpha_super(double c, double M, double alpha);

double level_asym(const MomentSummary& s, double alpha, double t, double c, Regime regime,
                  const RegimeConfig& rc = {});

/// Normalised level U(y) at c = c* - (D/M^{3/2}) y / sqrt(t).
double structure_function(const MomentSummary& s, double alpha, double t, double y);

struct LevelBounds {
    double lo, hi;
};

LevelBounds bounds_subcritical(const MomentSummary& s, double alpha, double t, double c);

/// E exp(kY) - 1 - c k/delta, or E exp(-k c T) - 1 + k/rho, whichever case applies.
double lundberg_residual(const RenewalModel& model, double c, double kappa);
double adjustment_coefficient(const RenewalModel& model, double c);
double upper_bound_supercritical(const RenewalModel& model, double alpha, double c);

struct ConvexityReport {
    bool convex = true;
    std::vector<double> values;              ///< curve values on the grid
    std::vector<double> second_differences;  ///< interior points, in grid order
    std::vector<std::size_t> violations;     ///< grid indices with d2 < -tolerance
    double tolerance = 0;
};

/// Second central differences of equally spaced samples, tolerance rel_tol * max|value|.
ConvexityReport convexity_check(std::span<const double> values, double rel_tol = 1e-6);
/// Solves the heuristic level on an equally spaced c grid and checks it.
ConvexityReport convexity_check(const MomentSummary& s, double alpha, double t,
                                std::span<const double> cgrid, double rel_tol = 1e-6);

}  // namespace crossing
