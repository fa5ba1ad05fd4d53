#pragma once

#include "crossing/dist.hpp"
#include "crossing/quadrature.hpp"

namespace crossing {

/// Arguments of the elementary integrals. With v > 0 the conditional forms
/// are used: level u + c v and horizon t - v.
struct CoreParams {
    double u;
    double c;
    double t;
    double v = 0.0;
    double M;
    double Dsq;
};

enum class ApproxVariant { ConditionalWeighted, ConvolutionWeighted, Plain };

enum class Quality { LargeU, SmallUWarning };

struct ApproxResult {
    double value;
    bool clamped;
    Quality quality;
};

/// Tolerances used for E^k by default; tighter than the generic defaults so
/// that finite differences of the integrals stay meaningful.
inline constexpr QuadratureConfig kCoreQuadrature{1e-13, 1e-11, 400};

/// |1 - cM| <= 1e-4 M, where the two-branch closed form is not used.
bool near_critical(double c, double M);

/// E^k = int_0^{ct/u} (x+1)^{-k} phi_{cM(x+1), (c^2 D^2/u)(x+1)}(x) dx by quadrature.
double elem_integral(int k, const CoreParams& p, const QuadratureConfig& quad = kCoreQuadrature);
/// E^1 through the inverse Gaussian cdf; throws NearCriticalError inside the band.
double elem_closed1(const CoreParams& p);
/// c -> 0 limit of E^1.
double elem_limit_c0(double u, double t, double M, double Dsq);
/// E^1 at c = c*.
double elem_limit_cstar(double u, double t, double M, double Dsq, double cstar);

/// A(t|v): E^1 with u -> u + c v and horizon t - v; dispatches to the
/// limit, closed-form or quadrature path.
double a_kernel(const CoreParams& p);

/// True when u M^2 / D^2 is below the range where the approximation is meaningful.
bool small_u(double u, double M, double Dsq);

ApproxResult approx_crossing_prob(const RenewalModel& model, double u, double c, double t,
                                  ApproxVariant variant = ApproxVariant::Plain);

enum class VarianceConvention {
    Printed,     ///< ((EY)^2 DT + (ET)^2 DY) / (EY)^3 per unit time
    TimeDomain,  ///< same numerator over (ET)^3
};

double compound_mean(const MomentSummary& s, double t);
double compound_variance(const MomentSummary& s, double t, VarianceConvention conv);

/// Normal approximation 1 - Phi((u - E V_t)/sqrt(D V_t)).
double normal_compound_tail(const RenewalModel& model, double u, double t,
                            VarianceConvention conv = VarianceConvention::Printed);

}  // namespace crossing
