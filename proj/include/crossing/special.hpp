#pragma once

#include "crossing/quadrature.hpp"

namespace crossing {

double normal_pdf(double x);
/// Gaussian density with the given mean and variance.
double normal_pdf(double mean, double variance, double x);
double normal_cdf(double x);
/// log Phi(x), accurate far into the lower tail.
double log_normal_cdf(double x);
/// Phi(b) - Phi(a), evaluated on the tail that avoids cancellation.
double normal_cdf_diff(double a, double b);
/// Upper-tail quantile: z with 1 - Phi(z) = alpha.
double normal_quantile(double alpha);

/// K_p(z) for p in {+-1/2, +-3/2, +-5/2, ...}.
double bessel_k_half_integer(double p, double z);
/// e^z K_p(z) for half-integer p; avoids underflow for large z.
double bessel_k_half_integer_scaled(double p, double z);

struct GigParams {
    double mu;
    double lambda;
    double p;
};

/// Density normalised by the Bessel function.
double gig_pdf(const GigParams& g, double x);
/// Same density written through the standard normal pdf.
double gig_pdf_phi_form(const GigParams& g, double x);
/// Closed forms for p = -1/2 and p = -5/2, quadrature otherwise.
double gig_cdf(const GigParams& g, double x, const QuadratureConfig& quad = {});

}  // namespace crossing
