#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "crossing/philox.hpp"

namespace crossing {

/// Positive-supported law with bounded density.
class Distribution {
public:
    virtual ~Distribution() = default;

    /// Short text such as "erlang(rate=1.6,shape=2)"; stable across runs.
    virtual std::string describe() const = 0;

    /// Density on the real line: 0 for x < 0, right limit at 0.
    virtual double density(double x) const = 0;
    /// d/dx of the density for x >= 0 (right derivative at 0).
    virtual double density_derivative(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double survival(double x) const = 0;

    virtual double mean() const = 0;
    virtual double variance() const = 0;        ///< +inf when not finite
    virtual double raw_moment3() const = 0;     ///< E X^3, +inf when not finite

    /// E exp(-s X) for s >= 0.
    virtual double laplace(double s) const = 0;
    /// E exp(s X) if finite.
    virtual std::optional<double> mgf(double s) const = 0;
    /// sup{s : E exp(s X) < inf}; 0 for heavy tails.
    virtual double mgf_abscissa() const = 0;

    virtual std::size_t uniforms_per_draw() const { return 1; }
    /// Variate from uniforms_per_draw() uniforms on (0,1).
    virtual double from_uniforms(std::span<const double> u) const = 0;
    virtual double sample(RandomStream& rng) const;

    /// Density for x > 0; throws DomainError otherwise.
    double pdf(double x) const;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

class Exponential final : public Distribution {
public:
    explicit Exponential(double rate);
    double rate() const { return rate_; }

    std::string describe() const override;
    double density(double x) const override;
    double density_derivative(double x) const override;
    double cdf(double x) const override;
    double survival(double x) const override;
    double mean() const override { return 1.0 / rate_; }
    double variance() const override { return 1.0 / (rate_ * rate_); }
    double raw_moment3() const override { return 6.0 / (rate_ * rate_ * rate_); }
    double laplace(double s) const override;
    std::optional<double> mgf(double s) const override;
    double mgf_abscissa() const override { return rate_; }
    double from_uniforms(std::span<const double> u) const override;

private:
    double rate_;
};

class Erlang final : public Distribution {
public:
    Erlang(double rate, int shape);
    double rate() const { return rate_; }
    int shape() const { return shape_; }

    std::string describe() const override;
    double density(double x) const override;
    double density_derivative(double x) const override;
    double cdf(double x) const override;
    double survival(double x) const override;
    double mean() const override { return shape_ / rate_; }
    double variance() const override { return shape_ / (rate_ * rate_); }
    double raw_moment3() const override;
    double laplace(double s) const override;
    std::optional<double> mgf(double s) const override;
    double mgf_abscissa() const override { return rate_; }
    std::size_t uniforms_per_draw() const override { return static_cast<std::size_t>(shape_); }
    double from_uniforms(std::span<const double> u) const override;
    double sample(RandomStream& rng) const override;

private:
    double rate_;
    int shape_;
    double log_norm_;
};

/// Lomax form f(y) = a b (1 + b y)^{-(a+1)}, mean 1/(b(a-1)).
class Pareto final : public Distribution {
public:
    Pareto(double a, double b);
    double a() const { return a_; }
    double b() const { return b_; }

    std::string describe() const override;
    double density(double x) const override;
    double density_derivative(double x) const override;
    double cdf(double x) const override;
    double survival(double x) const override;
    double mean() const override;
    double variance() const override;
    double raw_moment3() const override;
    double laplace(double s) const override;
    std::optional<double> mgf(double s) const override;
    double mgf_abscissa() const override { return 0.0; }
    double from_uniforms(std::span<const double> u) const override;

private:
    double a_, b_;
};

DistributionPtr make_exponential(double rate);
DistributionPtr make_erlang(double rate, int shape);
DistributionPtr make_pareto(double a, double b);

struct MomentSummary {
    double ET, EY, DT, DY;
    double ET3, EY3;
    double M;      ///< ET / EY
    double Dsq;    ///< ((ET)^2 DY + (EY)^2 DT) / (EY)^3
    double cstar;  ///< 1 / M

    double D() const;
    /// D / M^{3/2}, the scale of the sqrt(t) terms.
    double diffusion_scale() const;
};

/// Summary built directly from (M, D^2) for the parametric families used by the
/// approximation formulas; raw moments are left NaN.
MomentSummary summary_from_md(double M, double Dsq);

struct RenewalModel {
    DistributionPtr first_interval;  ///< T1
    DistributionPtr interval;        ///< T
    DistributionPtr jump;            ///< Y

    /// Ordinary model: T1 has the law of T.
    static RenewalModel ordinary(DistributionPtr t, DistributionPtr y);

    /// Throws UnsupportedModelError if a moment up to order three is infinite.
    MomentSummary summary() const;
    std::string describe() const;
};

}  // namespace crossing
