#include "crossing/dist.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "crossing/errors.hpp"
#include "crossing/quadrature.hpp"

namespace crossing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

}  // namespace

double Distribution::sample(RandomStream& rng) const {
    const double u = rng.uniform();
    return from_uniforms(std::span<const double>(&u, 1));
}

double Distribution::pdf(double x) const {
    if (!(x > 0)) throw DomainError("pdf: x must be positive");
    return density(x);
}

// --- Exponential ---

Exponential::Exponential(double rate) : rate_(rate) { require_positive(rate, "exponential rate"); }

std::string Exponential::describe() const { return "exponential(rate=" + fmt(rate_) + ")"; }

double Exponential::density(double x) const { return x < 0 ? 0.0 : rate_ * std::exp(-rate_ * x); }

double Exponential::density_derivative(double x) const {
    return x < 0 ? 0.0 : -rate_ * rate_ * std::exp(-rate_ * x);
}

double Exponential::cdf(double x) const { return x <= 0 ? 0.0 : -std::expm1(-rate_ * x); }

double Exponential::survival(double x) const { return x <= 0 ? 1.0 : std::exp(-rate_ * x); }

double Exponential::laplace(double s) const { return rate_ / (rate_ + s); }

std::optional<double> Exponential::mgf(double s) const {
    if (s >= rate_) return std::nullopt;
    return rate_ / (rate_ - s);
}

double Exponential::from_uniforms(std::span<const double> u) const { return -std::log1p(-u[0]) / rate_; }

// --- Erlang ---

Erlang::Erlang(double rate, int shape) : rate_(rate), shape_(shape) {
    require_positive(rate, "erlang rate");
    if (shape < 1) throw DomainError("erlang shape must be a positive integer");
    log_norm_ = shape * std::log(rate) - std::lgamma(static_cast<double>(shape));
}

std::string Erlang::describe() const {
    return "erlang(rate=" + fmt(rate_) + ",shape=" + std::to_string(shape_) + ")";
}

double Erlang::density(double x) const {
    if (x < 0) return 0.0;
    if (x == 0) return shape_ == 1 ? rate_ : 0.0;
    return std::exp(log_norm_ + (shape_ - 1) * std::log(x) - rate_ * x);
}

double Erlang::density_derivative(double x) const {
    if (x < 0) return 0.0;
    if (shape_ == 1) return -rate_ * rate_ * std::exp(-rate_ * x);
    if (x == 0) return shape_ == 2 ? rate_ * rate_ : 0.0;
    // f' = rate^k x^{k-2} e^{-rate x} ((k-1) - rate x) / (k-1)!
    return std::exp(log_norm_ + (shape_ - 2) * std::log(x) - rate_ * x) * ((shape_ - 1) - rate_ * x);
}

double Erlang::survival(double x) const {
    if (x <= 0) return 1.0;
    const double z = rate_ * x;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < shape_; ++j) {
        term *= z / j;
        sum += term;
    }
    return std::exp(-z) * sum;
}

double Erlang::cdf(double x) const {
    if (x <= 0) return 0.0;
    if (shape_ == 1) return -std::expm1(-rate_ * x);
    return 1.0 - survival(x);
}

double Erlang::raw_moment3() const {
    const double k = shape_;
    return k * (k + 1) * (k + 2) / (rate_ * rate_ * rate_);
}

double Erlang::laplace(double s) const { return std::pow(rate_ / (rate_ + s), shape_); }

std::optional<double> Erlang::mgf(double s) const {
    if (s >= rate_) return std::nullopt;
    return std::pow(rate_ / (rate_ - s), shape_);
}

double Erlang::from_uniforms(std::span<const double> u) const {
    double s = 0.0;
    for (int j = 0; j < shape_; ++j) s -= std::log1p(-u[j]);
    return s / rate_;
}

double Erlang::sample(RandomStream& rng) const {
    double s = 0.0;
    for (int j = 0; j < shape_; ++j) s -= std::log1p(-rng.uniform());
    return s / rate_;
}

// --- Pareto (Lomax) ---

Pareto::Pareto(double a, double b) : a_(a), b_(b) {
    require_positive(b, "pareto b");
    if (!(a > 1) || !std::isfinite(a)) throw DomainError("pareto a must exceed 1");
}

std::string Pareto::describe() const { return "pareto(a=" + fmt(a_) + ",b=" + fmt(b_) + ")"; }

double Pareto::density(double x) const {
    if (x < 0) return 0.0;
    return a_ * b_ * std::exp(-(a_ + 1) * std::log1p(b_ * x));
}

double Pareto::density_derivative(double x) const {
    if (x < 0) return 0.0;
    return -a_ * (a_ + 1) * b_ * b_ * std::exp(-(a_ + 2) * std::log1p(b_ * x));
}

double Pareto::survival(double x) const { return x <= 0 ? 1.0 : std::exp(-a_ * std::log1p(b_ * x)); }

double Pareto::cdf(double x) const { return x <= 0 ? 0.0 : -std::expm1(-a_ * std::log1p(b_ * x)); }

double Pareto::mean() const { return 1.0 / (b_ * (a_ - 1)); }

double Pareto::variance() const {
    if (a_ <= 2) return kInf;
    const double m2 = 2.0 / (b_ * b_ * (a_ - 1) * (a_ - 2));
    const double m = mean();
    return m2 - m * m;
}

double Pareto::raw_moment3() const {
    if (a_ <= 3) return kInf;
    return 6.0 / (b_ * b_ * b_ * (a_ - 1) * (a_ - 2) * (a_ - 3));
}

double Pareto::laplace(double s) const {
    if (s == 0) return 1.0;
    const double scale = 1.0 / b_;
    const double bp[] = {scale, 1.0 / s};
    QuadratureConfig q{1e-14, 1e-12, 400};
    return integrate_to_infinity([&](double y) { return std::exp(-s * y) * density(y); }, 0.0, q, bp).value;
}

std::optional<double> Pareto::mgf(double s) const {
    if (s > 0) return std::nullopt;
    return laplace(-s);
}

double Pareto::from_uniforms(std::span<const double> u) const {
    return std::expm1(-std::log1p(-u[0]) / a_) / b_;
}

DistributionPtr make_exponential(double rate) { return std::make_shared<Exponential>(rate); }
DistributionPtr make_erlang(double rate, int shape) { return std::make_shared<Erlang>(rate, shape); }
DistributionPtr make_pareto(double a, double b) { return std::make_shared<Pareto>(a, b); }

// --- summaries ---

double MomentSummary::D() const { return std::sqrt(Dsq); }

double MomentSummary::diffusion_scale() const { return std::sqrt(Dsq) / std::pow(M, 1.5); }

MomentSummary summary_from_md(double M, double Dsq) {
    if (!(M > 0) || !(Dsq > 0)) throw DomainError("M and D^2 must be positive");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan, nan, M, Dsq, 1.0 / M};
}

RenewalModel RenewalModel::ordinary(DistributionPtr t, DistributionPtr y) {
    return {t, t, std::move(y)};
}

MomentSummary RenewalModel::summary() const {
    if (!first_interval || !interval || !jump) throw DomainError("renewal model is incomplete");
    MomentSummary s{};
    s.ET = interval->mean();
    s.EY = jump->mean();
    s.DT = interval->variance();
    s.DY = jump->variance();
    s.ET3 = interval->raw_moment3();
    s.EY3 = jump->raw_moment3();
    for (double v : {s.ET, s.EY, s.DT, s.DY, s.ET3, s.EY3})
        if (!std::isfinite(v)) throw UnsupportedModelError("model needs finite moments up to order three");
    s.M = s.ET / s.EY;
    s.Dsq = (s.ET * s.ET * s.DY + s.EY * s.EY * s.DT) / (s.EY * s.EY * s.EY);
    s.cstar = 1.0 / s.M;
    if (!(s.Dsq > 0)) throw UnsupportedModelError("D^2 must be positive");
    return s;
}

std::string RenewalModel::describe() const {
    return "T1=" + first_interval->describe() + ";T=" + interval->describe() + ";Y=" + jump->describe();
}

}  // namespace crossing
