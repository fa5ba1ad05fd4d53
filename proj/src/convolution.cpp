#include "crossing/convolution.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"

namespace crossing {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t fft_size(std::size_t len) {
    std::size_t n = 1;
    while (n < 2 * len) n <<= 1;
    return n;
}

}  // namespace

void trapezoid_convolve_direct(std::span<const double> a, std::span<const double> b, double h,
                               std::span<double> out) {
    const std::size_t len = out.size();
    for (std::size_t i = 0; i < len; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += a[j] * b[i - j];
        s -= 0.5 * (a[0] * b[i] + a[i] * b[0]);
        out[i] = h * s;
    }
}

struct GridConvolver::Plans {
    std::size_t n = 0;
    double* real = nullptr;
    fftw_complex* freq = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

GridConvolver::GridConvolver(std::size_t len, ConvolutionMethod method) : len_(len), method_(method) {
    if (len == 0) throw DomainError("convolution length must be positive");
    if (method_ != ConvolutionMethod::Fft) return;
    plans_ = std::make_unique<Plans>();
    plans_->n = fft_size(len);
    std::lock_guard lock(planner_mutex());
    plans_->real = fftw_alloc_real(plans_->n);
    plans_->freq = fftw_alloc_complex(plans_->n / 2 + 1);
    plans_->forward = fftw_plan_dft_r2c_1d(static_cast<int>(plans_->n), plans_->real, plans_->freq, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_c2r_1d(static_cast<int>(plans_->n), plans_->freq, plans_->real, FFTW_ESTIMATE);
}

GridConvolver::~GridConvolver() {
    if (!plans_) return;
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plans_->forward);
    fftw_destroy_plan(plans_->backward);
    fftw_free(plans_->real);
    fftw_free(plans_->freq);
}

GridConvolver::Operand GridConvolver::prepare(std::vector<double> values) {
    if (values.size() != len_) throw DomainError("convolution operand has the wrong length");
    Operand op{std::move(values), {}};
    if (method_ == ConvolutionMethod::Fft) {
        const std::size_t n = plans_->n;
        std::copy(op.values.begin(), op.values.end(), plans_->real);
        std::fill(plans_->real + len_, plans_->real + n, 0.0);
        fftw_execute(plans_->forward);
        op.spectrum.resize(n / 2 + 1);
        for (std::size_t k = 0; k <= n / 2; ++k) op.spectrum[k] = {plans_->freq[k][0], plans_->freq[k][1]};
    }
    return op;
}

void GridConvolver::convolve(const Operand& a, const Operand& b, double h, std::vector<double>& out) {
    out.resize(len_);
    if (method_ == ConvolutionMethod::Direct) {
        trapezoid_convolve_direct(a.values, b.values, h, out);
        return;
    }
    const std::size_t n = plans_->n;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const auto p = a.spectrum[k] * b.spectrum[k];
        plans_->freq[k][0] = p.real();
        plans_->freq[k][1] = p.imag();
    }
    fftw_execute(plans_->backward);
    const double scale = 1.0 / static_cast<double>(n);
    const double a0 = a.values[0], b0 = b.values[0];
    for (std::size_t i = 0; i < len_; ++i)
        out[i] = h * (plans_->real[i] * scale - 0.5 * (a0 * b.values[i] + a.values[i] * b0));
}

const std::vector<double>& ConvolutionTable::row(std::size_t n) const {
    if (n == 0 || n > rows.size()) throw DomainError("convolution table: order out of range");
    return rows[n - 1];
}

ConvolutionTable build_table(const Distribution& dist, double h, double xmax, std::size_t max_order,
                             ConvolutionMethod method, std::size_t budget) {
    if (!(h > 0) || !(xmax > h) || max_order < 1) throw DomainError("build_table: need h > 0, xmax > h, N >= 1");
    ConvolutionTable tab;
    tab.h = h;
    tab.len = static_cast<std::size_t>(std::ceil(xmax / h - 1e-9)) + 1;
    tab.max_order = max_order;
    if (static_cast<double>(tab.len) * static_cast<double>(max_order) > static_cast<double>(budget))
        throw BudgetError("build_table: len * N exceeds the configured budget");
    std::vector<double> base(tab.len);
    for (std::size_t i = 0; i < tab.len; ++i) base[i] = dist.density(static_cast<double>(i) * h);
    GridConvolver conv(tab.len, method);
    const auto f = conv.prepare(base);
    tab.rows.reserve(max_order);
    tab.rows.push_back(base);
    auto current = f;
    for (std::size_t n = 2; n <= max_order; ++n) {
        std::vector<double> next;
        conv.convolve(current, f, h, next);
        current = conv.prepare(next);
        tab.rows.push_back(std::move(next));
    }
    return tab;
}

double RenewalMassRow::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

RenewalMassRow renewal_mass(const ConvolutionTable& table_y, double x, const Distribution& jump) {
    if (x < 0) throw DomainError("renewal_mass: x must be nonnegative");
    if (x > table_y.window() * (1.0 + 1e-12)) throw WindowError("renewal_mass: x lies beyond the table window");
    const double h = table_y.h;
    RenewalMassRow row;
    row.x = x;
    row.probs.assign(table_y.max_order + 1, 0.0);
    row.probs[0] = jump.survival(x);
    const auto i = std::min(static_cast<std::size_t>(std::floor(x / h)), table_y.len - 1);
    const double rem = x - static_cast<double>(i) * h;
    // P{M(x)=n} = F^{*n}(x) - F^{*(n+1)}(x), so the sum telescopes to 1 - F^{*(N+1)}(x).
    // F^{*(n+1)}(x) = int_0^x f^{*n}(s) F(x - s) ds with the exact cdf F of the last jump.
    std::vector<double> cdf(i + 1);
    for (std::size_t k = 0; k <= i; ++k) cdf[k] = 1.0 - jump.survival(x - static_cast<double>(k) * h);
    auto next_cdf = [&](const std::vector<double>& f) {
        double acc = 0.0;
        if (i > 0) {
            acc = 0.5 * (f[0] * cdf[0] + f[i] * cdf[i]);
            for (std::size_t k = 1; k < i; ++k) acc += f[k] * cdf[k];
            acc *= h;
        }
        // last partial cell ends at s = x where F(0) = 0
        if (rem > 0 && i + 1 < table_y.len) acc += 0.5 * rem * f[i] * cdf[i];
        return acc;
    };
    double cur = 1.0 - row.probs[0];
    for (std::size_t n = 1; n <= table_y.max_order; ++n) {
        const double nxt = next_cdf(table_y.rows[n - 1]);
        row.probs[n] = cur - nxt;
        cur = nxt;
    }
    return row;
}

std::size_t truncation_order(double x, double EY, double DY, double eps) {
    if (!(EY > 0) || !(DY >= 0) || !std::isfinite(DY)) throw UnsupportedModelError("truncation order needs finite EY, DY");
    if (x <= 0) return 1;
    const double z = normal_quantile(eps);
    const double n = std::ceil(x / EY + z * std::sqrt(x * DY / (EY * EY * EY)));
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

}  // namespace crossing
