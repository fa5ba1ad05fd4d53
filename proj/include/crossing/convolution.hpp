#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "crossing/dist.hpp"

namespace crossing {

enum class ConvolutionMethod { Direct, Fft };

/// out[i] = h (sum_{j<=i} a_j b_{i-j} - (a_0 b_i + a_i b_0) / 2), the trapezoid
/// rule for int_0^{ih} a(s) b(ih - s) ds.
void trapezoid_convolve_direct(std::span<const double> a, std::span<const double> b, double h,
                               std::span<double> out);

/// Trapezoid convolution of sequences of a fixed length through real FFTs.
/// Each object owns its buffers; use one object per thread.
class GridConvolver {
public:
    struct Operand {
        std::vector<double> values;
        std::vector<std::complex<double>> spectrum;  ///< empty for the direct method
    };

    GridConvolver(std::size_t len, ConvolutionMethod method);
    ~GridConvolver();
    GridConvolver(const GridConvolver&) = delete;
    GridConvolver& operator=(const GridConvolver&) = delete;

    std::size_t length() const { return len_; }
    Operand prepare(std::vector<double> values);
    void convolve(const Operand& a, const Operand& b, double h, std::vector<double>& out);

private:
    struct Plans;
    std::size_t len_;
    ConvolutionMethod method_;
    std::unique_ptr<Plans> plans_;
};

/// n-fold convolutions f^{*n}, n = 1..max_order, on {0, h, ..., (len-1) h}.
struct ConvolutionTable {
    double h = 0;
    std::size_t len = 0;
    std::size_t max_order = 0;
    std::vector<std::vector<double>> rows;  ///< rows[n-1] holds f^{*n}

    const std::vector<double>& row(std::size_t n) const;
    double window() const { return h * static_cast<double>(len - 1); }
};

/// Guard on len * N, in stored doubles.
inline constexpr std::size_t kDefaultTableBudget = 50'000'000;

ConvolutionTable build_table(const Distribution& dist, double h, double xmax, std::size_t max_order,
                             ConvolutionMethod method = ConvolutionMethod::Fft,
                             std::size_t budget = kDefaultTableBudget);

/// Distribution of M(x), the number of partial sums of Y not exceeding x.
struct RenewalMassRow {
    double x = 0;
    std::vector<double> probs;  ///< probs[n] = P{M(x) = n}, n = 0..N

    double total() const;
};

RenewalMassRow renewal_mass(const ConvolutionTable& table_y, double x, const Distribution& jump);

/// ceil(x/EY + z_eps sqrt(x DY / EY^3)), at least 1.
std::size_t truncation_order(double x, double EY, double DY, double eps = 1e-10);

}  // namespace crossing
