#pragma once

#include <cstdint>
#include <vector>

#include "crossing/dist.hpp"
#include "crossing/level.hpp"
#include "crossing/philox.hpp"

namespace crossing {

struct McConfig {
    std::uint64_t npaths = 100000;
    std::uint64_t seed = 20240601;
    int max_bisection = 100;
    double prob_tolerance = 1e-4;  ///< stop once the probability bracket is this narrow
    unsigned threads = 0;          ///< 0: hardware concurrency
};

struct McEstimate {
    double phat = 0;
    double std_error = 0;  ///< sqrt(phat (1 - phat) / npaths)
    std::uint64_t hits = 0;
    std::uint64_t npaths = 0;
    std::uint64_t seed = 0;
};

/// True iff some renewal epoch S_n <= t has V_n - c S_n > u. Between epochs
/// u + cs - V is nondecreasing (c >= 0), so checking epochs is exact.
bool crossing_indicator(const RenewalModel& model, double u, double c, double t, RandomStream& rng);

/// Same event, scanning the whole trajectory up to t without early exits.
bool crossing_indicator_reference(const RenewalModel& model, double u, double c, double t, RandomStream& rng);

/// max over epochs S_n <= t of V_n - c S_n; -inf if there is no epoch in [0, t].
double path_supremum(const RenewalModel& model, double c, double t, RandomStream& rng);

/// Supremum of the path with the first interval fixed to v.
double path_supremum_given_first(const RenewalModel& model, double c, double t, double v, RandomStream& rng);

McEstimate estimate_crossing_prob(const RenewalModel& model, double u, double c, double t, const McConfig& cfg);

/// P{v < T <= t | T1 = v}.
McEstimate estimate_conditional_crossing_prob(const RenewalModel& model, double u, double c, double t, double v,
                                              const McConfig& cfg);

/// P{V_t > u} from the same paths.
McEstimate estimate_compound_tail(const RenewalModel& model, double u, double t, const McConfig& cfg);

/// Path suprema for paths 0..npaths-1 (the common random numbers behind simulate_level).
std::vector<double> simulate_suprema(const RenewalModel& model, double c, double t, const McConfig& cfg);

/// Bisection in u on the empirical crossing probability with common random numbers.
LevelReport simulate_level(const RenewalModel& model, double alpha, double t, double c, const McConfig& cfg);

}  // namespace crossing
