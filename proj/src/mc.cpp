#include "crossing/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crossing/errors.hpp"
#include "crossing/parallel.hpp"

namespace crossing {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kChunks = 256;

McEstimate make_estimate(std::uint64_t hits, const McConfig& cfg) {
    McEstimate e;
    e.hits = hits;
    e.npaths = cfg.npaths;
    e.seed = cfg.seed;
    e.phat = static_cast<double>(hits) / static_cast<double>(cfg.npaths);
    e.std_error = std::sqrt(e.phat * (1.0 - e.phat) / static_cast<double>(cfg.npaths));
    return e;
}

void check_config(const McConfig& cfg) {
    if (cfg.npaths == 0) throw DomainError("Monte Carlo needs at least one path");
}

template <class Event>
McEstimate count_paths(const McConfig& cfg, Event&& event) {
    check_config(cfg);
    std::vector<std::uint64_t> hits(kChunks, 0);
    parallel_chunks(cfg.npaths, kChunks, cfg.threads, [&](std::size_t k, std::size_t b, std::size_t e) {
        std::uint64_t h = 0;
        for (std::size_t i = b; i < e; ++i) {
            RandomStream rng(cfg.seed, i);
            h += event(rng) ? 1 : 0;
        }
        hits[k] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    return make_estimate(total, cfg);
}

}  // namespace

bool crossing_indicator(const RenewalModel& model, double u, double c, double t, RandomStream& rng) {
    double s = model.first_interval->sample(rng);
    if (s > t) return false;
    double v = model.jump->sample(rng);
    while (true) {
        if (v - c * s > u) return true;
        s += model.interval->sample(rng);
        if (s > t) return false;
        v += model.jump->sample(rng);
    }
}

bool crossing_indicator_reference(const RenewalModel& model, double u, double c, double t, RandomStream& rng) {
    std::vector<double> epochs, levels;
    double s = model.first_interval->sample(rng);
    double v = 0.0;
    while (s <= t) {
        v += model.jump->sample(rng);
        epochs.push_back(s);
        levels.push_back(v);
        s += model.interval->sample(rng);
    }
    bool crossed = false;
    for (std::size_t n = 0; n < epochs.size(); ++n) crossed = crossed || (u + c * epochs[n] - levels[n] < 0);
    return crossed;
}

double path_supremum(const RenewalModel& model, double c, double t, RandomStream& rng) {
    double s = model.first_interval->sample(rng);
    double best = kNegInf;
    double v = 0.0;
    while (s <= t) {
        v += model.jump->sample(rng);
        best = std::max(best, v - c * s);
        s += model.interval->sample(rng);
    }
    return best;
}

double path_supremum_given_first(const RenewalModel& model, double c, double t, double v, RandomStream& rng) {
    double s = v;
    double best = kNegInf;
    double level = 0.0;
    while (s <= t) {
        level += model.jump->sample(rng);
        best = std::max(best, level - c * s);
        s += model.interval->sample(rng);
    }
    return best;
}

McEstimate estimate_crossing_prob(const RenewalModel& model, double u, double c, double t, const McConfig& cfg) {
    if (u < 0 || c < 0 || !(t > 0)) throw DomainError("estimate_crossing_prob: need u, c >= 0 and t > 0");
    return count_paths(cfg, [&](RandomStream& rng) { return crossing_indicator(model, u, c, t, rng); });
}

McEstimate estimate_conditional_crossing_prob(const RenewalModel& model, double u, double c, double t, double v,
                                              const McConfig& cfg) {
    if (!(v > 0 && v < t)) throw DomainError("conditional estimate needs 0 < v < t");
    return count_paths(cfg, [&](RandomStream& rng) {
        // crossing at the first epoch means T = v, which is outside {v < T <= t}
        double level = model.jump->sample(rng);
        if (level - c * v > u) return false;
        double s = v;
        while (true) {
            s += model.interval->sample(rng);
            if (s > t) return false;
            level += model.jump->sample(rng);
            if (level - c * s > u) return true;
        }
    });
}

McEstimate estimate_compound_tail(const RenewalModel& model, double u, double t, const McConfig& cfg) {
    return count_paths(cfg, [&](RandomStream& rng) {
        double s = model.first_interval->sample(rng);
        double v = 0.0;
        while (s <= t) {
            v += model.jump->sample(rng);
            s += model.interval->sample(rng);
        }
        return v > u;
    });
}

std::vector<double> simulate_suprema(const RenewalModel& model, double c, double t, const McConfig& cfg) {
    check_config(cfg);
    std::vector<double> sup(cfg.npaths);
    parallel_chunks(cfg.npaths, kChunks, cfg.threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            RandomStream rng(cfg.seed, i);
            sup[i] = path_supremum(model, c, t, rng);
        }
    });
    return sup;
}

LevelReport simulate_level(const RenewalModel& model, double alpha, double t, double c, const McConfig& cfg) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("simulate_level: alpha must lie in (0,1)");
    if (!(t > 0) || c < 0) throw DomainError("simulate_level: need t > 0 and c >= 0");
    auto sup = simulate_suprema(model, c, t, cfg);
    std::sort(sup.begin(), sup.end());
    const double n = static_cast<double>(sup.size());
    auto phat = [&](double u) {
        return static_cast<double>(sup.end() - std::upper_bound(sup.begin(), sup.end(), u)) / n;
    };

    LevelReport rep;
    rep.c = c;
    rep.alpha = alpha;
    rep.t = t;
    rep.method = LevelMethod::McBisection;
    double lo = 0.0;
    double hi = std::max(0.0, sup.back()) + 1.0;
    if (phat(lo) <= alpha) {
        rep.level = 0.0;
        rep.residual = 0.0;
        rep.bracket_lo = rep.bracket_hi = 0.0;
        return rep;
    }
    int it = 0;
    while (it < cfg.max_bisection && phat(lo) - phat(hi) > cfg.prob_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (phat(mid) > alpha)
            lo = mid;
        else
            hi = mid;
        ++it;
    }
    rep.level = 0.5 * (lo + hi);
    rep.residual = std::abs(phat(rep.level) - alpha);
    rep.bracket_lo = lo;
    rep.bracket_hi = hi;
    rep.iterations = it;
    return rep;
}

}  // namespace crossing
