#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "aeta/common.hpp"
#include "aeta/rng.hpp"

namespace aeta {

// Monte-Carlo scalar result. All stochastic outputs use it.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
};

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(rng, trial_index) for every trial and returns the per-trial values
// in trial order. Workers own disjoint contiguous index ranges and write into
// a preallocated vector, so the result (and anything reduced from it in index
// order) is identical for every worker count.
template <class T, class Fn>
std::vector<T> run_trials(std::int64_t trials, int workers, std::uint64_t master_seed,
                          std::uint64_t stream_tag, Fn&& fn) {
    if (trials < 1) throw validation_error("run_trials: trials must be >= 1");
    std::vector<T> out(static_cast<std::size_t>(trials));
    const int w = std::min<std::int64_t>(resolve_workers(workers), trials);
    if (w <= 1) {
        for (std::int64_t t = 0; t < trials; ++t) {
            auto rng = make_trial_rng(master_seed, stream_tag, static_cast<std::uint64_t>(t));
            out[static_cast<std::size_t>(t)] = fn(rng, t);
        }
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    const std::int64_t chunk = (trials + w - 1) / w;
    for (int i = 0; i < w; ++i) {
        const std::int64_t lo = i * chunk;
        const std::int64_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::int64_t t = lo; t < hi; ++t) {
                auto rng = make_trial_rng(master_seed, stream_tag, static_cast<std::uint64_t>(t));
                out[static_cast<std::size_t>(t)] = fn(rng, t);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

// Sample mean and standard error, reduced in index order.
inline Estimate summarize(const std::vector<double>& values) {
    const auto n = static_cast<std::int64_t>(values.size());
    if (n == 0) return {};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    if (n < 2) return {mean, 0.0, n};
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace aeta
