#pragma once

#include <cstdint>
#include <random>

namespace aeta {

// Fixed stream tags so every estimator draws from its own RNG stream.
// Two estimates combined in one report (e.g. both sides of the equivocation
// identity) must use different tags to stay statistically independent.
namespace stream {
inline constexpr std::uint64_t kSpurious = 0x01;
inline constexpr std::uint64_t kEquivocation = 0x02;
inline constexpr std::uint64_t kPi = 0x03;
inline constexpr std::uint64_t kSeqInfo = 0x04;
inline constexpr std::uint64_t kIdentityLhs = 0x05;
inline constexpr std::uint64_t kIdentityRhs = 0x06;
inline constexpr std::uint64_t kMapAttack = 0x07;
inline constexpr std::uint64_t kUnicity = 0x08;
inline constexpr std::uint64_t kMajorityVote = 0x09;
inline constexpr std::uint64_t kGeneric = 0x7f;
}  // namespace stream

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Each Monte-Carlo trial owns a generator derived from (master_seed, stream,
// trial index). Reproducibility is therefore independent of how trials are
// sharded across workers.
inline std::mt19937_64 make_trial_rng(std::uint64_t master_seed, std::uint64_t stream_tag,
                                      std::uint64_t trial_index) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream_tag * 0xd1342543de82ef95ULL;
    std::uint64_t b = splitmix64(s);
    s ^= (trial_index + 1) * 0x9e3779b97f4a7c15ULL;
    std::uint64_t c = splitmix64(s);
    return std::mt19937_64(a ^ (b * 0x2545f4914f6cdd1dULL) ^ c);
}

inline double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform over [lo, hi] inclusive.
inline std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline double normal_draw(std::mt19937_64& rng, double sigma) {
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

}  // namespace aeta
