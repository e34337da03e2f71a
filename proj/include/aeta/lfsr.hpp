#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "aeta/common.hpp"

namespace aeta {

inline constexpr int kMaxRegisterLength = 24;  // desk-scale cap

// Fibonacci LFSR description. Taps are the nonzero exponents of the feedback
// polynomial x^L + ... + 1 (the constant term is implicit), so {4,1} means
// x^4 + x + 1. The tap list must contain L itself.
struct LfsrSpec {
    int length = 0;                // seed-key length |K| in bits
    std::vector<int> taps;         // must include `length`

    void validate() const {
        if (length < 2 || length > kMaxRegisterLength)
            throw validation_error("LfsrSpec: length must be in [2, " +
                                   std::to_string(kMaxRegisterLength) + "], got " +
                                   std::to_string(length));
        if (taps.empty()) throw validation_error("LfsrSpec: taps must be non-empty");
        int mx = 0;
        std::vector<int> seen;
        for (int t : taps) {
            if (t < 1 || t > length)
                throw validation_error("LfsrSpec: tap " + std::to_string(t) + " out of [1, L]");
            if (std::find(seen.begin(), seen.end(), t) != seen.end())
                throw validation_error("LfsrSpec: duplicate tap " + std::to_string(t));
            seen.push_back(t);
            mx = std::max(mx, t);
        }
        if (mx != length)
            throw validation_error("LfsrSpec: max(taps) must equal L (tap " +
                                   std::to_string(length) + " missing)");
    }

    std::uint32_t state_count() const { return (1u << length) - 1u; }  // nonzero states

    // Bit mask over the current state whose parity is the feedback bit.
    // Output leaves at bit L-1; the recurrence is s_{t+L} = s_t XOR
    // sum_{a in taps, a < L} s_{t+a}, and state bit (L-1-j) holds s_{t+j}.
    std::uint32_t tap_mask() const {
        std::uint32_t m = 1u << (length - 1);
        for (int a : taps)
            if (a != length) m |= 1u << (length - 1 - a);
        return m;
    }
};

namespace detail {

inline void check_seed(const LfsrSpec& spec, std::uint32_t seed) {
    if (seed == 0)
        throw validation_error("LFSR seed 0 is rejected (all-zero state is a fixed point)");
    if (seed >= (1u << spec.length))
        throw validation_error("LFSR seed must be < 2^L");
}

}  // namespace detail

// Stateful generator; the state at any time equals the next L output bits,
// most significant bit first.
class LfsrStream {
public:
    LfsrStream(const LfsrSpec& spec, std::uint32_t seed)
        : mask_((1u << spec.length) - 1u),
          top_(1u << (spec.length - 1)),
          taps_(spec.tap_mask()),
          state_(seed) {
        spec.validate();
        detail::check_seed(spec, seed);
    }

    int next_bit() {
        const int out = (state_ & top_) ? 1 : 0;
        const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state_ & taps_) & 1);
        state_ = ((state_ << 1) | fb) & mask_;
        return out;
    }

    // Next `bits` output bits packed MSB-first.
    std::uint32_t next_segment(int bits) {
        std::uint32_t v = 0;
        for (int i = 0; i < bits; ++i) v = (v << 1) | static_cast<std::uint32_t>(next_bit());
        return v;
    }

    std::uint32_t state() const { return state_; }

private:
    std::uint32_t mask_;
    std::uint32_t top_;
    std::uint32_t taps_;
    std::uint32_t state_;
};

inline std::vector<std::uint8_t> keystream_bits(const LfsrSpec& spec, std::uint32_t seed,
                                                std::int64_t count) {
    if (count < 0) throw validation_error("keystream_bits: count must be >= 0");
    LfsrStream s(spec, seed);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(count));
    for (auto& b : out) b = static_cast<std::uint8_t>(s.next_bit());
    return out;
}

// Running key: consecutive non-overlapping log2(M/2)-bit chunks of the
// keystream, MSB-first within a chunk.
struct RunningKeySeq {
    std::vector<std::uint32_t> segments;
    int seg_bits = 0;
};

inline int segment_bits(int m) {
    if (m < 4 || !is_power_of_two(static_cast<std::uint64_t>(m)))
        throw validation_error("M must be a power of two >= 4, got " + std::to_string(m));
    return int_log2(static_cast<std::uint64_t>(m) / 2);
}

inline RunningKeySeq running_key(const LfsrSpec& spec, std::uint32_t seed, int m,
                                 std::int64_t n_symbols) {
    const int sb = segment_bits(m);
    if (n_symbols < 0) throw validation_error("running_key: n_symbols must be >= 0");
    LfsrStream s(spec, seed);
    RunningKeySeq rk;
    rk.seg_bits = sb;
    rk.segments.resize(static_cast<std::size_t>(n_symbols));
    for (auto& seg : rk.segments) seg = s.next_segment(sb);
    return rk;
}

struct PeriodResult {
    std::uint64_t period = 0;
    bool maximal = false;  // period == 2^L - 1
};

// State period of the cycle containing `seed`, by direct simulation. For
// primitive taps this is 2^L - 1 and identical for every nonzero seed.
inline PeriodResult period(const LfsrSpec& spec, std::uint32_t seed = 1) {
    LfsrStream s(spec, seed);
    const std::uint32_t start = s.state();
    std::uint64_t p = 0;
    do {
        s.next_bit();
        ++p;
    } while (s.state() != start);
    return {p, p == static_cast<std::uint64_t>(spec.state_count())};
}

// True when every nonzero seed lies on one maximal cycle. Exhaustive; only
// sensible for small L.
inline bool is_maximal_length_all_seeds(const LfsrSpec& spec) {
    spec.validate();
    for (std::uint32_t seed = 1; seed <= spec.state_count(); ++seed)
        if (!period(spec, seed).maximal) return false;
    return true;
}

struct DependencyDistance {
    Rational exact;            // L / log2(M/2)
    std::int64_t floor_value;  // last symbol index with guaranteed independence
};

inline DependencyDistance dependency_distance(int length, int m) {
    const int sb = segment_bits(m);
    Rational r(length, sb);
    return {r, r.floor()};
}

// Primitive feedback polynomials (exponent sets) for every register length
// this tool supports; entries follow the standard published tables.
inline const std::vector<int>& primitive_taps(int length) {
    static const std::vector<std::vector<int>> table = {
        {2, 1},          // x^2+x+1
        {3, 1},          // x^3+x+1
        {4, 1},          // x^4+x+1
        {5, 2},          // x^5+x^2+1
        {6, 1},          // x^6+x+1
        {7, 1},          // x^7+x+1
        {8, 4, 3, 2},    // x^8+x^4+x^3+x^2+1
        {9, 4},          // x^9+x^4+1
        {10, 3},         // x^10+x^3+1
        {11, 2},         // x^11+x^2+1
        {12, 6, 4, 1},   // x^12+x^6+x^4+x+1
        {13, 4, 3, 1},   // x^13+x^4+x^3+x+1
        {14, 10, 6, 1},  // x^14+x^10+x^6+x+1
        {15, 1},         // x^15+x+1
        {16, 12, 3, 1},  // x^16+x^12+x^3+x+1
        {17, 3},         // x^17+x^3+1
        {18, 7},         // x^18+x^7+1
        {19, 5, 2, 1},   // x^19+x^5+x^2+x+1
        {20, 3},         // x^20+x^3+1
        {21, 2},         // x^21+x^2+1
        {22, 1},         // x^22+x+1
        {23, 5},         // x^23+x^5+1
        {24, 7, 2, 1},   // x^24+x^7+x^2+x+1
    };
    if (length < 2 || length > kMaxRegisterLength)
        throw validation_error("primitive_taps: length must be in [2, 24]");
    return table[static_cast<std::size_t>(length - 2)];
}

inline LfsrSpec default_lfsr(int length) { return LfsrSpec{length, primitive_taps(length)}; }

}  // namespace aeta
