#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "aeta/channel.hpp"
#include "aeta/common.hpp"
#include "aeta/inference.hpp"
#include "aeta/lfsr.hpp"
#include "aeta/parallel.hpp"

namespace aeta {

// Success means exact recovery of the seed key by the maximum a posteriori
// rule; ties in the argmax go to the smallest seed.
struct AttackResult {
    Estimate success_prob;
    std::vector<std::uint8_t> per_trial;  // 1 when the MAP key was correct
    std::int64_t n = 0;
};

namespace detail {

inline AttackResult attack_result_from_bits(std::vector<std::uint8_t> bits, std::int64_t n) {
    AttackResult out;
    out.n = n;
    std::vector<double> v(bits.begin(), bits.end());
    out.success_prob = summarize(v);
    out.per_trial = std::move(bits);
    return out;
}

}  // namespace detail

inline AttackResult map_attack_success(const SystemParams& params, const PlaintextSource& src,
                                       std::int64_t n, const McOptions& mc,
                                       const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, n, lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kMapAttack;
    auto bits = run_trials<std::uint8_t>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, src, n, rng);
            const auto lik = detail::likelihood_table(s.y, params.M, params.noise);
            detail::SourceMix mix = detail::SourceMix::of(src);
            if (mix.kind == PlaintextSource::Kind::known) mix.x = s.x.data();
            auto logw = detail::all_key_log_likelihoods(km, lik, mix);
            const auto post =
                detail::posterior_from_log_weights(std::move(logw), context_of(src));
            return static_cast<std::uint8_t>(post.map_seed() == s.seed ? 1 : 0);
        });
    return detail::attack_result_from_bits(std::move(bits), n);
}

// Empirical unicity sweep: the smallest n <= n_max whose measured success
// clears the target with a two-standard-error guard, found by doubling and
// then bisecting. Monte-Carlo noise makes this a sweep result, not a proof.
struct UnicitySweep {
    std::optional<std::int64_t> n0;  // nullopt = "not reached"
    std::vector<std::pair<std::int64_t, Estimate>> evaluations;
};

namespace detail {

template <class SuccessFn>
UnicitySweep unicity_sweep(SuccessFn&& success_at, double p, std::int64_t n_max) {
    if (!(p > 0.0 && p <= 1.0))
        throw validation_error("unicity_distance: target probability must lie in (0, 1]");
    if (n_max < 1) throw validation_error("unicity_distance: n_max must be >= 1");
    UnicitySweep sweep;
    auto clears = [&](std::int64_t n) {
        const Estimate e = success_at(n);
        sweep.evaluations.emplace_back(n, e);
        return e.value - 2.0 * e.std_error >= p;
    };
    std::int64_t hi = 1, lo = 0;
    bool found = clears(hi);
    while (!found && hi < n_max) {
        lo = hi;
        hi = std::min(hi * 2, n_max);
        found = clears(hi);
    }
    if (!found) return sweep;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (clears(mid))
            hi = mid;
        else
            lo = mid;
    }
    sweep.n0 = hi;
    return sweep;
}

}  // namespace detail

inline UnicitySweep unicity_distance(const SystemParams& params, const PlaintextSource& src,
                                     double p, std::int64_t n_max, const McOptions& mc,
                                     const InferenceLimits& lim = {}) {
    return detail::unicity_sweep(
        [&](std::int64_t n) {
            McOptions per = mc;
            per.stream_tag = (mc.stream_tag ? mc.stream_tag : stream::kUnicity) + 0x100 *
                             static_cast<std::uint64_t>(n);
            return map_attack_success(params, src, n, per, lim).success_prob;
        },
        p, n_max);
}

// Ciphertext-only multi-period attack: one MAP estimate per running-key
// period, then a plurality vote (ties to the smallest seed). The joint
// posterior over all observed symbols is strictly stronger and is reported
// alongside the vote.
struct VoteResult {
    Estimate vote_success;
    Estimate joint_success;
    std::int64_t periods = 0;
    std::int64_t symbols_per_period = 0;
    std::int64_t total_symbols = 0;
};

inline std::int64_t symbols_per_period(const SystemParams& params) {
    const std::int64_t bits = (std::int64_t{1} << params.lfsr.length) - 1;
    const int sb = params.seg_bits();
    return (bits + sb - 1) / sb;
}

inline VoteResult majority_vote_attack(const SystemParams& params, std::int64_t periods,
                                       const McOptions& mc, std::int64_t max_total_symbols =
                                           std::int64_t{1} << 21) {
    params.validate();
    if (periods < 1) throw validation_error("majority_vote_attack: periods must be >= 1");
    const std::int64_t per = symbols_per_period(params);
    const std::int64_t total = per * periods;
    if (total > max_total_symbols)
        throw cap_error("majority_vote_attack: " + std::to_string(total) +
                        " symbols exceed the budget of " + std::to_string(max_total_symbols));
    const PlaintextSource uni = PlaintextSource::uniform();
    const std::uint32_t num_keys = params.num_keys();
    const int m = params.M;
    const int sb = params.seg_bits();
    struct Bits {
        std::uint8_t vote, joint;
    };
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kMajorityVote;
    auto vals = run_trials<Bits>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, uni, total, rng);
            const auto lik = detail::likelihood_table(s.y, m, params.noise);
            // Every key's register state advances across periods; period j
            // sees symbols [j*per, (j+1)*per).
            std::vector<LfsrStream> streams;
            streams.reserve(num_keys);
            for (std::uint32_t idx = 0; idx < num_keys; ++idx)
                streams.emplace_back(params.lfsr, idx + 1);
            std::vector<std::int64_t> votes(num_keys, 0);
            std::vector<double> joint_log(num_keys, 0.0);
            std::vector<bool> joint_zero(num_keys, false);
            for (std::int64_t j = 0; j < periods; ++j) {
                std::uint32_t best = 0;
                double best_log = detail::kNegInf;
                bool any = false;
                for (std::uint32_t idx = 0; idx < num_keys; ++idx) {
                    detail::LogProduct lp;
                    for (std::int64_t i = j * per; i < (j + 1) * per; ++i) {
                        const std::uint32_t seg = streams[idx].next_segment(sb);
                        const double* row =
                            lik.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(m);
                        lp.mul(0.5 * (row[encrypt_symbol(0, seg, m)] +
                                      row[encrypt_symbol(1, seg, m)]));
                    }
                    const double lw = lp.log_value();
                    if (lw == detail::kNegInf)
                        joint_zero[idx] = true;
                    else if (!joint_zero[idx])
                        joint_log[idx] += lw;
                    // strict comparison keeps ties at the smallest seed
                    if (!any || lw > best_log) {
                        best = idx;
                        best_log = lw;
                        any = true;
                    }
                }
                votes[best] += 1;
            }
            std::uint32_t winner = 0;
            for (std::uint32_t idx = 1; idx < num_keys; ++idx)
                if (votes[idx] > votes[winner]) winner = idx;
            std::uint32_t joint_best = 0;
            double joint_best_log = detail::kNegInf;
            for (std::uint32_t idx = 0; idx < num_keys; ++idx) {
                const double lw = joint_zero[idx] ? detail::kNegInf : joint_log[idx];
                if (idx == 0 || lw > joint_best_log) {
                    joint_best = idx;
                    joint_best_log = lw;
                }
            }
            return Bits{static_cast<std::uint8_t>(winner + 1 == s.seed ? 1 : 0),
                        static_cast<std::uint8_t>(joint_best + 1 == s.seed ? 1 : 0)};
        });
    std::vector<double> v(vals.size()), jv(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        v[i] = vals[i].vote;
        jv[i] = vals[i].joint;
    }
    VoteResult out;
    out.vote_success = summarize(v);
    out.joint_success = summarize(jv);
    out.periods = periods;
    out.symbols_per_period = per;
    out.total_symbols = total;
    return out;
}

// ---------------------------------------------------------------------------
// Reference additive stream cipher under known-plaintext attack. The observed
// bits pin the keystream prefix exactly, so the posterior is uniform on the
// set of seeds whose keystream agrees with it.
// ---------------------------------------------------------------------------

namespace asc {

// Seeds consistent with the first n keystream bits of `true_seed`.
inline std::vector<std::uint32_t> matching_seeds(const LfsrSpec& spec, std::uint32_t true_seed,
                                                 std::int64_t n) {
    const auto prefix = keystream_bits(spec, true_seed, n);
    std::vector<std::uint32_t> match;
    for (std::uint32_t seed = 1; seed <= spec.state_count(); ++seed) {
        LfsrStream st(spec, seed);
        bool ok = true;
        for (std::int64_t i = 0; i < n; ++i)
            if (st.next_bit() != prefix[static_cast<std::size_t>(i)]) {
                ok = false;
                break;
            }
        if (ok) match.push_back(seed);
    }
    return match;
}

inline AttackResult map_attack_success(const LfsrSpec& spec, std::int64_t n,
                                       const McOptions& mc) {
    spec.validate();
    if (n < 0) throw validation_error("asc map attack: n must be >= 0");
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kMapAttack;
    auto bits = run_trials<std::uint8_t>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto seed =
                static_cast<std::uint32_t>(uniform_u64(rng, 1, spec.state_count()));
            const auto match = matching_seeds(spec, seed, n);
            return static_cast<std::uint8_t>(!match.empty() && match.front() == seed ? 1 : 0);
        });
    return detail::attack_result_from_bits(std::move(bits), n);
}

inline Estimate avg_spurious(const LfsrSpec& spec, std::int64_t n, const McOptions& mc) {
    spec.validate();
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kSpurious;
    auto vals = run_trials<double>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto seed =
                static_cast<std::uint32_t>(uniform_u64(rng, 1, spec.state_count()));
            return static_cast<double>(matching_seeds(spec, seed, n).size()) - 1.0;
        });
    return summarize(vals);
}

inline UnicitySweep unicity_distance(const LfsrSpec& spec, double p, std::int64_t n_max,
                                     const McOptions& mc) {
    return detail::unicity_sweep(
        [&](std::int64_t n) {
            McOptions per = mc;
            per.stream_tag = (mc.stream_tag ? mc.stream_tag : stream::kUnicity) + 0x100 *
                             static_cast<std::uint64_t>(n);
            return map_attack_success(spec, n, per).success_prob;
        },
        p, n_max);
}

}  // namespace asc
}  // namespace aeta
