#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aeta/channel.hpp"
#include "aeta/common.hpp"
#include "aeta/lfsr.hpp"
#include "aeta/parallel.hpp"
#include "aeta/rng.hpp"

namespace aeta {

enum class AttackContext { ciphertext_only, known_plaintext, statistical };

inline AttackContext context_of(const PlaintextSource& src) {
    switch (src.kind) {
        case PlaintextSource::Kind::known: return AttackContext::known_plaintext;
        case PlaintextSource::Kind::uniform: return AttackContext::ciphertext_only;
        case PlaintextSource::Kind::bernoulli: return AttackContext::statistical;
    }
    return AttackContext::ciphertext_only;
}

// Exact posterior over the 2^L - 1 admissible seed keys (the all-zero seed is
// excluded as degenerate). probs[i] belongs to seed i+1.
struct KeyPosterior {
    std::vector<double> probs;
    AttackContext context = AttackContext::ciphertext_only;
    bool empty_support = false;  // every key has zero likelihood

    double entropy_bits() const {
        double h = 0.0;
        for (double p : probs) h -= xlog2x(p);
        return h;
    }
    std::uint32_t map_seed() const {  // ties resolved toward the smallest seed
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.size(); ++i)
            if (probs[i] > probs[best]) best = i;
        return static_cast<std::uint32_t>(best + 1);
    }
    double max_prob() const {
        double m = 0.0;
        for (double p : probs) m = std::max(m, p);
        return m;
    }
    double prob_of_seed(std::uint32_t seed) const { return probs.at(seed - 1); }
};

// Enumeration budgets. The joint (key, data) quantities keep the documented
// defaults; callers may raise max_joint_symbol_bits up to the hard 32-bit
// combined cap.
struct InferenceLimits {
    int max_posterior_length = kMaxRegisterLength;
    int max_joint_length = 16;
    int max_joint_symbol_bits = 16;
};

struct McOptions {
    std::int64_t trials = 1000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::uint64_t stream_tag = 0;  // 0 = use the operation's default stream
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log of a long product of densities without underflow; exact zeros stay
// exact.
class LogProduct {
public:
    void mul(double m) {
        if (zero_) return;
        prod_ *= m;
        if (prod_ < 1e-280) {
            if (prod_ <= 0.0) {
                zero_ = true;
                return;
            }
            acc_ += std::log(prod_);
            prod_ = 1.0;
        }
    }
    bool is_zero() const { return zero_; }
    double log_value() const { return zero_ ? kNegInf : acc_ + std::log(prod_); }

private:
    double acc_ = 0.0;
    double prod_ = 1.0;
    bool zero_ = false;
};

inline double logsumexp(const std::vector<double>& v) {
    double mx = kNegInf;
    for (double x : v) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

// Signal points of every admissible key at every symbol position, cached when
// small enough, regenerated per key otherwise.
struct KeyModel {
    LfsrSpec spec;
    int M = 0;
    int sb = 0;
    std::int64_t n = 0;
    std::uint32_t num_keys = 0;
    bool cached = false;
    std::vector<std::uint16_t> sig0, sig1;  // [key_idx * n + i]

    static KeyModel build(const LfsrSpec& spec, int m, std::int64_t n) {
        spec.validate();
        KeyModel km;
        km.spec = spec;
        km.M = m;
        km.sb = segment_bits(m);
        km.n = n;
        km.num_keys = spec.state_count();
        km.cached = static_cast<std::int64_t>(km.num_keys) * n <= (1 << 22);
        if (km.cached && n > 0) {
            km.sig0.resize(static_cast<std::size_t>(km.num_keys) * static_cast<std::size_t>(n));
            km.sig1.resize(km.sig0.size());
            for (std::uint32_t idx = 0; idx < km.num_keys; ++idx) {
                LfsrStream st(spec, idx + 1);
                for (std::int64_t i = 0; i < n; ++i) {
                    const std::uint32_t seg = st.next_segment(km.sb);
                    const std::size_t at =
                        static_cast<std::size_t>(idx) * static_cast<std::size_t>(n) +
                        static_cast<std::size_t>(i);
                    km.sig0[at] = static_cast<std::uint16_t>(encrypt_symbol(0, seg, m));
                    km.sig1[at] = static_cast<std::uint16_t>(encrypt_symbol(1, seg, m));
                }
            }
        }
        return km;
    }

    struct Rows {
        const std::uint16_t* s0;
        const std::uint16_t* s1;
    };

    // buf0/buf1 must hold n entries; only used on the streaming path.
    Rows rows(std::uint32_t idx, std::uint16_t* buf0, std::uint16_t* buf1) const {
        if (cached) {
            const std::size_t off = static_cast<std::size_t>(idx) * static_cast<std::size_t>(n);
            return {sig0.data() + off, sig1.data() + off};
        }
        LfsrStream st(spec, idx + 1);
        for (std::int64_t i = 0; i < n; ++i) {
            const std::uint32_t seg = st.next_segment(sb);
            buf0[i] = static_cast<std::uint16_t>(encrypt_symbol(0, seg, M));
            buf1[i] = static_cast<std::uint16_t>(encrypt_symbol(1, seg, M));
        }
        return {buf0, buf1};
    }
};

// lik[i * M + s] = channel density of observation i at signal point s.
inline std::vector<double> likelihood_table(const CiphertextSeq& y, int m,
                                            const NoiseModel& noise) {
    const std::int64_t n = y.size();
    std::vector<double> lik(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < n; ++i)
        for (int s = 0; s < m; ++s)
            lik[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(s)] =
                likelihood(y.values[static_cast<std::size_t>(i)], s, m, noise);
    return lik;
}

struct SourceMix {
    PlaintextSource::Kind kind = PlaintextSource::Kind::uniform;
    const std::uint8_t* x = nullptr;  // known plaintext bits
    double p1 = 0.5;                  // P[x = 1] for bernoulli

    static SourceMix of(const PlaintextSource& src) {
        SourceMix m;
        m.kind = src.kind;
        if (src.kind == PlaintextSource::Kind::known) m.x = src.known_bits.data();
        if (src.kind == PlaintextSource::Kind::bernoulli) m.p1 = src.p;
        return m;
    }
};

// log Pr[y | k] with the plaintext marginalized per symbol (i.i.d. sources
// factorize; known plaintext collapses the mixture to one term).
inline double key_log_likelihood(const std::vector<double>& lik, int m, std::int64_t n,
                                 KeyModel::Rows r, const SourceMix& mix) {
    LogProduct lp;
    for (std::int64_t i = 0; i < n; ++i) {
        const double* row = lik.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(m);
        double f = 0.0;
        switch (mix.kind) {
            case PlaintextSource::Kind::known:
                f = row[mix.x[i] ? r.s1[i] : r.s0[i]];
                break;
            case PlaintextSource::Kind::uniform:
                f = 0.5 * (row[r.s0[i]] + row[r.s1[i]]);
                break;
            case PlaintextSource::Kind::bernoulli:
                f = (1.0 - mix.p1) * row[r.s0[i]] + mix.p1 * row[r.s1[i]];
                break;
        }
        lp.mul(f);
        if (lp.is_zero()) break;
    }
    return lp.log_value();
}

// Per-key log likelihoods for the whole admissible key space.
inline std::vector<double> all_key_log_likelihoods(const KeyModel& km,
                                                   const std::vector<double>& lik,
                                                   const SourceMix& mix) {
    std::vector<double> logw(km.num_keys);
    std::vector<std::uint16_t> b0(static_cast<std::size_t>(km.n)),
        b1(static_cast<std::size_t>(km.n));
    for (std::uint32_t idx = 0; idx < km.num_keys; ++idx)
        logw[idx] = key_log_likelihood(lik, km.M, km.n, km.rows(idx, b0.data(), b1.data()), mix);
    return logw;
}

inline KeyPosterior posterior_from_log_weights(std::vector<double> logw, AttackContext ctx) {
    KeyPosterior post;
    post.context = ctx;
    const double lz = logsumexp(logw);
    if (lz == kNegInf) {
        post.empty_support = true;
        post.probs.assign(logw.size(), 0.0);
        return post;
    }
    post.probs.resize(logw.size());
    for (std::size_t i = 0; i < logw.size(); ++i)
        post.probs[i] = logw[i] == kNegInf ? 0.0 : std::exp(logw[i] - lz);
    return post;
}

// Exact support membership under the truncated model: every symbol must have
// an allowed plaintext bit whose signal point lies inside the open wedge.
inline bool key_in_support(const CiphertextSeq& y, int m, KeyModel::Rows r, std::int64_t n,
                           const SourceMix& mix) {
    const double w = NoiseModel::truncation_half_width(m);
    const double md = static_cast<double>(m);
    for (std::int64_t i = 0; i < n; ++i) {
        const double yi = y.values[static_cast<std::size_t>(i)];
        bool ok;
        if (mix.kind == PlaintextSource::Kind::known) {
            ok = circular_distance(yi, mix.x[i] ? r.s1[i] : r.s0[i], md) < w;
        } else {
            ok = circular_distance(yi, r.s0[i], md) < w ||
                 circular_distance(yi, r.s1[i], md) < w;
        }
        if (!ok) return false;
    }
    return true;
}

inline std::uint64_t support_count(const KeyModel& km, const CiphertextSeq& y,
                                   const NoiseModel& noise, const SourceMix& mix) {
    if (noise.kind == NoiseKind::full_gaussian) return km.num_keys;  // density never vanishes
    std::uint64_t c = 0;
    std::vector<std::uint16_t> b0(static_cast<std::size_t>(km.n)),
        b1(static_cast<std::size_t>(km.n));
    for (std::uint32_t idx = 0; idx < km.num_keys; ++idx)
        if (key_in_support(y, km.M, km.rows(idx, b0.data(), b1.data()), km.n, mix)) ++c;
    return c;
}

struct ModelSample {
    std::uint32_t seed = 0;
    std::vector<std::uint8_t> x;
    std::vector<int> signals;
    CiphertextSeq y;
};

// Draw (k, x, r) from the attack model and form y. Draw order is fixed:
// seed, plaintext, then noise.
inline ModelSample sample_from_model(const SystemParams& params, const PlaintextSource& src,
                                     std::int64_t n, std::mt19937_64& rng) {
    ModelSample s;
    s.seed = static_cast<std::uint32_t>(uniform_u64(rng, 1, params.num_keys()));
    s.x = sample_plaintext(src, n, rng);
    const RunningKeySeq rk = running_key(params.lfsr, s.seed, params.M, n);
    s.signals.resize(static_cast<std::size_t>(n));
    s.y.values.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const int sig = encrypt_symbol(s.x[static_cast<std::size_t>(i)],
                                       rk.segments[static_cast<std::size_t>(i)], params.M);
        s.signals[static_cast<std::size_t>(i)] = sig;
        s.y.values[static_cast<std::size_t>(i)] =
            heterodyne_sample(sig, params.M, params.noise, rng);
    }
    return s;
}

inline void check_posterior_inputs(const SystemParams& params, const PlaintextSource& src,
                                   std::int64_t n, const InferenceLimits& lim) {
    params.validate();
    src.validate();
    if (params.lfsr.length > lim.max_posterior_length)
        throw cap_error("posterior enumeration cap exceeded: L = " +
                        std::to_string(params.lfsr.length) + " > " +
                        std::to_string(lim.max_posterior_length));
    if (src.kind == PlaintextSource::Kind::known &&
        static_cast<std::int64_t>(src.known_bits.size()) < n)
        throw validation_error("known plaintext has fewer than n bits");
}

inline void check_joint_caps(const SystemParams& params, std::int64_t n,
                             const InferenceLimits& lim) {
    const int sb = params.seg_bits();
    const std::int64_t nbits = n * sb;
    const int length = params.lfsr.length;
    if (length > lim.max_joint_length || nbits > lim.max_joint_symbol_bits ||
        length + nbits > 32)
        throw cap_error(
            "joint enumeration budget exceeded: L = " + std::to_string(length) +
            ", n*seg_bits = " + std::to_string(nbits) + " (need L <= " +
            std::to_string(lim.max_joint_length) + ", n*seg_bits <= " +
            std::to_string(lim.max_joint_symbol_bits) + ", L + n*seg_bits <= 32); " +
            "reduce n or raise the joint limits");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact posterior and support quantities
// ---------------------------------------------------------------------------

inline KeyPosterior key_posterior(const SystemParams& params, const CiphertextSeq& y,
                                  const PlaintextSource& src,
                                  const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, y.size(), lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, y.size());
    const auto lik = detail::likelihood_table(y, params.M, params.noise);
    auto logw = detail::all_key_log_likelihoods(km, lik, detail::SourceMix::of(src));
    return detail::posterior_from_log_weights(std::move(logw), context_of(src));
}

inline std::vector<std::uint32_t> support_set(const SystemParams& params, const CiphertextSeq& y,
                                              const PlaintextSource& src,
                                              const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, y.size(), lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, y.size());
    std::vector<std::uint32_t> keys;
    if (params.noise.kind == NoiseKind::full_gaussian) {
        keys.resize(km.num_keys);
        for (std::uint32_t i = 0; i < km.num_keys; ++i) keys[i] = i + 1;
        return keys;
    }
    const auto mix = detail::SourceMix::of(src);
    std::vector<std::uint16_t> b0(static_cast<std::size_t>(km.n)),
        b1(static_cast<std::size_t>(km.n));
    for (std::uint32_t idx = 0; idx < km.num_keys; ++idx)
        if (detail::key_in_support(y, km.M, km.rows(idx, b0.data(), b1.data()), km.n, mix))
            keys.push_back(idx + 1);
    return keys;
}

// N_k(y) = |K_y| - 1; empty support (possible only under truncated noise with
// inconsistent known plaintext) is reported as nullopt rather than a crash.
inline std::optional<std::int64_t> spurious_count(const SystemParams& params,
                                                  const CiphertextSeq& y,
                                                  const PlaintextSource& src,
                                                  const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, y.size(), lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, y.size());
    const std::uint64_t c =
        detail::support_count(km, y, params.noise, detail::SourceMix::of(src));
    if (c == 0) return std::nullopt;
    return static_cast<std::int64_t>(c) - 1;
}

// ---------------------------------------------------------------------------
// Monte-Carlo estimators
// ---------------------------------------------------------------------------

inline Estimate avg_spurious(const SystemParams& params, const PlaintextSource& src,
                             std::int64_t n, const McOptions& mc,
                             const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, n, lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    const auto mix_src = src;
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kSpurious;
    auto vals = run_trials<double>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, mix_src, n, rng);
            detail::SourceMix mix = detail::SourceMix::of(mix_src);
            if (mix.kind == PlaintextSource::Kind::known) mix.x = s.x.data();
            return static_cast<double>(detail::support_count(km, s.y, params.noise, mix)) - 1.0;
        });
    return summarize(vals);
}

inline Estimate key_equivocation(const SystemParams& params, const PlaintextSource& src,
                                 std::int64_t n, const McOptions& mc,
                                 const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, n, lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kEquivocation;
    auto vals = run_trials<double>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, src, n, rng);
            const auto lik = detail::likelihood_table(s.y, params.M, params.noise);
            detail::SourceMix mix = detail::SourceMix::of(src);
            if (mix.kind == PlaintextSource::Kind::known) mix.x = s.x.data();
            auto logw = detail::all_key_log_likelihoods(km, lik, mix);
            return detail::posterior_from_log_weights(std::move(logw), context_of(src))
                .entropy_bits();
        });
    return summarize(vals);
}

// Same sampled batch used for both quantities, so inequalities relating them
// are coherent per run.
struct BatchStats {
    Estimate equivocation;  // mean_y H(K|y) in bits
    Estimate spurious;      // mean_y N_k(y)
};

inline BatchStats equivocation_and_spurious(const SystemParams& params,
                                            const PlaintextSource& src, std::int64_t n,
                                            const McOptions& mc,
                                            const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, n, lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    struct Pair {
        double h, nk;
    };
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kSpurious;
    auto vals = run_trials<Pair>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, src, n, rng);
            detail::SourceMix mix = detail::SourceMix::of(src);
            if (mix.kind == PlaintextSource::Kind::known) mix.x = s.x.data();
            const double nk =
                static_cast<double>(detail::support_count(km, s.y, params.noise, mix)) - 1.0;
            const auto lik = detail::likelihood_table(s.y, params.M, params.noise);
            auto logw = detail::all_key_log_likelihoods(km, lik, mix);
            const double h =
                detail::posterior_from_log_weights(std::move(logw), context_of(src))
                    .entropy_bits();
            return Pair{h, nk};
        });
    std::vector<double> hs(vals.size()), nks(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        hs[i] = vals[i].h;
        nks[i] = vals[i].nk;
    }
    return {summarize(hs), summarize(nks)};
}

// Sampled lower estimate of Pi(n) = sup_y max_k Pr[k | y]. The supremum over
// continuous y is not attainable by sampling, so this is reported explicitly
// as a lower estimate; it is monotone in the trial count for a fixed stream.
inline Estimate pi_function(const SystemParams& params, const PlaintextSource& src,
                            std::int64_t n, const McOptions& mc,
                            const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, n, lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kPi;
    auto vals = run_trials<double>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, src, n, rng);
            const auto lik = detail::likelihood_table(s.y, params.M, params.noise);
            detail::SourceMix mix = detail::SourceMix::of(src);
            if (mix.kind == PlaintextSource::Kind::known) mix.x = s.x.data();
            auto logw = detail::all_key_log_likelihoods(km, lik, mix);
            return detail::posterior_from_log_weights(std::move(logw), context_of(src))
                .max_prob();
        });
    double mx = 0.0;
    for (double v : vals) mx = std::max(mx, v);
    return {mx, 0.0, mc.trials};
}

// ---------------------------------------------------------------------------
// Information quantities
// ---------------------------------------------------------------------------

struct UResult {
    double bits = 0.0;
    std::int64_t points = 0;        // samples on the finest grid used
    double refinement_delta = 0.0;  // |U_N - U_{N/2}| at acceptance
};

// U = I(S_i; Y_i) for the uniform signal marginal, by midpoint quadrature of
// h(Y) - h(Y|S) on the circle with grid-doubling refinement. Works for both
// noise kinds; grid midpoints never touch the truncated model's jump points.
inline UResult per_symbol_info_U(const SystemParams& params, double tol = 1e-6,
                                 int min_points_log2 = 14, int max_points_log2 = 22) {
    params.validate();
    const int m = params.M;
    auto evaluate = [&](std::int64_t npts) {
        const double h = static_cast<double>(m) / static_cast<double>(npts);
        std::vector<double> q(static_cast<std::size_t>(npts));
        for (std::int64_t i = 0; i < npts; ++i)
            q[static_cast<std::size_t>(i)] =
                likelihood((static_cast<double>(i) + 0.5) * h, 0.0, m, params.noise);
        const std::int64_t step = npts / m;  // integer: both are powers of two
        double h_r = 0.0, h_y = 0.0;
        for (std::int64_t i = 0; i < npts; ++i) {
            h_r -= xlog2x(q[static_cast<std::size_t>(i)]);
            double p = 0.0;
            for (int s = 0; s < m; ++s)
                p += q[static_cast<std::size_t>((i - s * step + npts) % npts)];
            p /= static_cast<double>(m);
            h_y -= xlog2x(p);
        }
        return (h_y - h_r) * h;
    };
    std::int64_t npts = std::max<std::int64_t>(std::int64_t{1} << min_points_log2, 16LL * m);
    double prev = evaluate(npts);
    for (;;) {
        npts *= 2;
        const double cur = evaluate(npts);
        const double delta = std::fabs(cur - prev);
        if (delta < tol) return {cur, npts, delta};
        if (npts >= (std::int64_t{1} << max_points_log2))
            throw quadrature_error("per_symbol_info_U: refinement stalled at delta = " +
                                   std::to_string(delta));
        prev = cur;
    }
}

// Unbiased Monte-Carlo estimate of I(S^n; Y^n) in bits, with the signal
// distribution induced by a uniform plaintext and a uniform admissible seed:
//   I = E[ log2( p(y | s_true) / p(y) ) ].
// p(y) marginalizes over every (key, data) pair; for i.i.d. data the inner
// sum factorizes per symbol, which is what makes the sweep affordable.
inline Estimate sequence_info(const SystemParams& params, std::int64_t n, const McOptions& mc,
                              const InferenceLimits& lim = {}) {
    params.validate();
    detail::check_joint_caps(params, n, lim);
    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    const PlaintextSource uni = PlaintextSource::uniform();
    const double log_keys = std::log(static_cast<double>(km.num_keys));
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag : stream::kSeqInfo;
    auto vals = run_trials<double>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, uni, n, rng);
            const auto lik = detail::likelihood_table(s.y, params.M, params.noise);
            detail::LogProduct num;
            for (std::int64_t i = 0; i < n; ++i)
                num.mul(lik[static_cast<std::size_t>(i) * static_cast<std::size_t>(params.M) +
                            static_cast<std::size_t>(s.signals[static_cast<std::size_t>(i)])]);
            const auto logw =
                detail::all_key_log_likelihoods(km, lik, detail::SourceMix::of(uni));
            const double log_py = detail::logsumexp(logw) - log_keys;
            return (num.log_value() - log_py) / kLn2;
        });
    return summarize(vals);
}

// Both sides of H(K|Y^n) = H(X^n) + H(K) - I(X^n K; Y^n), estimated by
// independent Monte-Carlo runs. The continuous-alphabet terms only ever
// appear through the density ratio, so everything is well-defined.
struct IdentityCheckResult {
    Estimate lhs;          // H(K|Y^n)
    Estimate rhs;          // H(X^n) + H(K) - I_est
    Estimate mutual_info;  // I(X^n K; Y^n)
    double h_xn = 0.0;
    double h_k = 0.0;
    double gap = 0.0;  // lhs - rhs
};

inline IdentityCheckResult equivocation_identity_check(const SystemParams& params,
                                                       const PlaintextSource& src,
                                                       std::int64_t n, const McOptions& mc,
                                                       const InferenceLimits& lim = {}) {
    detail::check_posterior_inputs(params, src, n, lim);
    detail::check_joint_caps(params, n, lim);
    IdentityCheckResult out;
    out.h_xn = src.sequence_entropy(n);
    out.h_k = params.key_entropy_bits();

    McOptions lhs_mc = mc;
    lhs_mc.stream_tag = mc.stream_tag ? mc.stream_tag + 1 : stream::kIdentityLhs;
    out.lhs = key_equivocation(params, src, n, lhs_mc, lim);

    const auto km = detail::KeyModel::build(params.lfsr, params.M, n);
    const double log_keys = std::log(static_cast<double>(km.num_keys));
    const std::uint64_t tag = mc.stream_tag ? mc.stream_tag + 2 : stream::kIdentityRhs;
    auto vals = run_trials<double>(
        mc.trials, mc.workers, mc.master_seed, tag, [&](std::mt19937_64& rng, std::int64_t) {
            const auto s = detail::sample_from_model(params, src, n, rng);
            const auto lik = detail::likelihood_table(s.y, params.M, params.noise);
            detail::LogProduct num;  // p(y | x, k) at the sampled pair
            for (std::int64_t i = 0; i < n; ++i)
                num.mul(lik[static_cast<std::size_t>(i) * static_cast<std::size_t>(params.M) +
                            static_cast<std::size_t>(s.signals[static_cast<std::size_t>(i)])]);
            detail::SourceMix mix = detail::SourceMix::of(src);
            if (mix.kind == PlaintextSource::Kind::known) mix.x = s.x.data();
            const auto logw = detail::all_key_log_likelihoods(km, lik, mix);
            const double log_py = detail::logsumexp(logw) - log_keys;
            return (num.log_value() - log_py) / kLn2;
        });
    out.mutual_info = summarize(vals);
    out.rhs = {out.h_xn + out.h_k - out.mutual_info.value, out.mutual_info.std_error,
               out.mutual_info.trials};
    out.gap = out.lhs.value - out.rhs.value;
    return out;
}

}  // namespace aeta
