#pragma once

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "aeta/common.hpp"
#include "aeta/lfsr.hpp"
#include "aeta/rng.hpp"

namespace aeta {

inline constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double normal_quantile(double p) { return std::sqrt(2.0) * boost::math::erf_inv(2.0 * p - 1.0); }

enum class NoiseKind { full_gaussian, truncated };

// Heterodyne phase-noise model in signal-index units (circle = [0, M), one
// unit between adjacent signal points; 360 degrees = M units). `truncated`
// conditions the Gaussian on the open wedge (-M/4, +M/4), i.e. +-90 degrees.
struct NoiseModel {
    NoiseKind kind = NoiseKind::full_gaussian;
    double sigma = 1.0;

    void validate() const {
        if (!(sigma > 0.0)) throw validation_error("NoiseModel: sigma must be > 0");
    }
    static double truncation_half_width(int m) { return m / 4.0; }
};

// Number of wrap terms summed for the wrapped-Gaussian density; relative
// truncation error is below 1e-8.
inline int gaussian_wrap_terms(double sigma, int m) {
    return static_cast<int>(std::ceil(6.0 * sigma / static_cast<double>(m))) + 1;
}

// Channel density p(y | s) on the circle [0, M).
inline double likelihood(double y, double s, int m, const NoiseModel& noise) {
    if (noise.kind == NoiseKind::truncated) {
        const double w = NoiseModel::truncation_half_width(m);
        const double d = circular_distance(y, s, static_cast<double>(m));
        if (!(d < w)) return 0.0;  // support test is geometric and exact
        const double z = 2.0 * normal_cdf(w / noise.sigma) - 1.0;
        return normal_pdf(d / noise.sigma) / (noise.sigma * z);
    }
    const double d0 = circular_offset(y, s, static_cast<double>(m));
    const int jmax = gaussian_wrap_terms(noise.sigma, m);
    double acc = 0.0;
    for (int j = -jmax; j <= jmax; ++j)
        acc += normal_pdf((d0 + j * static_cast<double>(m)) / noise.sigma);
    return acc / noise.sigma;
}

// One noise draw r; full_gaussian is unbounded (wrapped by the caller),
// truncated uses the inverse CDF of the conditional distribution.
inline double noise_draw(const NoiseModel& noise, int m, std::mt19937_64& rng) {
    if (noise.kind == NoiseKind::full_gaussian) return normal_draw(rng, noise.sigma);
    const double w = NoiseModel::truncation_half_width(m);
    const double lo = normal_cdf(-w / noise.sigma);
    const double hi = normal_cdf(w / noise.sigma);
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    double r = noise.sigma * normal_quantile(lo + u * (hi - lo));
    if (r <= -w) r = std::nextafter(-w, 0.0);
    if (r >= w) r = std::nextafter(w, 0.0);
    return r;
}

inline double heterodyne_sample(double s, int m, const NoiseModel& noise, std::mt19937_64& rng) {
    return wrap_to_circle(s + noise_draw(noise, m, rng), static_cast<double>(m));
}

// Signal map: the running-key segment picks one of M/2 antipodal bases and
// the transmitted polarity is v = x XOR (kseg mod 2), so adjacent bases
// disagree on bit polarity (standard Y-00 interleaving). Every downstream
// number depends on this choice.
inline int encrypt_symbol(int x, std::uint32_t kseg, int m) {
    if (x != 0 && x != 1) throw validation_error("encrypt_symbol: x must be a bit");
    if (kseg >= static_cast<std::uint32_t>(m / 2))
        throw validation_error("encrypt_symbol: kseg must be < M/2");
    const int v = x ^ static_cast<int>(kseg & 1u);
    return (static_cast<int>(kseg) + (m / 2) * v) % m;
}

// Nearest-point decision between the basis pair; a tie at distance exactly
// M/4 goes to the bit giving the smaller signal index.
inline int decrypt_symbol(double y, std::uint32_t kseg, int m) {
    const int s0 = encrypt_symbol(0, kseg, m);
    const int s1 = encrypt_symbol(1, kseg, m);
    const double d0 = circular_distance(y, s0, static_cast<double>(m));
    const double d1 = circular_distance(y, s1, static_cast<double>(m));
    if (d0 < d1) return 0;
    if (d1 < d0) return 1;
    return s0 < s1 ? 0 : 1;
}

// Distribution of the plaintext bit sequence.
struct PlaintextSource {
    enum class Kind { known, uniform, bernoulli };
    Kind kind = Kind::uniform;
    std::vector<std::uint8_t> known_bits;  // kind == known
    double p = 0.5;                        // kind == bernoulli

    void validate() const {
        if (kind == Kind::bernoulli && !(p > 0.0 && p < 1.0))
            throw validation_error("PlaintextSource: bernoulli p must lie in (0, 1)");
    }

    double entropy_rate() const {
        switch (kind) {
            case Kind::known: return 0.0;
            case Kind::uniform: return 1.0;
            case Kind::bernoulli: return binary_entropy(p);
        }
        return 0.0;
    }
    // D = log2|X| - H(X^n)/n with |X| = 2.
    double redundancy() const { return 1.0 - entropy_rate(); }
    double sequence_entropy(std::int64_t n) const { return entropy_rate() * static_cast<double>(n); }

    static PlaintextSource known(std::vector<std::uint8_t> bits) {
        PlaintextSource s;
        s.kind = Kind::known;
        s.known_bits = std::move(bits);
        return s;
    }
    static PlaintextSource uniform() { return {}; }
    static PlaintextSource bernoulli(double p) {
        PlaintextSource s;
        s.kind = Kind::bernoulli;
        s.p = p;
        s.validate();
        return s;
    }
};

inline double redundancy(const PlaintextSource& src) { return src.redundancy(); }

inline std::vector<std::uint8_t> sample_plaintext(const PlaintextSource& src, std::int64_t n,
                                                  std::mt19937_64& rng) {
    if (n < 0) throw validation_error("sample_plaintext: n must be >= 0");
    std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
    switch (src.kind) {
        case PlaintextSource::Kind::known:
            if (static_cast<std::int64_t>(src.known_bits.size()) < n)
                throw validation_error("known plaintext has fewer than n bits");
            std::copy(src.known_bits.begin(), src.known_bits.begin() + n, x.begin());
            break;
        case PlaintextSource::Kind::uniform:
            for (auto& b : x) b = static_cast<std::uint8_t>(uniform_u64(rng, 0, 1));
            break;
        case PlaintextSource::Kind::bernoulli:
            for (auto& b : x) b = static_cast<std::uint8_t>(uniform01(rng) < src.p ? 1 : 0);
            break;
    }
    return x;
}

// Sequence of circle-valued heterodyne outcomes.
struct CiphertextSeq {
    std::vector<double> values;  // each in [0, M)
    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
};

// Full configuration of one cipher + channel instance. sigma is derived as
// M / (2 sqrt(photon_N)).
struct SystemParams {
    LfsrSpec lfsr;
    int M = 8;
    double photon_N = 1.0;
    NoiseModel noise;

    static SystemParams make(LfsrSpec lfsr, int m, double photon_n, NoiseKind kind) {
        if (!(photon_n > 0.0)) throw validation_error("SystemParams: photon_N must be > 0");
        SystemParams p;
        p.lfsr = std::move(lfsr);
        p.M = m;
        p.photon_N = photon_n;
        p.noise = {kind, static_cast<double>(m) / (2.0 * std::sqrt(photon_n))};
        p.validate();
        return p;
    }

    static SystemParams make_with_sigma(LfsrSpec lfsr, int m, double sigma, NoiseKind kind) {
        if (!(sigma > 0.0)) throw validation_error("SystemParams: sigma must be > 0");
        const double n = (m / (2.0 * sigma)) * (m / (2.0 * sigma));
        SystemParams p;
        p.lfsr = std::move(lfsr);
        p.M = m;
        p.photon_N = n;
        p.noise = {kind, sigma};
        p.validate();
        return p;
    }

    void validate() const {
        lfsr.validate();
        (void)segment_bits(M);
        if (!(photon_N > 0.0)) throw validation_error("SystemParams: photon_N must be > 0");
        noise.validate();
    }

    double sigma() const { return noise.sigma; }
    int seg_bits() const { return segment_bits(M); }
    std::uint32_t num_keys() const { return lfsr.state_count(); }  // zero seed excluded
    double key_entropy_bits() const { return std::log2(static_cast<double>(num_keys())); }
    DependencyDistance dependency() const { return dependency_distance(lfsr.length, M); }
};

// Vectorized encrypt: returns the latent signal sequence (diagnostics) and
// the noisy ciphertext.
struct EncryptedSeq {
    std::vector<int> signals;
    CiphertextSeq ciphertext;
};

inline EncryptedSeq encrypt_seq(const SystemParams& params, std::uint32_t seed,
                                const std::vector<std::uint8_t>& x_bits, std::mt19937_64& rng) {
    params.validate();
    const auto n = static_cast<std::int64_t>(x_bits.size());
    const RunningKeySeq rk = running_key(params.lfsr, seed, params.M, n);
    EncryptedSeq out;
    out.signals.resize(static_cast<std::size_t>(n));
    out.ciphertext.values.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const int s = encrypt_symbol(x_bits[static_cast<std::size_t>(i)],
                                     rk.segments[static_cast<std::size_t>(i)], params.M);
        out.signals[static_cast<std::size_t>(i)] = s;
        out.ciphertext.values[static_cast<std::size_t>(i)] =
            heterodyne_sample(s, params.M, params.noise, rng);
    }
    return out;
}

// Reference additive stream cipher: y_i = x_i XOR k'_i with 1-bit segments.
inline std::vector<std::uint8_t> asc_encrypt(const std::vector<std::uint8_t>& keystream,
                                             const std::vector<std::uint8_t>& x_bits) {
    if (keystream.size() != x_bits.size())
        throw validation_error("asc_encrypt: keystream/plaintext length mismatch");
    std::vector<std::uint8_t> y(x_bits.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = keystream[i] ^ x_bits[i];
    return y;
}

}  // namespace aeta
