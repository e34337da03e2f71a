#pragma once

#include <cmath>
#include <limits>

#include "aeta/common.hpp"

namespace aeta {
namespace bounds {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Inputs shared by the bound formulas. log2_alphabet is 1 for both ciphers
// studied here; H_K is log2(2^L - 1) with the zero seed excluded.
struct BoundInputs {
    double h_k = 0.0;           // key entropy, bits
    double n = 0.0;             // symbols
    double log2_alphabet = 1.0; // bits per plaintext symbol
    double redundancy_d = 0.0;  // bits/symbol
    double i_xky = 0.0;         // I(X^n K; Y^n), measured or capped
    double u = 0.0;             // per-symbol information cap, bits

    void validate() const {
        if (n < 0.0) throw validation_error("BoundInputs: n must be >= 0");
        if (redundancy_d < 0.0 || redundancy_d > log2_alphabet + 1e-12)
            throw validation_error("BoundInputs: D must lie in [0, log2|X|]");
        if (i_xky < 0.0) throw validation_error("BoundInputs: I must be >= 0");
    }
};

// Exact average spurious-key count of the Shannon random cipher:
// (2^{H(K)} - 1) * 2^{-nD}.
inline double shannon_random_cipher_nk(double h_k, double n, double d) {
    return (std::exp2(h_k) - 1.0) * std::exp2(-n * d);
}

// Data length where the Shannon random cipher's count crosses 1 under the
// 2^{H(K) - nD} approximation; infinite when the plaintext carries no
// redundancy.
inline double shannon_unicity_distance(double h_k, double d) {
    if (d <= 0.0) return kInf;
    return h_k / d;
}

// Hellman / Beauchemin-Brassard lower bound for endomorphic nonrandom
// ciphers: 2^{H(K) - nD} - 1.
inline double hbb_lower_bound(double h_k, double n, double d) {
    return std::exp2(h_k - n * d) - 1.0;
}

// Lower bound valid for random and nonrandom ciphers with arbitrary
// ciphertext alphabet: 2^{H(K) + n(log2|X| - D) - I(X^n K; Y^n)} - 1.
// Reduces to the HBB bound when I = n log2|X|.
inline double theorem2_lower_bound(const BoundInputs& in) {
    in.validate();
    return std::exp2(in.h_k + in.n * (in.log2_alphabet - in.redundancy_d) - in.i_xky) - 1.0;
}

// Ciphertext-only bound from the per-symbol cap I <= nU:
// 2^{H(K) + n(1 - U)} - 1, and the data length where it first permits zero.
// The crossing point is only a necessary condition for a break, never a
// demonstration of one.
struct CtaBound {
    double bound = 0.0;
    double n_unicity = kInf;  // H(K) / (U - 1); infinite when U <= 1
};

inline CtaBound cta_bound_and_unicity(double h_k, double n, double u) {
    CtaBound out;
    out.bound = std::exp2(h_k + n * (1.0 - u)) - 1.0;
    out.n_unicity = u > 1.0 ? h_k / (u - 1.0) : kInf;
    return out;
}

// Ahn-Birnbaum equivocation approximation H_E(K) ~= L - QU, floored at zero
// for overlay plots. Not treated as ground truth anywhere.
inline double ab_equivocation_approx(double length, double q, double u) {
    return std::max(length - q * u, 0.0);
}

// The break condition Q(U+1) >> L + H_E with ">>" exposed as the explicit
// factor c, since no commonly agreed meaning exists. The default c = 10 is
// arbitrary and labeled as such wherever it is reported.
inline bool ab_break_condition(double q, double u, double length, double h_e, double c = 10.0) {
    if (!(c > 0.0)) throw validation_error("ab_break_condition: c must be > 0");
    return q * (u + 1.0) > c * (length + h_e);
}

// Necessary (never sufficient) conditions for the average spurious-key count
// to vanish: n - H(X^n) >= |K| for the ASC, nU - H(X^n) >= |K| for alpha-eta.
struct NecessaryConditions {
    bool asc_zero_possible = false;
    bool alphaeta_zero_possible = false;
};

inline NecessaryConditions necessary_conditions(double n, double h_xn, double length, double u) {
    NecessaryConditions out;
    out.asc_zero_possible = n - h_xn >= length;
    out.alphaeta_zero_possible = n * u - h_xn >= length;
    return out;
}

}  // namespace bounds
}  // namespace aeta
