#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace aeta {

// Thrown for malformed inputs and broken type invariants (CLI exit code 2).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a requested computation exceeds the enumeration budget (exit code 3).
class cap_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown on file-system failures while persisting results (exit code 4).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an adaptive quadrature fails to meet its refinement target.
class quadrature_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact ratio, used where integer quantities divide unevenly.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw validation_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }
    bool is_integer() const { return num % den == 0; }
    std::string str() const {
        return is_integer() ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

inline double log2_safe(double x) { return std::log2(x); }

// x * log2(x) with the 0 * log(0) = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Binary entropy in bits.
inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Reduce a real angle-like coordinate into [0, M).
inline double wrap_to_circle(double y, double m) {
    double r = std::fmod(y, m);
    if (r < 0.0) r += m;
    if (r >= m) r = 0.0;  // fmod may land exactly on m after the add
    return r;
}

// Shortest distance around a circle of circumference M.
inline double circular_distance(double a, double b, double m) {
    double d = std::fabs(a - b);
    d = std::fmod(d, m);
    return std::min(d, m - d);
}

// Signed offset a - b folded into (-M/2, M/2].
inline double circular_offset(double a, double b, double m) {
    return std::remainder(a - b, m);
}

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline int int_log2(std::uint64_t v) {
    int b = 0;
    while (v > 1) { v >>= 1; ++b; }
    return b;
}

}  // namespace aeta
