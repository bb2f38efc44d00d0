#pragma once

// Test-only oracle: the cumulative binomial tail as an exact rational,
// using arbitrary-precision integers, then converted to log10. Feasible
// for small trial counts; used to cross-check the log-space evaluator.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

inline double log10_big(const BigInt& x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    std::size_t bits = boost::multiprecision::msb(x);
    if (bits <= 900) return static_cast<double>(std::log10(x.convert_to<long double>()));
    BigInt top = x >> (bits - 900);
    return static_cast<double>(std::log10(top.convert_to<long double>())) +
           static_cast<double>(bits - 900) * std::log10(2.0);
}

/// log10 of sum_{i=threshold}^{trials} C(trials,i) a^i (b-a)^(trials-i) / b^trials
/// for p = a/b, computed with exact integer arithmetic.
inline double exact_tail_log10(std::uint64_t trials, std::uint64_t threshold, std::uint64_t a,
                               std::uint64_t b) {
    BigInt numerator = 0;
    BigInt pa = a, pb = b - a;
    for (std::uint64_t i = threshold; i <= trials; ++i) {
        BigInt term = binomial(trials, i);
        term *= boost::multiprecision::pow(pa, static_cast<unsigned>(i));
        term *= boost::multiprecision::pow(pb, static_cast<unsigned>(trials - i));
        numerator += term;
    }
    BigInt denominator = boost::multiprecision::pow(BigInt(b), static_cast<unsigned>(trials));
    return log10_big(numerator) - log10_big(denominator);
}

}  // namespace oracle
