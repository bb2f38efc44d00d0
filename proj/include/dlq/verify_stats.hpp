#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlq/dlp_transform.hpp"
#include "dlq/normal_basis.hpp"
#include "dlq/qubo_solver.hpp"

namespace dlq {

/// Exact reduced fraction with a terminating-or-truncated decimal printer.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        num = n / g;
        den = d / g;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::string decimal_string(unsigned max_digits = 12) const {
        std::int64_t n = num;
        std::string s;
        if (n < 0) {
            s += "-";
            n = -n;
        }
        s += std::to_string(n / den);
        std::int64_t rem = n % den;
        if (rem == 0) return s;
        s += ".";
        for (unsigned i = 0; i < max_digits && rem != 0; ++i) {
            rem *= 10;
            s += static_cast<char>('0' + rem / den);
            rem %= den;
        }
        if (rem != 0) s += "...";
        return s;
    }
};

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    unsigned space_bits = 0;

    Rational rate() const;
};

inline Rational success_rate(std::uint64_t trials, std::uint64_t successes) {
    if (trials == 0) throw std::invalid_argument("success rate needs at least one trial");
    if (successes > trials) throw std::invalid_argument("more successes than trials");
    return Rational(static_cast<std::int64_t>(successes), static_cast<std::int64_t>(trials));
}

inline Rational TrialStats::rate() const { return success_rate(trials, successes); }

/// Smallest y in [0, 2^n-2] with t^y = h, by exhaustive scan.
inline std::uint64_t dlp_brute_force(const FieldParams& fp, const NbElement& h) {
    if (h.size() != fp.n) throw std::invalid_argument("element length does not match field");
    if (h.is_zero()) throw std::invalid_argument("target element must be nonzero");
    NbElement acc = NbElement::one(fp.n);
    NbElement t = NbElement::generator(fp.n);
    for (std::uint64_t y = 0; y < fp.group_order(); ++y) {
        if (acc == h) return y;
        acc = nb_mul(acc, t, fp);
    }
    throw std::runtime_error("target is not a power of the generator");
}

inline bool verify_exponent(std::uint64_t y, const DlpInstance& inst) {
    return nb_pow(NbElement::generator(inst.fp.n), y, inst.fp) == inst.h;
}

/// log10 of the cumulative binomial tail sum_{i=threshold}^{trials}
/// C(trials,i) p^i (1-p)^{trials-i}, accumulated in log space so that
/// magnitudes like 10^-13550 stay representable.
inline double binomial_tail_log10(std::uint64_t trials, std::uint64_t threshold, double p) {
    if (threshold > trials) throw std::invalid_argument("threshold exceeds trials");
    if (threshold == 0) return 0.0;  // the tail from zero is the whole mass
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return 0.0;

    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(static_cast<long double>(-p));
    const long double ln_n1 = std::lgammal(static_cast<long double>(trials) + 1);

    std::vector<long double> log_terms;
    log_terms.reserve(trials - threshold + 1);
    long double max_term = -std::numeric_limits<long double>::infinity();
    for (std::uint64_t i = threshold; i <= trials; ++i) {
        long double lt = ln_n1 - std::lgammal(static_cast<long double>(i) + 1) -
                         std::lgammal(static_cast<long double>(trials - i) + 1) +
                         static_cast<long double>(i) * lp +
                         static_cast<long double>(trials - i) * lq;
        log_terms.push_back(lt);
        max_term = std::max(max_term, lt);
    }
    long double sum = 0;
    for (long double lt : log_terms) sum += std::exp(lt - max_term);
    return static_cast<double>((max_term + std::log(sum)) / std::log(10.0L));
}

inline double binomial_tail_log10(std::uint64_t trials, std::uint64_t threshold,
                                  const Rational& p) {
    if (threshold > trials) throw std::invalid_argument("threshold exceeds trials");
    if (threshold == 0) return 0.0;
    if (p.num <= 0) return -std::numeric_limits<double>::infinity();
    if (p.num >= p.den) return 0.0;

    // Exact rational probability: take the logs of numerator and
    // denominator separately instead of rounding p to double first.
    const long double lp = std::log(static_cast<long double>(p.num)) -
                           std::log(static_cast<long double>(p.den));
    const long double lq = std::log(static_cast<long double>(p.den - p.num)) -
                           std::log(static_cast<long double>(p.den));
    const long double ln_n1 = std::lgammal(static_cast<long double>(trials) + 1);

    long double max_term = -std::numeric_limits<long double>::infinity();
    std::vector<long double> log_terms;
    log_terms.reserve(trials - threshold + 1);
    for (std::uint64_t i = threshold; i <= trials; ++i) {
        long double lt = ln_n1 - std::lgammal(static_cast<long double>(i) + 1) -
                         std::lgammal(static_cast<long double>(trials - i) + 1) +
                         static_cast<long double>(i) * lp +
                         static_cast<long double>(trials - i) * lq;
        log_terms.push_back(lt);
        max_term = std::max(max_term, lt);
    }
    long double sum = 0;
    for (long double lt : log_terms) sum += std::exp(lt - max_term);
    return static_cast<double>((max_term + std::log(sum)) / std::log(10.0L));
}

}  // namespace dlq
