#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlq {

/// Polynomial over GF(2), stored as a packed little-endian bit vector
/// (bit i of word i/64 is the coefficient of t^i). Always kept canonical:
/// no words above the leading coefficient, so equality is structural.
class Gf2Poly {
public:
    Gf2Poly() = default;

    static Gf2Poly zero() { return Gf2Poly(); }

    static Gf2Poly one() { return from_mask(1); }

    static Gf2Poly t() { return from_mask(2); }

    /// Builds from a coefficient mask: bit i = coefficient of t^i.
    static Gf2Poly from_mask(std::uint64_t mask) {
        Gf2Poly p;
        if (mask != 0) p.words_.push_back(mask);
        return p;
    }

    static Gf2Poly monomial(std::size_t deg) {
        Gf2Poly p;
        p.words_.assign(deg / 64 + 1, 0);
        p.words_[deg / 64] = std::uint64_t{1} << (deg % 64);
        return p;
    }

    /// Parses either a human-readable sum ("t^3+t^2+1", "t", "0") or a
    /// hexadecimal coefficient mask ("0xd" for t^3+t^2+1).
    static Gf2Poly parse(const std::string& text) {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        if (s.empty()) throw std::invalid_argument("empty polynomial string");
        if (s.size() > 2 && (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0)) {
            Gf2Poly p;
            std::size_t digits = s.size() - 2;
            for (std::size_t d = 0; d < digits; ++d) {
                char c = s[s.size() - 1 - d];
                int v;
                if (c >= '0' && c <= '9') v = c - '0';
                else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
                else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
                else throw std::invalid_argument("bad hex digit in polynomial: " + text);
                for (int b = 0; b < 4; ++b)
                    if (v & (1 << b)) p.set_coeff(d * 4 + b);
            }
            p.trim();
            return p;
        }
        Gf2Poly p;
        std::size_t i = 0;
        while (i < s.size()) {
            if (s[i] == '+') { ++i; continue; }
            if (s[i] == '1') { p.flip_coeff(0); ++i; continue; }
            if (s[i] == '0') { ++i; continue; }
            if (s[i] != 't') throw std::invalid_argument("bad polynomial term in: " + text);
            ++i;
            std::size_t deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t start = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (start == i) throw std::invalid_argument("missing exponent in: " + text);
                deg = std::stoull(s.substr(start, i - start));
            }
            p.flip_coeff(deg);
        }
        p.trim();
        return p;
    }

    bool is_zero() const { return words_.empty(); }

    bool is_one() const { return words_.size() == 1 && words_[0] == 1; }

    /// Degree of the polynomial; -1 for the zero polynomial.
    int degree() const {
        if (words_.empty()) return -1;
        std::uint64_t top = words_.back();
        int bit = 63;
        while (!(top >> bit & 1)) --bit;
        return static_cast<int>((words_.size() - 1) * 64) + bit;
    }

    bool coeff(std::size_t i) const {
        std::size_t w = i / 64;
        if (w >= words_.size()) return false;
        return (words_[w] >> (i % 64)) & 1;
    }

    /// Coefficient mask for polynomials of degree < 64.
    std::uint64_t mask() const {
        if (words_.empty()) return 0;
        if (words_.size() > 1) throw std::domain_error("polynomial degree >= 64 has no 64-bit mask");
        return words_[0];
    }

    friend Gf2Poly operator+(const Gf2Poly& a, const Gf2Poly& b) {
        Gf2Poly r;
        r.words_.resize(std::max(a.words_.size(), b.words_.size()), 0);
        for (std::size_t i = 0; i < a.words_.size(); ++i) r.words_[i] ^= a.words_[i];
        for (std::size_t i = 0; i < b.words_.size(); ++i) r.words_[i] ^= b.words_[i];
        r.trim();
        return r;
    }

    friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
        Gf2Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.words_.assign(a.words_.size() + b.words_.size(), 0);
        int da = a.degree();
        for (int i = 0; i <= da; ++i)
            if (a.coeff(static_cast<std::size_t>(i))) r.xor_shifted(b, static_cast<std::size_t>(i));
        r.trim();
        return r;
    }

    /// Quotient and remainder of a / b; b must be nonzero.
    static std::pair<Gf2Poly, Gf2Poly> divmod(const Gf2Poly& a, const Gf2Poly& b) {
        if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
        Gf2Poly q, r = a;
        int db = b.degree();
        while (!r.is_zero() && r.degree() >= db) {
            std::size_t shift = static_cast<std::size_t>(r.degree() - db);
            q.flip_coeff(shift);
            r.xor_shifted(b, shift);
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    friend Gf2Poly operator%(const Gf2Poly& a, const Gf2Poly& b) { return divmod(a, b).second; }

    friend bool operator==(const Gf2Poly& a, const Gf2Poly& b) { return a.words_ == b.words_; }
    friend bool operator!=(const Gf2Poly& a, const Gf2Poly& b) { return !(a == b); }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int d = degree(); d >= 0; --d) {
            if (!coeff(static_cast<std::size_t>(d))) continue;
            if (!s.empty()) s += "+";
            if (d == 0) s += "1";
            else if (d == 1) s += "t";
            else s += "t^" + std::to_string(d);
        }
        return s;
    }

private:
    std::vector<std::uint64_t> words_;

    void set_coeff(std::size_t i) {
        std::size_t w = i / 64;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        words_[w] |= std::uint64_t{1} << (i % 64);
    }

    void flip_coeff(std::size_t i) {
        std::size_t w = i / 64;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        words_[w] ^= std::uint64_t{1} << (i % 64);
    }

    void xor_shifted(const Gf2Poly& b, std::size_t shift) {
        std::size_t wshift = shift / 64, bshift = shift % 64;
        std::size_t need = b.words_.size() + wshift + 1;
        if (words_.size() < need) words_.resize(need, 0);
        for (std::size_t i = 0; i < b.words_.size(); ++i) {
            words_[i + wshift] ^= b.words_[i] << bshift;
            if (bshift != 0) words_[i + wshift + 1] ^= b.words_[i] >> (64 - bshift);
        }
    }

    void trim() {
        while (!words_.empty() && words_.back() == 0) words_.pop_back();
    }
};

inline Gf2Poly gf2_gcd(Gf2Poly a, Gf2Poly b) {
    while (!b.is_zero()) {
        Gf2Poly r = a % b;
        a = b;
        b = r;
    }
    return a;
}

/// f_n from the recursion f_0 = 1, f_1 = t+1, f_n = t*f_{n-1} + f_{n-2}
/// (subtraction and addition coincide in characteristic 2).
inline Gf2Poly dickson_poly(unsigned n) {
    Gf2Poly prev = Gf2Poly::one();
    if (n == 0) return prev;
    Gf2Poly cur = Gf2Poly::from_mask(0x3);  // t+1
    const Gf2Poly t = Gf2Poly::t();
    for (unsigned k = 2; k <= n; ++k) {
        Gf2Poly next = t * cur + prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// base^e mod f by square-and-multiply; e = 0 yields 1.
inline Gf2Poly pb_pow_mod(const Gf2Poly& base, std::uint64_t e, const Gf2Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("pow mod zero polynomial");
    Gf2Poly result = Gf2Poly::one() % f;
    Gf2Poly b = base % f;
    while (e != 0) {
        if (e & 1) result = (result * b) % f;
        e >>= 1;
        if (e != 0) b = (b * b) % f;
    }
    return result;
}

/// t^(2^k) mod f via k squarings, avoiding huge exponents.
inline Gf2Poly frobenius_power_of_t(unsigned k, const Gf2Poly& f) {
    Gf2Poly x = Gf2Poly::t() % f;
    for (unsigned i = 0; i < k; ++i) x = (x * x) % f;
    return x;
}

/// Deterministic irreducibility test over GF(2): p of degree d is
/// irreducible iff t^(2^d) = t (mod p) and gcd(t^(2^(d/q)) + t, p) = 1
/// for every prime q dividing d.
inline bool is_irreducible(const Gf2Poly& p) {
    int d = p.degree();
    if (d < 1) throw std::invalid_argument("irreducibility undefined for constant polynomial");
    if (d == 1) return true;
    const Gf2Poly t = Gf2Poly::t();
    if (frobenius_power_of_t(static_cast<unsigned>(d), p) != t % p) return false;
    unsigned rem = static_cast<unsigned>(d);
    std::vector<unsigned> primes;
    for (unsigned q = 2; q * q <= rem; ++q)
        if (rem % q == 0) {
            primes.push_back(q);
            while (rem % q == 0) rem /= q;
        }
    if (rem > 1) primes.push_back(rem);
    for (unsigned q : primes) {
        Gf2Poly g = gf2_gcd(frobenius_power_of_t(static_cast<unsigned>(d) / q, p) + t % p, p);
        if (g.degree() > 0) return false;
    }
    return true;
}

}  // namespace dlq
