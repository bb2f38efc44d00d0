#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dlq/gf2_poly.hpp"

namespace dlq {

/// Square 0/1 matrix over GF(2) with rows packed into 64-bit masks
/// (bit j of row i = entry (i,j), little-endian column index).
struct BitMatrix {
    unsigned n = 0;
    std::vector<std::uint64_t> rows;

    bool at(unsigned i, unsigned j) const { return (rows[i] >> j) & 1; }

    /// Row-vector times matrix: result_j = sum_i v_i * M_ij over GF(2).
    std::uint64_t apply(std::uint64_t v) const {
        std::uint64_t out = 0;
        for (unsigned i = 0; i < n; ++i)
            if ((v >> i) & 1) out ^= rows[i];
        return out;
    }

    unsigned popcount() const {
        unsigned c = 0;
        for (auto r : rows) c += static_cast<unsigned>(std::popcount(r));
        return c;
    }

    /// Inverse over GF(2) by Gauss-Jordan; nullopt-style: throws if singular.
    BitMatrix inverted() const {
        std::vector<std::uint64_t> a = rows, inv(n);
        for (unsigned i = 0; i < n; ++i) inv[i] = std::uint64_t{1} << i;
        for (unsigned col = 0; col < n; ++col) {
            unsigned piv = col;
            while (piv < n && !((a[piv] >> col) & 1)) ++piv;
            if (piv == n) throw std::runtime_error("singular matrix over GF(2)");
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            for (unsigned r = 0; r < n; ++r)
                if (r != col && ((a[r] >> col) & 1)) {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
        }
        return BitMatrix{n, std::move(inv)};
    }

    /// Rows and columns reversed: display order, most significant index first.
    BitMatrix display_order() const {
        BitMatrix d{n, std::vector<std::uint64_t>(n, 0)};
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                if (at(i, j)) d.rows[n - 1 - i] |= std::uint64_t{1} << (n - 1 - j);
        return d;
    }

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
        return a.n == b.n && a.rows == b.rows;
    }
};

inline BitMatrix bitmatrix_from(unsigned n, std::initializer_list<std::uint64_t> row_masks) {
    if (row_masks.size() != n) throw std::invalid_argument("row count mismatch");
    return BitMatrix{n, std::vector<std::uint64_t>(row_masks)};
}

/// Element of F_{2^n} in normal-basis coordinates: bit i = coefficient of
/// alpha^(2^i). The all-ones vector is the multiplicative identity.
class NbElement {
public:
    NbElement() = default;
    NbElement(unsigned n, std::uint64_t bits) : n_(n), bits_(bits & mask_for(n)) {}

    static NbElement zero(unsigned n) { return NbElement(n, 0); }
    static NbElement one(unsigned n) { return NbElement(n, mask_for(n)); }
    /// The basis generator t = alpha: only bit 0 set.
    static NbElement generator(unsigned n) { return NbElement(n, 1); }

    /// Parses a display-order bit string (most significant coordinate
    /// first), e.g. "110" for the n=3 element with b2=1, b1=1, b0=0.
    static NbElement from_display(unsigned n, const std::string& s) {
        if (s.size() != n) throw std::invalid_argument("normal-basis bit string must have length n");
        std::uint64_t bits = 0;
        for (unsigned i = 0; i < n; ++i) {
            char c = s[n - 1 - i];
            if (c != '0' && c != '1') throw std::invalid_argument("normal-basis bit string must be 0/1");
            if (c == '1') bits |= std::uint64_t{1} << i;
        }
        return NbElement(n, bits);
    }

    unsigned size() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    bool bit(unsigned i) const { return (bits_ >> i) & 1; }
    bool is_zero() const { return bits_ == 0; }

    std::string display() const {
        std::string s;
        for (unsigned i = 0; i < n_; ++i) s.push_back(bit(n_ - 1 - i) ? '1' : '0');
        return s;
    }

    friend bool operator==(const NbElement& a, const NbElement& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }
    friend bool operator!=(const NbElement& a, const NbElement& b) { return !(a == b); }

private:
    unsigned n_ = 0;
    std::uint64_t bits_ = 0;

    static std::uint64_t mask_for(unsigned n) {
        return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    }
};

/// Immutable field context: degree, Dickson polynomial, basis-transition
/// matrices, the multiplication matrix T(0) and its nonzero entries.
struct FieldParams {
    unsigned n = 0;
    Gf2Poly f;
    BitMatrix m_n2p;  // row i = polynomial-basis coordinates of t^(2^i) mod f
    BitMatrix m_p2n;  // inverse of m_n2p
    BitMatrix t0;     // entry (i,j) = alpha^(2^0)-coordinate of t^(2^i + 2^j)
    std::vector<std::pair<unsigned, unsigned>> t0_entries;
    bool optimal = false;

    std::uint64_t group_order() const { return (std::uint64_t{1} << n) - 1; }

    std::vector<unsigned> t0_column(unsigned j) const {
        std::vector<unsigned> out;
        for (unsigned i = 0; i < n; ++i)
            if (t0.at(i, j)) out.push_back(i);
        return out;
    }
};

inline Gf2Poly nb_to_poly(const NbElement& a, const FieldParams& fp) {
    return Gf2Poly::from_mask(fp.m_n2p.apply(a.bits()));
}

inline NbElement poly_to_nb(const Gf2Poly& a, const FieldParams& fp) {
    if (a.degree() >= static_cast<int>(fp.n))
        throw std::invalid_argument("polynomial degree out of range for field");
    return NbElement(fp.n, fp.m_p2n.apply(a.mask()));
}

/// Builds the basis machinery for any irreducible f whose root t is a
/// normal element. The resulting basis need not be optimal; the flag
/// records whether T(0) meets the 2n-1 bound.
inline FieldParams field_from_poly(const Gf2Poly& f) {
    int deg = f.degree();
    if (deg < 2 || deg > 63) throw std::invalid_argument("field degree must be in [2, 63]");
    if (!is_irreducible(f)) throw std::invalid_argument("field polynomial must be irreducible");
    unsigned n = static_cast<unsigned>(deg);
    FieldParams fp;
    fp.n = n;
    fp.f = f;

    // Row i of M_{N->P} holds t^(2^i) mod f in polynomial coordinates.
    std::vector<Gf2Poly> t2(n);
    fp.m_n2p.n = n;
    fp.m_n2p.rows.resize(n);
    t2[0] = Gf2Poly::t();
    for (unsigned i = 1; i < n; ++i) t2[i] = (t2[i - 1] * t2[i - 1]) % fp.f;
    for (unsigned i = 0; i < n; ++i) fp.m_n2p.rows[i] = t2[i].mask();

    try {
        fp.m_p2n = fp.m_n2p.inverted();
    } catch (const std::runtime_error&) {
        throw std::runtime_error("t is not a normal element for n=" + std::to_string(n));
    }

    // T(0)_{ij} = alpha-coordinate of alpha^(2^i) * alpha^(2^j).
    fp.t0.n = n;
    fp.t0.rows.assign(n, 0);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            Gf2Poly prod = (t2[i] * t2[j]) % fp.f;
            if (fp.m_p2n.apply(prod.mask()) & 1) {
                fp.t0.rows[i] |= std::uint64_t{1} << j;
                fp.t0_entries.emplace_back(i, j);
            }
        }
    fp.optimal = fp.t0.popcount() == 2 * n - 1;
    return fp;
}

/// Builds F_{2^n} with the type-II optimal-normal-basis construction:
/// f = Dickson polynomial of degree n, normal basis generated by t.
inline FieldParams build_field(unsigned n) {
    if (n < 2 || n > 63) throw std::invalid_argument("field degree must be in [2, 63]");
    Gf2Poly f = dickson_poly(n);
    if (!is_irreducible(f))
        throw std::runtime_error("no type-II construction via Dickson polynomial for n=" +
                                 std::to_string(n));
    return field_from_poly(f);
}

/// Squaring in a normal basis is a cyclic rotation of coordinates.
inline NbElement nb_square(const NbElement& a) {
    unsigned n = a.size();
    std::uint64_t b = a.bits();
    std::uint64_t rotated = ((b << 1) | (b >> (n - 1))) & ((std::uint64_t{1} << n) - 1);
    return NbElement(n, rotated);
}

/// Normal-basis product: bit k is the T(0) bilinear form with both index
/// sets rotated by k.
inline NbElement nb_mul(const NbElement& a, const NbElement& b, const FieldParams& fp) {
    if (a.size() != fp.n || b.size() != fp.n)
        throw std::invalid_argument("element length does not match field");
    std::uint64_t out = 0;
    for (unsigned k = 0; k < fp.n; ++k) {
        unsigned acc = 0;
        for (auto [i, j] : fp.t0_entries)
            acc ^= static_cast<unsigned>(a.bit((i + k) % fp.n) & b.bit((j + k) % fp.n));
        out |= static_cast<std::uint64_t>(acc) << k;
    }
    return NbElement(fp.n, out);
}

inline NbElement nb_pow(const NbElement& a, std::uint64_t e, const FieldParams& fp) {
    if (a.is_zero() && e == 0) throw std::invalid_argument("0^0 is undefined in the field");
    NbElement result = NbElement::one(fp.n);
    NbElement base = a;
    while (e != 0) {
        if (e & 1) result = nb_mul(result, base, fp);
        e >>= 1;
        if (e != 0) base = nb_square(base);
    }
    return result;
}

}  // namespace dlq
