#include <catch2/catch.hpp>

#include <random>
#include <string>
#include <vector>

#include "dlq/normal_basis.hpp"

using dlq::build_field;
using dlq::FieldParams;
using dlq::Gf2Poly;
using dlq::NbElement;

namespace {

std::vector<std::string> grid(const dlq::BitMatrix& m) {
    std::vector<std::string> out;
    for (unsigned i = 0; i < m.n; ++i) {
        std::string row;
        for (unsigned j = 0; j < m.n; ++j) row.push_back(m.at(i, j) ? '1' : '0');
        out.push_back(row);
    }
    return out;
}

}  // namespace

TEST_CASE("transition matrices for F_2^3 match the worked example", "[nb]") {
    FieldParams fp = build_field(3);
    CHECK(fp.f == Gf2Poly::parse("t^3+t^2+1"));
    // Display order: rows alpha^4, alpha^2, alpha; columns t^2, t, 1.
    CHECK(grid(fp.m_n2p.display_order()) == std::vector<std::string>{"111", "100", "010"});
    CHECK(grid(fp.m_p2n.display_order()) == std::vector<std::string>{"010", "001", "111"});
    // T(0) is indexed by subscripts directly.
    CHECK(grid(fp.t0) == std::vector<std::string>{"010", "101", "011"});
    CHECK(fp.optimal);
    CHECK(fp.t0.popcount() == 5);
}

TEST_CASE("multiplication matrix for F_2^5", "[nb]") {
    FieldParams fp = build_field(5);
    CHECK(fp.f == Gf2Poly::parse("t^5+t^4+t^2+t+1"));
    CHECK(grid(fp.t0) ==
          std::vector<std::string>{"01000", "10010", "00011", "01100", "00101"});
    CHECK(fp.optimal);
}

TEST_CASE("build_field rejects unsupported degrees", "[nb]") {
    CHECK_THROWS_WITH(build_field(4), Catch::Contains("no type-II construction"));
    CHECK_THROWS_AS(build_field(1), std::invalid_argument);
}

TEST_CASE("transition matrices are inverse to each other", "[nb]") {
    for (unsigned n : {2u, 3u, 5u, 6u, 9u, 11u}) {
        FieldParams fp = build_field(n);
        for (unsigned i = 0; i < n; ++i) {
            std::uint64_t e = std::uint64_t{1} << i;
            CHECK(fp.m_p2n.apply(fp.m_n2p.apply(e)) == e);
            CHECK(fp.m_n2p.apply(fp.m_p2n.apply(e)) == e);
        }
    }
}

TEST_CASE("squaring is a cyclic rotation", "[nb]") {
    CHECK(nb_square(NbElement::from_display(3, "001")).display() == "010");
    CHECK(nb_square(NbElement::from_display(3, "010")).display() == "100");
    CHECK(nb_square(NbElement::from_display(3, "111")).display() == "111");
}

TEST_CASE("normal-basis products from the power table", "[nb]") {
    FieldParams fp = build_field(3);
    NbElement t = NbElement::generator(3);
    CHECK(nb_mul(t, t, fp) == NbElement::from_display(3, "010"));  // t^2
    NbElement t4 = NbElement::from_display(3, "100");
    CHECK(nb_mul(t4, t4, fp) == NbElement::from_display(3, "001"));  // alpha^8 = t

    NbElement one = NbElement::one(3);
    CHECK(one.display() == "111");
    for (std::uint64_t bits = 0; bits < 8; ++bits) {
        NbElement a(3, bits);
        CHECK(nb_mul(one, a, fp) == a);
    }
    CHECK_THROWS_AS(nb_mul(NbElement::one(4), NbElement::one(3), fp), std::invalid_argument);
}

TEST_CASE("normal-basis exponentiation", "[nb]") {
    FieldParams fp = build_field(3);
    NbElement t = NbElement::generator(3);
    CHECK(nb_pow(t, 1, fp) == NbElement::from_display(3, "001"));
    CHECK(nb_pow(t, 5, fp) == NbElement::from_display(3, "110"));  // h = t^4+t^2
    CHECK(nb_pow(t, 7, fp) == NbElement::one(3));
    CHECK(nb_pow(t, 0, fp) == NbElement::one(3));
    CHECK_THROWS_AS(nb_pow(NbElement::zero(3), 0, fp), std::invalid_argument);
}

TEST_CASE("basis conversion", "[nb]") {
    FieldParams fp = build_field(3);
    CHECK(poly_to_nb(Gf2Poly::parse("t+1"), fp) == NbElement::from_display(3, "110"));
    CHECK(nb_to_poly(NbElement::one(3), fp) == Gf2Poly::one());
    CHECK(poly_to_nb(Gf2Poly::parse("t^2"), fp) == NbElement::from_display(3, "010"));
    // Round trip is the identity.
    for (std::uint64_t bits = 0; bits < 8; ++bits) {
        NbElement a(3, bits);
        CHECK(poly_to_nb(nb_to_poly(a, fp), fp) == a);
    }
}

TEST_CASE("basis change is a ring homomorphism", "[nb]") {
    std::mt19937_64 rng(0xba515);
    for (unsigned n : {2u, 3u, 5u, 6u}) {
        FieldParams fp = build_field(n);
        std::uniform_int_distribution<std::uint64_t> d(0, fp.group_order());
        for (int iter = 0; iter < 1000; ++iter) {
            NbElement a(n, d(rng)), b(n, d(rng));
            Gf2Poly via_field = (nb_to_poly(a, fp) * nb_to_poly(b, fp)) % fp.f;
            CHECK(nb_to_poly(nb_mul(a, b, fp), fp) == via_field);
        }
    }
}

TEST_CASE("multiplying an element by itself equals squaring", "[nb]") {
    for (unsigned n : {2u, 3u, 5u, 6u}) {
        FieldParams fp = build_field(n);
        for (std::uint64_t bits = 0; bits <= fp.group_order(); ++bits) {
            NbElement a(n, bits);
            CHECK(nb_mul(a, a, fp) == nb_square(a));
        }
    }
}

TEST_CASE("multiplication is commutative", "[nb]") {
    for (unsigned n : {2u, 3u}) {
        FieldParams fp = build_field(n);
        for (std::uint64_t x = 0; x <= fp.group_order(); ++x)
            for (std::uint64_t y = 0; y <= fp.group_order(); ++y)
                CHECK(nb_mul(NbElement(n, x), NbElement(n, y), fp) ==
                      nb_mul(NbElement(n, y), NbElement(n, x), fp));
    }
    std::mt19937_64 rng(0xc0111);
    for (unsigned n : {6u, 9u}) {
        FieldParams fp = build_field(n);
        std::uniform_int_distribution<std::uint64_t> d(0, fp.group_order());
        for (int iter = 0; iter < 300; ++iter) {
            NbElement a(n, d(rng)), b(n, d(rng));
            CHECK(nb_mul(a, b, fp) == nb_mul(b, a, fp));
        }
    }
}

TEST_CASE("optimal bases have exactly 2n-1 multiplication-matrix entries", "[nb]") {
    for (unsigned n : {2u, 3u, 5u, 6u, 9u, 11u}) {
        FieldParams fp = build_field(n);
        CHECK(fp.optimal);
        CHECK(fp.t0.popcount() == 2 * n - 1);
        unsigned single = 0, twos = 0;
        for (unsigned i = 0; i < n; ++i) {
            unsigned c = static_cast<unsigned>(std::popcount(fp.t0.rows[i]));
            if (c == 1) ++single;
            if (c == 2) ++twos;
        }
        CHECK(single == 1);
        CHECK(twos == n - 1);
    }
}
