#include <catch2/catch.hpp>

#include <cmath>
#include <set>

#include "dlq/verify_stats.hpp"
#include "exact_binomial_oracle.hpp"

using dlq::build_field;
using dlq::FieldParams;
using dlq::make_instance;
using dlq::NbElement;
using dlq::Rational;

TEST_CASE("brute-force discrete logarithm", "[stats]") {
    FieldParams fp3 = build_field(3);
    CHECK(dlq::dlp_brute_force(fp3, NbElement::from_display(3, "110")) == 5);
    CHECK(dlq::dlp_brute_force(fp3, NbElement::one(3)) == 0);

    FieldParams fp5 = build_field(5);
    NbElement h = nb_pow(NbElement::generator(5), 17, fp5);
    CHECK(dlq::dlp_brute_force(fp5, h) == 17);

    CHECK_THROWS_AS(dlq::dlp_brute_force(fp3, NbElement::zero(3)), std::invalid_argument);
}

TEST_CASE("exponent verification", "[stats]") {
    FieldParams fp = build_field(3);
    dlq::DlpInstance inst = make_instance(fp, NbElement::from_display(3, "110"));
    CHECK(dlq::verify_exponent(5, inst));
    CHECK_FALSE(dlq::verify_exponent(4, inst));
    CHECK(dlq::verify_exponent(12, inst));  // 12 = 5 mod 7
}

TEST_CASE("brute force agrees with verification and covers the group", "[stats]") {
    for (unsigned n : {2u, 3u, 5u}) {
        FieldParams fp = build_field(n);
        std::set<std::uint64_t> seen;
        for (std::uint64_t ybits = 1; ybits <= fp.group_order(); ++ybits) {
            NbElement h(n, ybits);
            std::uint64_t y = dlq::dlp_brute_force(fp, h);
            CHECK(dlq::verify_exponent(y, make_instance(fp, h)));
            CHECK(y < fp.group_order());
            seen.insert(y);
        }
        // t generates the whole multiplicative group for these fields.
        CHECK(seen.size() == fp.group_order());
    }
}

TEST_CASE("success rate is an exact rational", "[stats]") {
    Rational r = dlq::success_rate(10000, 7415);
    CHECK(r == Rational(1483, 2000));
    CHECK(r.decimal_string() == "0.7415");
    CHECK(dlq::success_rate(7, 7) == Rational(1, 1));
    CHECK(dlq::success_rate(7, 0) == Rational(0, 1));
    CHECK_THROWS_AS(dlq::success_rate(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(dlq::success_rate(3, 4), std::invalid_argument);
    CHECK(Rational(1, 3).decimal_string(4) == "0.3333...");
}

TEST_CASE("binomial tail fixed points", "[stats]") {
    CHECK(dlq::binomial_tail_log10(10, 0, 0.37) == 0.0);
    CHECK(dlq::binomial_tail_log10(100, 100, Rational(1, 2)) ==
          Approx(100 * std::log10(0.5)).margin(1e-9));
    CHECK(dlq::binomial_tail_log10(50, 10, Rational(0, 5)) ==
          -std::numeric_limits<double>::infinity());
    CHECK(dlq::binomial_tail_log10(50, 10, Rational(5, 5)) == 0.0);
    CHECK_THROWS_AS(dlq::binomial_tail_log10(5, 6, 0.5), std::invalid_argument);
}

TEST_CASE("the 10000-trial tail matches the reported magnitude", "[stats]") {
    double lt = dlq::binomial_tail_log10(10000, 5000, Rational(1, 2048));
    CHECK(lt > -13550.5);
    CHECK(lt < -13548.5);
    // 3.103e-13550 as a log10 value.
    CHECK(lt == Approx(-13550 + std::log10(3.103)).margin(0.05));
}

TEST_CASE("log-space tail matches the exact rational oracle", "[stats]") {
    for (std::uint64_t trials : {5ull, 12ull, 20ull}) {
        for (std::uint64_t threshold = 1; threshold <= trials; ++threshold) {
            for (auto [a, b] : {std::pair<std::uint64_t, std::uint64_t>{1, 2048},
                                {1, 2},
                                {3, 7},
                                {9, 10}}) {
                double fast = dlq::binomial_tail_log10(trials, threshold, Rational(a, b));
                double exact = oracle::exact_tail_log10(trials, threshold, a, b);
                CHECK(fast == Approx(exact).epsilon(1e-9).margin(1e-9));
            }
        }
    }
}

TEST_CASE("tail is non-increasing in the threshold", "[stats]") {
    for (auto p : {Rational(1, 2048), Rational(1, 2), Rational(4, 5)}) {
        double prev = 0.0;
        for (std::uint64_t threshold = 0; threshold <= 400; threshold += 40) {
            double lt = dlq::binomial_tail_log10(400, threshold, p);
            CHECK(lt <= prev + 1e-12);
            prev = lt;
        }
    }
}
