#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ssr/scalar.hpp"

using namespace ssr;

TEST_CASE("valuation on both backends") {
    Backend p5 = Backend::padic(5);
    // 50 = 2 * 5^2 by trial division
    CHECK(Scalar::from_int(p5, 50).valuation() == 2);
    CHECK(Scalar::from_int(p5, 0).valuation() == VAL_INFINITY);
    CHECK(Scalar::uniformizer(p5).valuation() == 1);

    Backend t3 = Backend::tadic(3);
    Scalar x = Scalar::parse(t3, "(t^2)/(1+t)");
    CHECK(x.valuation() == 2);
    CHECK(Scalar::zero(t3).valuation() == VAL_INFINITY);
    CHECK(Scalar::uniformizer(t3).valuation() == 1);
}

TEST_CASE("residue map") {
    Backend p5 = Backend::padic(5);
    // 3^{-1} = 2 mod 5, 7 * 2 = 14 = 4
    CHECK(oracle::invmod_oracle(3, 5) == 2);
    CHECK(Scalar::from_rational(p5, Rational(7, 3)).residue() == Fp(4, 5));
    CHECK(Scalar::one(p5).residue() == Fp(1, 5));

    Backend t3 = Backend::tadic(3);
    CHECK(Scalar::parse(t3, "(1+t)/(1+2t)").residue() == Fp(1, 3));
    CHECK(Scalar::one(t3).residue() == Fp(1, 3));

    CHECK_THROWS_AS(Scalar::from_rational(p5, Rational(1, 5)).residue(), not_integral_error);
    CHECK_THROWS_AS(Scalar::parse(t3, "(1)/(t)").residue(), not_integral_error);
}

TEST_CASE("uniformizer") {
    CHECK(Scalar::uniformizer(Backend::padic(5)) == Scalar::from_int(Backend::padic(5), 5));
    CHECK(Scalar::uniformizer(Backend::tadic(2)) == Scalar::parse(Backend::tadic(2), "t"));
}

TEST_CASE("valuation is additive and ultrametric") {
    for (Backend b : {Backend::padic(5), Backend::padic(2), Backend::tadic(3)}) {
        Rng rng(7 + static_cast<std::uint64_t>(b.p));
        for (int trial = 0; trial < 400; ++trial) {
            Scalar x = Scalar::uniformizer_pow(b, static_cast<int>(rng.below(7)) - 3) *
                       oracle::random_unit(rng, b);
            Scalar y = Scalar::uniformizer_pow(b, static_cast<int>(rng.below(7)) - 3) *
                       oracle::random_unit(rng, b);
            CHECK((x * y).valuation() == x.valuation() + y.valuation());
            Scalar s = x + y;
            if (!s.is_zero()) {
                CHECK(s.valuation() >= std::min(x.valuation(), y.valuation()));
                if (x.valuation() != y.valuation())
                    CHECK(s.valuation() == std::min(x.valuation(), y.valuation()));
            }
        }
    }
}

TEST_CASE("residue kernel is exactly positive valuation") {
    for (Backend b : {Backend::padic(3), Backend::tadic(5)}) {
        Rng rng(11);
        for (int trial = 0; trial < 300; ++trial) {
            Scalar x = oracle::random_integral(rng, b, 3);
            CHECK((x.residue().is_zero()) == (x.valuation() >= 1));
        }
    }
}

TEST_CASE("canonical form: equal elements are bit-identical") {
    Backend p5 = Backend::padic(5);
    Scalar a = Scalar::from_rational(p5, Rational(6, 4));
    Scalar b = Scalar::from_rational(p5, Rational(3, 2));
    CHECK(a == b);
    CHECK(a.str() == b.str());

    Backend t3 = Backend::tadic(3);
    // (2+2t)/(2+t^2... ) equal fractions after normalization
    Scalar c = Scalar::parse(t3, "(2+2t)/(2)");
    Scalar d = Scalar::parse(t3, "(1+t)");
    CHECK(c == d);
    CHECK(c.str() == d.str());

    // sums reaching the same value agree bitwise
    Scalar u = Scalar::parse(t3, "(1+t)/(1+2t)");
    Scalar v = Scalar::parse(t3, "(t)/(1+2t)");
    CHECK(u + v == Scalar::parse(t3, "(1+2t)/(1+2t)"));
    CHECK((u + v).str() == "(1)");
}

TEST_CASE("scalar text round trip") {
    Backend p5 = Backend::padic(5);
    for (const char* s : {"0", "1", "-3/2", "7/3", "125"})
        CHECK(Scalar::parse(p5, Scalar::parse(p5, s).str()) == Scalar::parse(p5, s));
    Backend t3 = Backend::tadic(3);
    for (const char* s : {"(0)", "(1)", "(t)", "(1+2t+t^3)", "(t^2)/(1+t)", "(1)/(t^2)"})
        CHECK(Scalar::parse(t3, Scalar::parse(t3, s).str()) == Scalar::parse(t3, s));
}

TEST_CASE("mod_pi_pow gives canonical residues") {
    Backend p5 = Backend::padic(5);
    Scalar x = Scalar::from_int(p5, 27);
    CHECK(x.mod_pi_pow(2) == Scalar::from_int(p5, 2));
    CHECK(x.mod_pi_pow(0).is_zero()); // 27 lies in O, so its class mod O vanishes
    Backend t2 = Backend::tadic(2);
    Scalar y = Scalar::parse(t2, "(1+t+t^3)");
    CHECK(y.mod_pi_pow(2) == Scalar::parse(t2, "(1+t)"));

    Rng rng(3);
    for (Backend b : {p5, t2}) {
        for (int trial = 0; trial < 200; ++trial) {
            Scalar v = Scalar::uniformizer_pow(b, static_cast<int>(rng.below(5)) - 2) *
                       oracle::random_unit(rng, b);
            for (int e = -1; e <= 3; ++e) {
                Scalar r = v.mod_pi_pow(e);
                // difference lies in pi^e O
                Scalar diff = v - r;
                CHECK((diff.is_zero() || diff.valuation() >= e));
                // representative is reduced again to itself
                CHECK(r.mod_pi_pow(e) == r);
            }
        }
    }
}

TEST_CASE("backend validation") {
    CHECK_THROWS_AS(Backend::padic(4), error);
    CHECK_THROWS_AS(Backend::tadic(17), error);
}
