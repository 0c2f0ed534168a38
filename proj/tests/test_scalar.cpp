#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abdyn/errors.hpp"
#include "abdyn/scalar.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace abdyn;
using abdyn::testing::random_scalar;
using abdyn::testing::s;

TEST_CASE("parse produces canonical term maps") {
    CHECK(s("1") == Scalar(1L));
    const Scalar x = s("sqrt(2)-1");
    REQUIRE(x.terms().size() == 2);
    CHECK(x.terms().at(RadicalKey{2, false}) == 1);
    CHECK(x.terms().at(RadicalKey{1, false}) == -1);
    const Scalar y = s("sqrt(8)");
    REQUIRE(y.terms().size() == 1);
    CHECK(y.terms().at(RadicalKey{2, false}) == 2);
    CHECK(s("sqrt(0)").is_zero());
    CHECK(s("3/6") == Scalar(mpq_class(1, 2)));
    CHECK(s("-(1+i)*(2-i)") == s("-3-i"));
}

TEST_CASE("parse rejects malformed and unsupported input") {
    CHECK_THROWS_AS(s("1+"), ParseError);
    CHECK_THROWS_AS(s("sqrt(2"), ParseError);
    CHECK_THROWS_AS(s("x"), ParseError);
    CHECK_THROWS_AS(s("sqrt(sqrt(2))"), UnsupportedRadical);
    CHECK_THROWS_AS(s("sqrt(1/2)"), UnsupportedRadical);
    CHECK_THROWS_AS(s("1/0"), ParseError);
}

TEST_CASE("multiplication of radicals and conjugates") {
    CHECK(s("sqrt(2)") * s("sqrt(3)") == s("sqrt(6)"));
    CHECK(s("sqrt(6)") * s("sqrt(10)") == s("2*sqrt(15)"));
    CHECK(s("1+i") * s("1-i") == Scalar(2L));
    CHECK(s("i") * s("i") == Scalar(-1L));
    const Scalar a = s("sqrt(3)+i*sqrt(2)");
    const Scalar b = s("sqrt(3)-i*sqrt(2)");
    const Scalar product = a * b;
    CHECK(product == Scalar(5L));
    // Oracle: the numeric product at 128 bits.
    ScopedPrecision guard(128);
    const Complex numeric = a.evaluate(128) * b.evaluate(128);
    CHECK(static_cast<double>(abs(numeric.real() - Real(5))) < 1e-30);
    CHECK(static_cast<double>(abs(numeric.imag())) < 1e-30);
}

TEST_CASE("inverse by conjugation") {
    const Scalar x = s("1+sqrt(2)+sqrt(3)+i");
    CHECK(x * x.inverse() == Scalar(1L));
    CHECK(s("sqrt(2)-1").inverse() == s("sqrt(2)+1"));
    CHECK_THROWS_AS(Scalar().inverse(), DomainError);
}

TEST_CASE("rational independence with certificates") {
    const std::vector<Scalar> radicals = {s("1"), s("sqrt(2)"), s("sqrt(3)")};
    CHECK(is_rationally_independent(radicals).independent);

    const std::vector<Scalar> dep = {s("1"), s("sqrt(2)"), s("sqrt(8)")};
    const auto cert = is_rationally_independent(dep);
    CHECK_FALSE(cert.independent);
    REQUIRE(cert.relation.size() == 3);
    CHECK(cert.relation[0] == 0);
    CHECK(cert.relation[1] == 2);
    CHECK(cert.relation[2] == -1);

    const std::vector<Scalar> four = {s("1"), s("sqrt(2)"), s("sqrt(3)"), s("sqrt(6)")};
    CHECK(is_rationally_independent(four).independent);

    const std::vector<Scalar> complex_input = {s("1"), s("i")};
    CHECK_THROWS_AS(is_rationally_independent(complex_input), NonRealInput);
}

TEST_CASE("oracle: no small integer relation among 1, sqrt2, sqrt3, sqrt6") {
    // Exhaustive search over |q| <= 100, with the rational coefficient fixed by rounding.
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
    bool found = false;
    for (int b = -100; b <= 100 && !found; ++b)
        for (int c = -100; c <= 100 && !found; ++c)
            for (int d = -100; d <= 100; ++d) {
                if (b == 0 && c == 0 && d == 0) continue;
                const double rest = b * r2 + c * r3 + d * r6;
                const double a = std::round(-rest);
                if (std::abs(a) <= 100 && std::abs(a + rest) < 1e-9) {
                    found = true;
                    break;
                }
            }
    CHECK_FALSE(found);
}

TEST_CASE("field axioms on random scalars") {
    std::mt19937_64 rng(20261014);
    for (int trial = 0; trial < 1000; ++trial) {
        const Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a * b == b * a);
        if (!a.is_zero()) REQUIRE(a * a.inverse() == Scalar(1L));
    }
}

TEST_CASE("evaluate is a ring homomorphism within the precision bound") {
    std::mt19937_64 rng(7);
    ScopedPrecision guard(128);
    for (int trial = 0; trial < 200; ++trial) {
        const Scalar a = random_scalar(rng), b = random_scalar(rng);
        const Complex sum = a.evaluate(128) + b.evaluate(128);
        const Complex prod = a.evaluate(128) * b.evaluate(128);
        const Complex exact_sum = (a + b).evaluate(128);
        const Complex exact_prod = (a * b).evaluate(128);
        REQUIRE((sum - exact_sum).abs_double() < 1e-30);
        REQUIRE((prod - exact_prod).abs_double() < 1e-30);
    }
}

TEST_CASE("parse of printed form is the identity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const Scalar a = random_scalar(rng) * random_scalar(rng);
        REQUIRE(parse_scalar(a.to_string()) == a);
    }
    CHECK(parse_scalar(Scalar().to_string()).is_zero());
}
