#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abdyn/errors.hpp"
#include "abdyn/linalg.hpp"
#include "test_support.hpp"

#include <random>

using namespace abdyn;
using abdyn::testing::exact;
using abdyn::testing::exact_vec;
using abdyn::testing::random_rational_matrix;
using abdyn::testing::s;

TEST_CASE("rank on exact and tolerant backends") {
    CHECK(rank(ExactMatrix::identity(3)) == 3);
    CHECK(rank(ExactMatrix(3, 4)) == 0);
    const ExactMatrix stacked = exact({{"1", "1"}, {"sqrt(3)", "sqrt(2)"}, {"sqrt(2)", "1"}});
    // Oracle: the top 2x2 minor is sqrt(2) - sqrt(3), nonzero by rational independence.
    CHECK((stacked(0, 0) * stacked(1, 1) - stacked(0, 1) * stacked(1, 0)) == s("sqrt(2)-sqrt(3)"));
    CHECK(rank(stacked) == 2);
    CHECK(rank(to_numeric(stacked)) == 2);
    CHECK(rank(NumericMatrix(2, 2)) == 0);
}

TEST_CASE("kernel basics") {
    const ExactMatrix a = exact({{"1", "0", "0"}, {"0", "1", "0"}, {"1", "0", "1"}});
    const ExactMatrix n = a - ExactMatrix::identity(3);
    // Oracle: N is strictly lower triangular, so N^3 = 0 entrywise.
    const ExactMatrix n3 = n * n * n;
    CHECK(n3 == ExactMatrix(3, 3));
    CHECK(kernel(n3).dim() == 3);
    CHECK(kernel(ExactMatrix::identity(2)).dim() == 0);
    const Subspace<Scalar> k = kernel(exact({{"0", "0"}, {"0", "1"}}));
    REQUIRE(k.dim() == 1);
    CHECK(k.contains(exact_vec({"1", "0"})));
    CHECK_FALSE(k.contains(exact_vec({"1", "1"})));
}

TEST_CASE("kernel vectors are annihilated; rank-nullity on random matrices") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = dim(rng), c = dim(rng);
        ExactMatrix m = random_rational_matrix(rng, r, c, 2);
        if (trial % 3 == 0 && c > 1) m.set_col(c - 1, (m * ExactMatrix::column(std::vector<Scalar>(c, Scalar(1L)))).col(0));
        const ExactMatrix k = kernel_basis(m);
        REQUIRE(rank(m) + k.cols() == c);
        REQUIRE(m * k == ExactMatrix(r, k.cols()));
        REQUIRE(rank(to_numeric(m)) == rank(m));
    }
}

TEST_CASE("restriction to an invariant subspace") {
    const ExactMatrix a = exact({{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"sqrt(2)-1", "1", "0", "1"}});
    const ExactMatrix b = exact({{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"1", "0", "0", "1"}});
    const ExactMatrix basis = ExactMatrix::from_columns({exact_vec({"1", "1", "0", "0"}), exact_vec({"0", "0", "0", "1"})}, 4);
    CHECK(restrict_to(a, basis) == exact({{"1", "0"}, {"sqrt(2)", "1"}}));
    CHECK(restrict_to(b, basis) == exact({{"1", "0"}, {"1", "1"}}));
    CHECK(restrict_to(ExactMatrix::identity(4), basis) == ExactMatrix::identity(2));
    CHECK(restrict_to(a * b, basis) == restrict_to(a, basis) * restrict_to(b, basis));

    const ExactMatrix bad = ExactMatrix::from_columns({exact_vec({"1", "0", "0", "0"})}, 4);
    CHECK_THROWS_AS(restrict_to(a, bad), NotInvariant);
    const NumericMatrix numeric = restrict_to(to_numeric(a), to_numeric(basis));
    CHECK((numeric(1, 0) - s("sqrt(2)").evaluate(128)).abs_double() < 1e-25);
    CHECK_THROWS_AS(restrict_to(to_numeric(a), to_numeric(bad)), NotInvariant);
}

TEST_CASE("sum and intersection") {
    const auto e1 = Subspace<Scalar>::from_basis(ExactMatrix::column(exact_vec({"1", "0"})));
    const auto e2 = Subspace<Scalar>::from_basis(ExactMatrix::column(exact_vec({"0", "1"})));
    const auto si = sum_intersection(e1, e2);
    CHECK(si.sum.dim() == 2);
    CHECK(si.intersection.dim() == 0);

    const auto h1 = kernel(exact({{"1", "0", "0", "0"}}));
    const auto h2 = kernel(exact({{"0", "1", "0", "0"}}));
    CHECK(sum_intersection(h1, h2).intersection.dim() == 2);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dim(0, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = Subspace<Scalar>::span(random_rational_matrix(rng, 6, dim(rng), 1));
        const auto v = Subspace<Scalar>::span(random_rational_matrix(rng, 6, dim(rng), 1));
        const auto r = sum_intersection(u, v);
        // Oracle: dim(U+V) is the rank of the stacked bases.
        REQUIRE(r.sum.dim() == rank(u.basis().hconcat(v.basis())));
        REQUIRE(r.sum.dim() + r.intersection.dim() == u.dim() + v.dim());
        REQUIRE(u.contains(r.intersection));
        REQUIRE(v.contains(r.intersection));
    }
}

TEST_CASE("inverse, determinant and basis change") {
    const ExactMatrix m = exact({{"1", "sqrt(2)"}, {"i", "3"}});
    const ExactMatrix inv = inverse(m);
    CHECK(m * inv == ExactMatrix::identity(2));
    CHECK(determinant(m) == s("3-i*sqrt(2)"));
    CHECK_THROWS_AS(inverse(exact({{"1", "2"}, {"2", "4"}})), NotInvertible);
    const BasisChange<Scalar> p(m);
    CHECK(p.conjugate(ExactMatrix::identity(2)) == ExactMatrix::identity(2));
    const Complex d = determinant(to_numeric(m));
    CHECK((d - s("3-i*sqrt(2)").evaluate(128)).abs_double() < 1e-25);
}

TEST_CASE("realified basis and S-form test") {
    const ExactMatrix w = ExactMatrix::column(exact_vec({"1", "i"}));
    const ExactMatrix real = realify_basis(w.hconcat(w.conj()));
    CHECK(real.cols() == 2);
    CHECK(rank(real) == 2);
    CHECK(is_s_form(exact({{"2", "0"}, {"5", "2"}})));
    CHECK_FALSE(is_s_form(exact({{"2", "1"}, {"0", "2"}})));
    CHECK_FALSE(is_s_form(exact({{"2", "0"}, {"0", "3"}})));
}
