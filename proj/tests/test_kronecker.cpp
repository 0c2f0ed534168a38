#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abdyn/errors.hpp"
#include "abdyn/kronecker.hpp"
#include "lattice_support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace abdyn;
using abdyn::testing::delta_zeros;
using abdyn::testing::nonzero_real;
using abdyn::testing::random_plane_instance;
using abdyn::testing::small_rational;
using abdyn::testing::zeros_in_dual_span;
using abdyn::testing::s;

namespace {

std::vector<mpz_class> ints(std::initializer_list<long> v) {
    std::vector<mpz_class> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("integer relations") {
    CHECK_FALSE(integer_relation(lattice_spec({{"1", "1"}, {"sqrt(3)", "sqrt(2)"}, {"sqrt(2)", "1"}})).has_value());
    CHECK(integer_relation(lattice_spec({{"1", "0"}, {"2", "0"}, {"0", "1"}})) == ints({2, -1, 0}));
    CHECK(integer_relation(lattice_spec({{"1"}, {"sqrt(2)"}, {"sqrt(8)"}})) == ints({0, 2, -1}));
    CHECK(integer_relations(lattice_spec({{"0"}, {"0"}})).size() == 2);
}

TEST_CASE("lattice spec validation") {
    CHECK_THROWS_AS(integer_relation(LatticeSpec{}), DomainError);
    CHECK_THROWS_AS(integer_relation(lattice_spec({{"1", "2"}, {"1"}})), DimensionMismatch);
    CHECK_THROWS_AS(dense_in(lattice_spec({{"i"}})), NonRealInput);
    CHECK_THROWS_AS(dense_in(lattice_spec({{"1", "0", "0", "0"}})), UnsupportedDimension);
}

TEST_CASE("dense_in on the line") {
    const auto dense = dense_in(lattice_spec({{"1"}, {"sqrt(2)"}}));
    CHECK(dense.kind == LatticeClosure::Dense);
    CHECK(dense.closure_dimension == 1);
    CHECK(dense.relations.empty());

    const auto closed = dense_in(lattice_spec({{"1"}, {"1"}}));
    CHECK(closed.kind == LatticeClosure::Closed);
    CHECK(closed.dual_relations == std::vector<std::vector<mpz_class>>{ints({1, 1})});
    CHECK(closed.relations == std::vector<std::vector<mpz_class>>{ints({1, -1})});

    CHECK(dense_in(lattice_spec({{"sqrt(2)"}, {"sqrt(8)"}, {"3*sqrt(2)/7"}})).kind == LatticeClosure::Closed);
    CHECK(dense_in(lattice_spec({{"0"}})).kind == LatticeClosure::Closed);
}

TEST_CASE("dense_in in the plane") {
    const auto dense = dense_in(lattice_spec({{"1", "1"}, {"sqrt(3)", "sqrt(2)"}, {"sqrt(2)", "1"}}));
    CHECK(dense.kind == LatticeClosure::Dense);
    CHECK(dense.real_rank == 2);
    CHECK(dense.dual_rank == 0);
    CHECK(dense.certificate_rank == 3);
    CHECK(dense.relations.empty());

    const auto rational = dense_in(lattice_spec({{"1", "1"}, {"1/2", "3"}, {"2", "-1"}}));
    CHECK(rational.kind == LatticeClosure::Closed);
    CHECK(rational.dual_rank == 2);

    // (Z + sqrt2 Z) x Z: dense in lines parallel to the first axis.
    const auto partial = dense_in(lattice_spec({{"1", "0"}, {"0", "1"}, {"sqrt(2)", "0"}}));
    CHECK(partial.kind == LatticeClosure::DenseInProperSubgroup);
    CHECK(partial.closure_dimension == 1);
    CHECK(partial.dual_relations == std::vector<std::vector<mpz_class>>{ints({0, 1, 0})});

    // A real first generator keeps the group dense.
    CHECK(dense_in(lattice_spec({{"1", "0"}, {"sqrt(3)", "sqrt(2)"}, {"sqrt(2)", "1"}})).kind == LatticeClosure::Dense);
    // Two generators never fill the plane densely.
    CHECK(dense_in(lattice_spec({{"1", "sqrt(2)"}, {"sqrt(3)", "1"}})).kind == LatticeClosure::Closed);
    CHECK(dense_in(lattice_spec({{"1", "1", "0"}, {"sqrt(2)", "0", "1"}, {"0", "0", "1"}, {"1", "0", "0"}})).kind ==
          LatticeClosure::DenseInProperSubgroup);
}

TEST_CASE("delta determinant matches the expanded form") {
    const auto spec = lattice_spec({{"1", "1"}, {"sqrt(3)", "sqrt(2)"}, {"sqrt(2)", "1"}});
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> e(-20, 20);
    for (int t = 0; t < 30; ++t) {
        const long s1 = e(rng), s2 = e(rng), s3 = e(rng);
        const Scalar expected = Scalar::sqrt(3) * Scalar(s1 - s3) + Scalar::sqrt(2) * Scalar(s3 + s2) - Scalar(s2 + 2 * s1);
        CHECK(delta_determinant(spec, {s1, s2, s3}) == expected);
    }
    CHECK_THROWS_AS(delta_determinant(lattice_spec({{"1", "1"}, {"1", "2"}}), {1, 2, 3}), DimensionMismatch);
}

TEST_CASE("determinant criterion agrees with brute-force search") {
    std::mt19937_64 rng(41);
    int dense_count = 0;
    for (int instance = 0; instance < 20; ++instance) {
        const auto spec = random_plane_instance(rng, instance % 3);
        const auto decision = dense_in(spec);

        const auto zeros = delta_zeros(spec, 50);

        CHECK_MESSAGE((decision.kind == LatticeClosure::Dense) == zeros.empty(), "instance " << instance);
        if (decision.kind == LatticeClosure::Dense) ++dense_count;
        CHECK(zeros_in_dual_span(decision, zeros));
    }
    CHECK(dense_count > 0);
    CHECK(dense_count < 20);
}

TEST_CASE("line decisions agree with sampled gaps") {
    std::mt19937_64 rng(9);
    for (int instance = 0; instance < 20; ++instance) {
        const Scalar a = nonzero_real(rng);
        const Scalar b = instance % 2 ? a * Scalar(small_rational(rng) + 5) : nonzero_real(rng);
        LatticeSpec spec{{{a}, {b}}};
        const auto decision = dense_in(spec);

        // Sample the window [-L, L] with L the larger generator, so the gap statistic
        // does not depend on the generator scale.
        const double x = a.to_complex().real(), y = b.to_complex().real();
        const double L = std::max(std::abs(x), std::abs(y));
        auto sample = [&](long box) {
            std::vector<double> vals;
            for (long m = -box; m <= box; ++m) {
                const double e1 = (-L - m * y) / x, e2 = (L - m * y) / x;
                const long lo = std::max(-box, static_cast<long>(std::ceil(std::min(e1, e2))));
                const long hi = std::min(box, static_cast<long>(std::floor(std::max(e1, e2))));
                for (long n = lo; n <= hi; ++n) {
                    const double v = n * x + m * y;
                    if (std::abs(v) <= L) vals.push_back(v);
                }
            }
            std::sort(vals.begin(), vals.end());
            double gap = 0, min_dist = 1e300;
            for (std::size_t i = 1; i < vals.size(); ++i) {
                const double g = vals[i] - vals[i - 1];
                gap = std::max(gap, g);
                if (g > 1e-9) min_dist = std::min(min_dist, g);
            }
            if (!vals.empty()) gap = std::max({gap, vals.front() + L, L - vals.back()});
            return std::pair{gap, min_dist};
        };
        const auto [gap, min_dist] = sample(1000);
        const double min_dist_small = sample(40).second;
        CHECK_MESSAGE((decision.kind == LatticeClosure::Dense) == (gap < 0.01 * L),
                      "instance " << instance << " " << a.to_string() << ", " << b.to_string() << " gap " << gap);
        const bool bounded_below = min_dist > 1e-6 && std::abs(min_dist - min_dist_small) <= 1e-9 * min_dist;
        CHECK_MESSAGE((decision.kind == LatticeClosure::Closed) == bounded_below, "instance " << instance);
    }
}
