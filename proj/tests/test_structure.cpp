#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abdyn/errors.hpp"
#include "abdyn/structure.hpp"
#include "family_support.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace abdyn;
using abdyn::testing::exact;
using abdyn::testing::invariant_under;
using abdyn::testing::random_s_form_family;
using abdyn::testing::exact_vec;
using abdyn::testing::random_rational_matrix;
using abdyn::testing::s;

namespace {

ExactMatrix shear3_a() { return exact({{"1", "0", "0"}, {"0", "1", "0"}, {"1", "0", "1"}}); }
ExactMatrix shear3_b() { return exact({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "1", "1"}}); }

ExactMatrix radical_a() {
    return exact({{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"sqrt(2)-1", "1", "0", "1"}});
}
ExactMatrix radical_b() {
    return exact({{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"1", "0", "0", "1"}});
}

GeneratorSet shear3() { return GeneratorSet::create(Field::Real, {shear3_a(), shear3_b()}, {"A", "B"}); }
GeneratorSet radical() { return GeneratorSet::create(Field::Real, {radical_a(), radical_b()}, {"A", "B"}); }

ExactMatrix scaled_identity(std::size_t n, const char* value) {
    ExactMatrix m = ExactMatrix::identity(n);
    m *= s(value);
    return m;
}

}  // namespace

TEST_CASE("generator set validation") {
    CHECK_NOTHROW(shear3());
    CHECK_THROWS_AS(GeneratorSet::create(Field::Real, {exact({{"1", "0"}, {"0", "0"}})}), NotInvertible);
    CHECK_THROWS_AS(GeneratorSet::create(Field::Real, {exact({{"i", "0"}, {"0", "1"}})}), NonRealInput);
    CHECK_NOTHROW(GeneratorSet::create(Field::Complex, {exact({{"i", "0"}, {"0", "1"}})}));
    CHECK_THROWS_AS(GeneratorSet::create(Field::Real, {exact({{"1", "1"}, {"0", "1"}}), exact({{"1", "0"}, {"1", "1"}})}),
                    NotAbelian);
    CHECK_THROWS_AS(GeneratorSet::create(Field::Real, {ExactMatrix::identity(2), ExactMatrix::identity(3)}),
                    DimensionMismatch);

    const auto g = shear3();
    CHECK(g.names() == std::vector<std::string>{"A", "B"});
    const ExactMatrix w = g.word({2, -3});
    CHECK(w == shear3_a() * shear3_a() * g.inverses()[1] * g.inverses()[1] * g.inverses()[1]);
}

TEST_CASE("F-family of the shear examples") {
    const auto f61 = f_family({shear3_a(), shear3_b()});
    CHECK(f61.rank == 1);
    CHECK(f61.vectors.size() == 4);
    CHECK(f61.span.same_as(Subspace<Scalar>::from_basis(ExactMatrix::column(exact_vec({"0", "0", "1"})))));
    CHECK(f61.chosen_index == std::vector<std::size_t>{0});

    const auto f64 = f_family({radical_a(), radical_b()});
    CHECK(f64.rank == 1);
    CHECK(f64.span.same_as(Subspace<Scalar>::from_basis(ExactMatrix::column(exact_vec({"0", "0", "0", "1"})))));
    for (const auto& v : f64.vectors) CHECK(v.front().is_zero());

    const auto homothety = f_family({scaled_identity(3, "2")});
    CHECK(homothety.rank == 0);
    CHECK(homothety.span.dim() == 0);

    CHECK_THROWS_AS(f_family({exact({{"1", "1"}, {"0", "1"}})}), NotSForm);
    CHECK_THROWS_AS(f_family({exact({{"1", "0"}, {"0", "2"}})}), NotSForm);
}

TEST_CASE("H_u") {
    const auto h64 = h_u({radical_a(), radical_b()}, exact_vec({"1", "1", "0", "0"}));
    CHECK(h64.dim() == 2);
    CHECK(h64.same_as(Subspace<Scalar>::from_basis(exact({{"1", "0"}, {"1", "0"}, {"0", "0"}, {"0", "1"}}))));
    CHECK(invariant_under(radical_a(), h64.basis()));
    CHECK(invariant_under(radical_b(), h64.basis()));

    const auto h61 = h_u({shear3_a(), shear3_b()}, exact_vec({"1", "1", "0"}));
    CHECK(h61.same_as(Subspace<Scalar>::from_basis(exact({{"1", "0"}, {"1", "0"}, {"0", "1"}}))));

    const auto hom = h_u({scaled_identity(2, "2")}, exact_vec({"3", "-1"}));
    CHECK(hom.dim() == 1);
    CHECK(hom.contains(exact_vec({"3", "-1"})));
}

TEST_CASE("F-family closure under words") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> e(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        const auto gens = random_s_form_family(rng, n, trial % 2 == 0);
        const auto f = f_family(gens);
        const auto group = GeneratorSet::create(Field::Real, gens);
        const ExactMatrix w = group.word({e(rng), e(rng)});
        const Scalar mu = w(0, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::vector<Scalar> v = w.col(i);
            v[i] -= mu;
            CHECK(f.span.contains(v));
        }
    }
}

TEST_CASE("projected F-family rank: rank(F) = n-1 implies rank(F1) = n-2") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    while (checked < 50) {
        std::uniform_int_distribution<int> dim(2, 6);
        const std::size_t n = static_cast<std::size_t>(dim(rng));
        const auto gens = random_s_form_family(rng, n, true);
        const auto f = f_family(gens);
        if (f.rank != n - 1) continue;
        ++checked;
        CHECK(projected_f_family(gens).rank == n - 2);
    }
}

TEST_CASE("invariant family: 3-dimensional shear") {
    const auto fam = invariant_family(shear3());
    REQUIRE(fam.is_exact());
    REQUIRE(fam.r() == 1);
    const auto& h = fam.subspaces[0];
    CHECK(h.tag == CaseTag::RealHyperplane);
    REQUIRE(h.exact);
    CHECK(h.exact->same_as(Subspace<Scalar>::from_basis(exact({{"0", "0"}, {"1", "0"}, {"0", "1"}}))));
    CHECK(invariant_under(shear3_a(), h.exact->basis()));
    CHECK(invariant_under(shear3_b(), h.exact->basis()));
    CHECK(*fam.exact_q * *fam.exact_p == *fam.forms[0].exact_adapted_basis);

    CHECK(membership(fam, exact_vec({"1", "1", "0"})).in_u());
    CHECK(membership(fam, exact_vec({"0", "5", "2"})).containing == std::vector<std::size_t>{0});
    CHECK(membership(fam, exact_vec({"0", "0", "0"})).containing == std::vector<std::size_t>{0});
    CHECK(membership(fam, to_numeric(exact_vec({"1", "sqrt(2)", "0"}))).in_u());
}

TEST_CASE("invariant family: diagonal and rotation") {
    const auto diag = GeneratorSet::create(Field::Real, {exact({{"2", "0"}, {"0", "3"}})});
    const auto fam = invariant_family(diag);
    REQUIRE(fam.r() == 2);
    std::vector<bool> found(2, false);
    for (const auto& h : fam.subspaces) {
        CHECK(h.dim() == 1);
        if (h.exact->contains(exact_vec({"0", "1"}))) found[0] = true;
        if (h.exact->contains(exact_vec({"1", "0"}))) found[1] = true;
    }
    CHECK(found[0]);
    CHECK(found[1]);
    CHECK(membership(fam, exact_vec({"1", "-1"})).in_u());
    CHECK(membership(fam, exact_vec({"0", "0"})).containing.size() == 2);

    const auto rot = GeneratorSet::create(Field::Real, {exact({{"1/2", "-sqrt(3)/2"}, {"sqrt(3)/2", "1/2"}})});
    const auto rf = invariant_family(rot);
    REQUIRE(rf.r() == 1);
    CHECK(rf.subspaces[0].tag == CaseTag::RealConjugatePair);
    CHECK(rf.subspaces[0].dim() == 0);
    CHECK(membership(rf, exact_vec({"1", "0"})).in_u());
    CHECK_FALSE(membership(rf, exact_vec({"0", "0"})).in_u());

    // The same rotation over C splits into two complex lines.
    const auto rot_c = GeneratorSet::create(Field::Complex, rot.generators());
    const auto cf = invariant_family(rot_c);
    CHECK(cf.r() == 2);
    for (const auto& h : cf.subspaces) {
        CHECK(h.tag == CaseTag::ComplexHyperplane);
        CHECK(h.dim() == 1);
    }
}

TEST_CASE("invariant family: rotation block plus a real eigenvalue") {
    // rot(pi/3) on the first plane, 2 on the third axis.
    const auto g = GeneratorSet::create(
        Field::Real, {exact({{"1/2", "-sqrt(3)/2", "0"}, {"sqrt(3)/2", "1/2", "0"}, {"0", "0", "2"}})});
    const auto fam = invariant_family(g);
    REQUIRE(fam.r() == 2);
    std::size_t pairs = 0;
    for (const auto& h : fam.subspaces) {
        if (h.tag == CaseTag::RealConjugatePair) {
            ++pairs;
            CHECK(h.dim() == 1);
            CHECK(h.exact->contains(exact_vec({"0", "0", "1"})));
        } else {
            CHECK(h.dim() == 2);
            CHECK(h.exact->contains(exact_vec({"1", "0", "0"})));
            CHECK(h.exact->contains(exact_vec({"0", "1", "0"})));
        }
    }
    CHECK(pairs == 1);
}

TEST_CASE("invariant family: n = 1") {
    const auto g = GeneratorSet::create(Field::Complex, {exact({{"3+4*i"}})});
    const auto fam = invariant_family(g);
    REQUIRE(fam.r() == 1);
    CHECK(fam.subspaces[0].dim() == 0);
    CHECK(membership(fam, exact_vec({"2"})).in_u());
    CHECK_FALSE(membership(fam, exact_vec({"0"})).in_u());
}

TEST_CASE("invariant family: random commuting families") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_int_distribution<int> dim(1, 5);
        const std::size_t n = static_cast<std::size_t>(dim(rng));
        ExactMatrix base = random_rational_matrix(rng, n, n, 3);
        for (std::size_t i = 0; i < n; ++i) base(i, i) += Scalar(7L);  // keep it invertible
        if (determinant(base).is_zero()) continue;
        const ExactMatrix second = base * base + base * Scalar(-2L) + ExactMatrix::identity(n) * Scalar(3L);
        if (determinant(second).is_zero()) continue;
        const auto g = GeneratorSet::create(trial % 2 ? Field::Real : Field::Complex, {base, second});
        const auto fam = invariant_family(g);
        CHECK(fam.r() >= 1);
        CHECK(fam.r() <= n);
        for (const auto& h : fam.subspaces) {
            CHECK((h.dim() + 1 == n || h.dim() + 2 == n));
            for (const auto& gen : g.generators()) {
                if (h.exact) {
                    CHECK(invariant_under(gen, h.exact->basis()));
                } else {
                    CHECK(invariant_under(to_numeric(gen), h.numeric.basis()));
                }
            }
        }
    }
}

TEST_CASE("bounded restriction witness: radical shear") {
    const auto g = radical();
    const auto u = exact_vec({"1", "1", "0", "0"});
    // Words A^k B^s with k sqrt2 + s approaching sqrt3, keeping only improvements.
    std::vector<std::vector<long>> words;
    double best = 1e9;
    for (long k = 1; k <= 20000; ++k) {
        const long sft = std::lround(std::sqrt(3.0) - k * std::sqrt(2.0));
        const double err = std::abs(k * std::sqrt(2.0) + sft - std::sqrt(3.0));
        if (err < best) {
            best = err;
            words.push_back({k, sft});
        }
    }
    REQUIRE(best < 1e-4);

    const auto w = bounded_restriction_witness(g, u, words);
    CHECK(w.h.same_as(Subspace<Scalar>::from_basis(exact({{"1", "0"}, {"1", "0"}, {"0", "0"}, {"0", "1"}}))));
    CHECK(w.basis.col(0) == u);
    CHECK(w.cases.front() == WitnessCase::HuRecursion);
    CHECK(w.report.full_entry_sup > 1e3);
    CHECK(w.report.restricted_norm_sup < 1 + std::sqrt(3.0) + 0.5);
    const auto& last = w.restricted.back();
    CHECK(last(0, 0) == Scalar(1L));
    CHECK(last(0, 1).is_zero());
    CHECK(std::abs(last(1, 0).to_complex().real() - std::sqrt(3.0)) < 1e-4);

    // Diverging sequence: images are not Cauchy.
    std::vector<std::vector<long>> diverging;
    for (long k = 1; k <= 8; ++k) diverging.push_back({k * 10, 0});
    CHECK_THROWS_AS(bounded_restriction_witness(g, u, diverging), NotConvergent);
    CHECK_THROWS_AS(bounded_restriction_witness(g, exact_vec({"0", "1", "0", "0"}), words), FirstCoordinateZero);
}

TEST_CASE("bounded restriction witness: trivial sequences") {
    const auto g = shear3();
    const std::vector<std::vector<long>> constant(5, std::vector<long>{0, 0});
    const auto w = bounded_restriction_witness(g, exact_vec({"1", "0", "0"}), constant);
    CHECK(w.h.dim() >= 1);
    CHECK(w.report.restricted_norm_sup == doctest::Approx(1.0));
    CHECK(w.report.tail_diameter == 0.0);

    std::vector<ExactMatrix> homotheties;
    for (long m = 1; m <= 40; ++m) homotheties.push_back(scaled_identity(2, "1") * Scalar(mpq_class(m + 1, m)));
    const auto hw = bounded_restriction_witness({scaled_identity(2, "2")}, exact_vec({"1", "0"}), homotheties,
                                                WitnessOptions{0.1, 0.25});
    CHECK(hw.h.dim() == 2);
    CHECK(hw.cases.front() == WitnessCase::Homothety);
    CHECK(hw.report.restricted_norm_sup <= 2.0);
}

TEST_CASE("bounded restriction witness: smaller leading subspace") {
    // The 3-dimensional shear group extended by a trivial fourth coordinate: its leading
    // 3x3 witness at (1, 1, 0) is the plane span{(1,1,0), e3}, smaller than K^3.
    auto extend = [](const ExactMatrix& m) {
        ExactMatrix out = ExactMatrix::identity(4);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) out(i, j) = m(i, j);
        return out;
    };
    const auto g = GeneratorSet::create(Field::Real, {extend(shear3_a()), extend(shear3_b())});
    const auto u = exact_vec({"1", "1", "0", "0"});
    const auto w = bounded_restriction_witness(g, u, {{0, 0}, {1, -1}, {1, -1}});
    REQUIRE(!w.cases.empty());
    CHECK(w.cases.front() == WitnessCase::SmallerLeadingSubspace);
    CHECK(w.basis.col(0) == u);
    for (const auto& gen : g.generators()) CHECK(invariant_under(gen, w.basis));
    CHECK(w.h.dim() < 4);
    for (const auto& r : w.restricted) CHECK(is_s_form(r));
}

TEST_CASE("invariant tree") {
    const auto t61 = invariant_tree(shear3());
    CHECK(t61.depth <= 3);
    CHECK(t61.depth >= 2);
    CHECK(t61.nodes[0].dim() == 3);
    for (const auto& node : t61.nodes)
        for (auto c : node.children) CHECK(t61.nodes[c].dim() < node.dim());

    const auto hom = invariant_tree(GeneratorSet::create(Field::Real, {scaled_identity(2, "2")}));
    CHECK(hom.depth == 2);

    const auto one = invariant_tree(GeneratorSet::create(Field::Real, {exact({{"5"}})}));
    CHECK(one.depth == 1);
    CHECK(one.nodes.size() == 2);

    // Coordinate subspaces of a diagonal group are shared between parents.
    const auto diag = invariant_tree(GeneratorSet::create(Field::Real, {exact({{"2", "0", "0"}, {"0", "3", "0"}, {"0", "0", "5"}})}));
    CHECK(diag.depth == 3);
    CHECK(diag.nodes.size() == 8);

    const auto capped = invariant_tree(shear3(), std::size_t{1});
    CHECK(capped.depth == 1);
}
