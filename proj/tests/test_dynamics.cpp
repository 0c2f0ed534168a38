#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abdyn/dynamics.hpp"
#include "abdyn/errors.hpp"
#include "abdyn/fixtures.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace abdyn;
using abdyn::testing::exact;
using abdyn::testing::exact_vec;
using abdyn::testing::s;

namespace {

OrbitOptions windowed(double w = 1.0) {
    OrbitOptions o;
    o.window = w;
    return o;
}

ClosureVerdict classify_at(const GeneratorSet& g, const std::vector<Scalar>& u, long bound) {
    return classify_closure(enumerate_orbit(g, u, bound, windowed()));
}

// Steps k sqrt2 + s -> sqrt3 used for the convergent sequence of the radical shear group.
std::vector<std::vector<long>> sqrt3_words(long bound) {
    const auto approx = approximate_target({s("sqrt(2)"), s("1")}, s("sqrt(3)"), bound);
    std::vector<std::vector<long>> words;
    for (const auto& step : approx.steps) words.push_back(step.exponents);
    return words;
}

GeneratorSet diagonal(const std::vector<const char*>& d) {
    ExactMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = s(d[i]);
    return GeneratorSet::create(Field::Real, {m});
}

}  // namespace

TEST_CASE("shear_3d orbit at small bounds") {
    const auto g = fixtures::shear_3d();
    const auto u = exact_vec({"1", "1", "0"});

    const auto zero = enumerate_orbit(g, u, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero.enumerated == 1);
    const auto p = zero.point(0);
    CHECK(std::abs(p[0] - 1.0) < 1e-15);
    CHECK(std::abs(p[1] - 1.0) < 1e-15);
    CHECK(std::abs(p[2]) < 1e-15);

    const auto cloud = enumerate_orbit(g, u, 3);
    CHECK(cloud.enumerated == 49);
    CHECK(cloud.hull_dim == 1);
    REQUIRE(cloud.size() == 13);
    std::set<long> last;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        const auto x = cloud.point(j);
        CHECK(std::abs(x[0] - 1.0) < 1e-12);
        CHECK(std::abs(x[1] - 1.0) < 1e-12);
        last.insert(std::lround(x[2].real()));
        CHECK(std::abs(x[2].real() - std::round(x[2].real())) < 1e-12);
    }
    std::set<long> expected;
    for (long v = -6; v <= 6; ++v) expected.insert(v);
    CHECK(last == expected);
}

TEST_CASE("shear_4d orbit keeps the first three coordinates") {
    const auto g = fixtures::shear_4d();
    const auto u = exact_vec({"1", "1", "5", "1/2"});
    const auto cloud = enumerate_orbit(g, u, 2);
    REQUIRE(cloud.size() == 9);
    std::set<long> shifts;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        const auto x = cloud.point(j);
        CHECK(std::abs(x[0] - 1.0) < 1e-12);
        CHECK(std::abs(x[1] - 1.0) < 1e-12);
        CHECK(std::abs(x[2] - 5.0) < 1e-12);
        const double shift = x[3].real() - 0.5;
        CHECK(std::abs(shift - std::round(shift)) < 1e-12);
        shifts.insert(std::lround(shift));
    }
    CHECK(shifts == std::set<long>{-4, -3, -2, -1, 0, 1, 2, 3, 4});
}

TEST_CASE("exact orbit points follow the group law and appear in the cloud") {
    const auto g = fixtures::complex_shear_5d();
    const auto u = fixtures::complex_shear_dense_point();
    const long bound = 5;
    const auto cloud = enumerate_orbit(g, u, bound);
    CHECK(cloud.hull_dim == 2);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> e(-bound, bound);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<long> a(3), b(3), ab(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = e(rng);
            b[i] = e(rng);
            ab[i] = a[i] + b[i];
        }
        CHECK(orbit_point(g, u, ab) == g.word(a).apply(orbit_point(g, u, b)));

        const auto x = orbit_point(g, u, a);
        std::vector<std::complex<double>> xc;
        for (const auto& c : x) xc.push_back(c.to_complex());
        const auto h = cloud.hull_coordinates(xc);
        double best = 1e300;
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            double dist = 0;
            for (std::size_t k = 0; k < cloud.hull_dim; ++k)
                dist = std::max(dist, std::abs(cloud.coords[j * cloud.hull_dim + k] - h[k]));
            best = std::min(best, dist);
        }
        CHECK(best < 1e-9);
    }
    CHECK_THROWS_AS(orbit_point(g, exact_vec({"1", "2"}), {0, 0, 0}), DimensionMismatch);
    CHECK_THROWS_AS(enumerate_orbit(g, u, -1), DomainError);
}

TEST_CASE("hull dimensions") {
    CHECK(enumerate_orbit(fixtures::shear_3d(), exact_vec({"1", "sqrt(2)", "0"}), 1).hull_dim == 1);
    CHECK(enumerate_orbit(fixtures::shear_4d(), exact_vec({"1", "2", "3", "4"}), 1).hull_dim == 1);
    CHECK(enumerate_orbit(fixtures::radical_shear_4d(), exact_vec({"1", "1", "0", "0"}), 1).hull_dim == 1);
    CHECK(enumerate_orbit(fixtures::rotation_pi_3(), exact_vec({"1", "0"}), 1).hull_dim == 2);
    CHECK(enumerate_orbit(fixtures::shear_3d(), exact_vec({"0", "0", "7"}), 4).hull_dim == 0);
    const auto fixed = classify_closure(enumerate_orbit(fixtures::shear_3d(), exact_vec({"0", "0", "7"}), 4));
    CHECK(fixed.kind == ClosureKind::Discrete);
    CHECK(fixed.dimension == 0);
}

TEST_CASE("shear_3d closure verdicts") {
    const auto g = fixtures::shear_3d();
    const auto rational = classify_at(g, exact_vec({"1", "1", "0"}), 100);
    CHECK(rational.kind == ClosureKind::Discrete);
    CHECK(rational.min_distance == doctest::Approx(1.0).epsilon(1e-9));

    const auto dense = classify_at(g, exact_vec({"1", "sqrt(2)", "0"}), 1000);
    CHECK(dense.kind == ClosureKind::DenseInAffine);
    CHECK(dense.dimension == 1);
    CHECK(dense.gap < 0.01);

    // Oracle: sort n + m sqrt2 restricted to [-1, 1] (the hull coordinate is the last
    // coordinate up to sign) and include the window edges.
    const long double r2 = std::sqrt(2.0L);
    std::vector<long double> vals;
    for (long n = -1000; n <= 1000; ++n)
        for (long m = -1000; m <= 1000; ++m) {
            const long double v = n + m * r2;
            if (std::abs(v) <= 1) vals.push_back(v);
        }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(), [](long double a, long double b) { return b - a < 1e-12L; }),
               vals.end());
    long double gap = std::max(vals.front() + 1, 1 - vals.back());
    for (std::size_t i = 1; i < vals.size(); ++i) gap = std::max(gap, vals[i] - vals[i - 1]);
    CHECK(dense.window_points == vals.size());
    CHECK(dense.gap == doctest::Approx(static_cast<double>(gap)).epsilon(1e-9));
}

TEST_CASE("complex_shear_5d closure verdicts") {
    const auto g = fixtures::complex_shear_5d();
    const auto dense = classify_at(g, fixtures::complex_shear_dense_point(), 200);
    CHECK(dense.kind == ClosureKind::DenseInAffine);
    CHECK(dense.dimension == 2);
    CHECK(dense.gap < 0.15);

    const auto rational = classify_at(g, exact_vec({"1+i", "1/2+2*i", "-3+i/3", "i", "0"}), 60);
    CHECK(rational.kind == ClosureKind::Discrete);
    CHECK(rational.dimension == 2);
}

TEST_CASE("finite, hyperbolic and high-dimensional clouds") {
    const auto rot = classify_at(fixtures::rotation_pi_3(), exact_vec({"1", "0"}), 20);
    CHECK(rot.kind == ClosureKind::Discrete);

    const auto hyper = enumerate_orbit(diagonal({"2", "3"}), exact_vec({"1", "1"}), 400, windowed());
    CHECK(hyper.clipped);
    CHECK(classify_closure(hyper).kind == ClosureKind::Discrete);

    // Shears from x1 into four coordinates give a 4-dimensional hull, beyond the
    // covering-radius heuristic.
    std::vector<ExactMatrix> gens;
    for (std::size_t row = 2; row < 6; ++row) {
        ExactMatrix m = ExactMatrix::identity(6);
        m(row, 0) = Scalar(1);
        gens.push_back(m);
    }
    const auto g = GeneratorSet::create(Field::Real, gens);
    const auto high = classify_at(g, exact_vec({"1", "0", "0", "0", "0", "0"}), 2);
    CHECK(high.dimension == 4);
    CHECK(high.kind == ClosureKind::Inconclusive);
}

TEST_CASE("verdict is constant along an orbit") {
    const auto g = fixtures::shear_3d();
    const auto u = exact_vec({"1", "sqrt(2)", "0"});
    const auto v = orbit_point(g, u, {3, -7});
    CHECK(classify_at(g, u, 1000).same_kind(classify_at(g, v, 1000)));
    const auto w = exact_vec({"1", "1", "0"});
    CHECK(classify_at(g, w, 100).same_kind(classify_at(g, orbit_point(g, w, {-4, 9}), 100)));
}

TEST_CASE("explore_orbit stops once verdicts repeat") {
    const auto g = fixtures::shear_3d();
    const auto dense = explore_orbit(g, exact_vec({"1", "sqrt(2)", "0"}), 4096, windowed());
    CHECK(dense.stabilized);
    CHECK(dense.verdict.kind == ClosureKind::DenseInAffine);
    CHECK(dense.verdict.dimension == 1);
    CHECK(dense.bound < 4096);
    REQUIRE(dense.history.size() >= 3);
    for (std::size_t i = dense.history.size() - 3; i < dense.history.size(); ++i)
        CHECK(dense.history[i].second.same_kind(dense.verdict));

    const auto discrete = explore_orbit(g, exact_vec({"1", "1", "0"}), 4096, windowed());
    CHECK(discrete.stabilized);
    CHECK(discrete.verdict.kind == ClosureKind::Discrete);

    const auto capped = explore_orbit(g, exact_vec({"1", "sqrt(2)", "0"}), 2, windowed());
    CHECK_FALSE(capped.stabilized);
    CHECK(capped.bound == 2);
}

TEST_CASE("approximate_target") {
    SUBCASE("sqrt3 from sqrt2 and 1") {
        const auto approx = approximate_target({s("sqrt(2)"), s("1")}, s("sqrt(3)"), 10000);
        REQUIRE(!approx.steps.empty());
        CHECK(approx.steps.back().residual < 1e-4);
        for (std::size_t i = 1; i < approx.steps.size(); ++i)
            CHECK(approx.steps[i].residual < approx.steps[i - 1].residual);
        const long double r2 = std::sqrt(2.0L), r3 = std::sqrt(3.0L);
        for (const auto& st : approx.steps) {
            const long double residual = std::abs(st.exponents[0] * r2 + st.exponents[1] - r3);
            CHECK(st.residual == doctest::Approx(static_cast<double>(residual)).epsilon(1e-9));
        }
    }
    SUBCASE("agrees with exhaustive search on a small box") {
        const long bound = 200;
        const auto approx = approximate_target({s("sqrt(2)"), s("1")}, s("sqrt(3)"), bound);
        const long double r2 = std::sqrt(2.0L), r3 = std::sqrt(3.0L);
        long double best = 1e30L;
        for (long k = -bound; k <= bound; ++k)
            for (long m = -bound; m <= bound; ++m) best = std::min(best, std::abs(k * r2 + m - r3));
        CHECK(approx.steps.back().residual == doctest::Approx(static_cast<double>(best)).epsilon(1e-9));
    }
    SUBCASE("exact hit") {
        const auto approx = approximate_target({s("1")}, s("1"), 10);
        REQUIRE(!approx.steps.empty());
        CHECK(approx.steps.back().exponents == std::vector<long>{1});
        CHECK(approx.steps.back().residual == 0.0);
        CHECK_FALSE(approx.stalled);
    }
    SUBCASE("closed subgroup stalls") {
        const auto approx = approximate_target({s("1"), s("2")}, s("sqrt(2)"), 100);
        REQUIRE(!approx.steps.empty());
        CHECK(approx.steps.back().residual == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-12));
        CHECK(approx.stalled);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(approximate_target({s("0"), s("0")}, s("1"), 10), NoProgress);
        CHECK_THROWS_AS(approximate_target({s("i")}, s("1"), 10), NonRealInput);
    }
}

TEST_CASE("property P along the sqrt3 sequence") {
    const auto g = fixtures::radical_shear_4d();
    const auto family = invariant_family(g);
    const auto u = exact_vec({"1", "1", "0", "0"});
    const auto v = exact_vec({"1", "1", "0", "sqrt(3)"});
    const auto words = sqrt3_words(10000);
    // The sequence lists record improvements only, so its tail is its last quarter.
    PropertyOptions opts;
    opts.tail_fraction = 0.25;
    const auto report = property_p_check(g, family, u, v, words, opts);
    REQUIRE(report.inverse_errors.size() == words.size());
    const long double r2 = std::sqrt(2.0L), r3 = std::sqrt(3.0L);
    for (std::size_t m = 0; m < words.size(); ++m) {
        const long double expected = std::abs(r3 - (words[m][0] * r2 + words[m][1]));
        CHECK(report.inverse_errors[m] == doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
        CHECK(report.forward_errors[m] == doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
    }
    CHECK(report.tail_max_inverse < 1e-3);
    CHECK(report.tends_to_zero);
}

TEST_CASE("property P on trivial sequences") {
    const auto g = fixtures::radical_shear_4d();
    const auto family = invariant_family(g);
    const auto u = exact_vec({"1", "1", "0", "0"});
    const auto constant = property_p_check(g, family, u, u, std::vector<std::vector<long>>(10, {0, 0}));
    CHECK(constant.tail_max_inverse == 0.0);
    CHECK(constant.tends_to_zero);

    ExactMatrix two = ExactMatrix::identity(2);
    two *= Scalar(2);
    const auto homothety = GeneratorSet::create(Field::Real, {two});
    const auto hfam = invariant_family(homothety);
    const auto w = exact_vec({"1", "1"});
    std::vector<ExactMatrix> seq;
    for (long m = 1; m <= 4000; ++m) {
        ExactMatrix b = ExactMatrix::identity(2);
        b *= Scalar(mpq_class(m + 1, m));
        seq.push_back(b);
    }
    const auto rep = property_p_check(hfam, w, w, seq);
    CHECK(rep.inverse_errors.front() == doctest::Approx(0.5));
    CHECK(rep.inverse_errors.back() == doctest::Approx(1.0 / 4001));
    CHECK(rep.monotone_tail);
    CHECK(rep.tends_to_zero);
}

TEST_CASE("property P rejects points outside U") {
    const auto g = fixtures::radical_shear_4d();
    const auto family = invariant_family(g);
    const auto outside = exact_vec({"0", "1", "0", "0"});
    REQUIRE_FALSE(membership(family, outside).in_u());
    CHECK_THROWS_AS(property_p_check(g, family, outside, exact_vec({"1", "1", "0", "0"}), {{0, 0}}), PointNotInU);
}

TEST_CASE("density propagation") {
    SUBCASE("skipped without a dense verdict") {
        const auto g = fixtures::shear_3d();
        const auto verdict = classify_at(g, exact_vec({"1", "1", "0"}), 50);
        const auto report = density_propagation_check(g, invariant_family(g), verdict);
        CHECK(report.skipped);
        CHECK_FALSE(report.reason.empty());
    }
    SUBCASE("dense line orbit in C") {
        const auto g = fixtures::dense_complex_line();
        const auto family = invariant_family(g);
        DensityOptions opts;
        const auto verdict = classify_at(g, exact_vec({"1"}), opts.bound);
        REQUIRE(verdict.kind == ClosureKind::DenseInAffine);
        REQUIRE(verdict.dimension == 2);
        const auto report = density_propagation_check(g, family, verdict, opts);
        CHECK_FALSE(report.skipped);
        CHECK(report.samples.size() == opts.samples);
        CHECK(report.failures.empty());
        for (const auto& sample : report.samples) CHECK(membership(family, sample.point).in_u());
    }
}
