#include "abdyn/verify.hpp"

#include "abdyn/errors.hpp"
#include "abdyn/fixtures.hpp"
#include "abdyn/kronecker.hpp"

#include <cmath>
#include <sstream>

namespace abdyn {

namespace {

ProblemInput from_group(const GeneratorSet& g, std::vector<std::vector<std::string>> points) {
    ProblemInput in;
    in.field = g.field();
    in.dimension = g.dimension();
    in.generators = g.generators();
    in.names = g.names();
    for (const auto& p : points) {
        std::vector<Scalar> v;
        for (const auto& e : p) v.push_back(parse_scalar(e));
        in.points.push_back(std::move(v));
    }
    return in;
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

// The orbit of u is u + L e_n for the group L = sum Z c_i when every (A_i - I) u is a
// multiple c_i of the last basis vector.
std::optional<std::vector<Scalar>> translation_increments(const GeneratorSet& g, const std::vector<Scalar>& u) {
    std::vector<Scalar> c;
    const std::size_t n = g.dimension();
    for (const auto& a : g.generators()) {
        auto image = a.apply(u);
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(image[i] - u[i]).is_zero()) return std::nullopt;
        c.push_back(image[n - 1] - u[n - 1]);
    }
    return c;
}

LatticeSpec lattice_of(Field field, const std::vector<Scalar>& c) {
    LatticeSpec spec;
    for (const auto& x : c) {
        if (field == Field::Real)
            spec.vectors.push_back({x});
        else
            spec.vectors.push_back({x.real_part(), x.imag_part()});
    }
    return spec;
}

struct Checker {
    std::vector<ClaimResult>& out;
    std::string example;

    void report(const std::string& claim, bool passed, const std::string& detail) {
        out.push_back({example, claim, passed, detail});
    }

    template <class F>
    void run(const std::string& claim, F&& f) {
        try {
            std::string detail;
            const bool ok = f(detail);
            report(claim, ok, detail);
        } catch (const std::exception& e) {
            report(claim, false, std::string("error: ") + e.what());
        }
    }
};

ClosureVerdict verdict_at(const GeneratorSet& g, const std::vector<Scalar>& u, long bound, const ReportConfig& cfg) {
    return classify_closure(enumerate_orbit(g, u, bound, cfg.orbit()), cfg.classify());
}

void shear_claims(std::vector<ClaimResult>& out, const std::string& name, const ProblemInput& in,
                  const VerifyOptions& opts) {
    Checker check{out, name};
    if (in.points.size() < 2) {
        check.report("fixture", false, "expected two points (closed, dense)");
        return;
    }
    const GeneratorSet g = in.group();
    const std::size_t line_dim = in.field == Field::Real ? 1 : 2;
    const long dense_bound = line_dim == 1 ? opts.line_bound : opts.plane_bound;

    check.run("closed orbit", [&](std::string& detail) {
        const auto& u = in.points[0];
        const auto c = translation_increments(g, u);
        if (!c) {
            detail = "orbit is not a translation along the last axis";
            return false;
        }
        const auto decision = dense_in(lattice_of(in.field, *c));
        const auto verdict = verdict_at(g, u, opts.discrete_bound, opts.config);
        detail = std::string("translation group ") + to_string(decision.kind) + ", orbit " + verdict.label() +
                 " at K = " + std::to_string(opts.discrete_bound);
        return decision.kind == LatticeClosure::Closed && verdict.kind == ClosureKind::Discrete;
    });

    check.run(line_dim == 1 ? "dense in a straight line" : "dense in a complex straight line", [&](std::string& detail) {
        const auto& u = in.points[1];
        const auto c = translation_increments(g, u);
        if (!c) {
            detail = "orbit is not a translation along the last axis";
            return false;
        }
        const auto decision = dense_in(lattice_of(in.field, *c));
        const auto verdict = verdict_at(g, u, dense_bound, opts.config);
        const double threshold = line_dim == 1 ? opts.config.gap_threshold : opts.config.covering_threshold;
        detail = std::string("translation group ") + to_string(decision.kind) + ", orbit " + verdict.label() +
                 " at K = " + std::to_string(dense_bound) + ", gap " + fmt(verdict.gap);
        return decision.kind == LatticeClosure::Dense && verdict.kind == ClosureKind::DenseInAffine &&
               verdict.dimension == line_dim && verdict.gap < threshold;
    });

    if (in.field == Field::Complex && g.size() == 3) {
        check.run("determinant criterion", [&](std::string& detail) {
            const auto c = translation_increments(g, in.points[1]);
            if (!c) {
                detail = "orbit is not a translation along the last axis";
                return false;
            }
            const auto spec = lattice_of(in.field, *c);
            const auto decision = dense_in(spec);
            const bool never_zero = decision.real_rank == 2 && decision.dual_rank == 0;
            detail = "Delta(s) = (" + delta_determinant(spec, {1, 0, 0}).to_string() + ") s1 + (" +
                     delta_determinant(spec, {0, 1, 0}).to_string() + ") s2 + (" +
                     delta_determinant(spec, {0, 0, 1}).to_string() + ") s3, " +
                     (never_zero ? "nonzero for every s != 0 (coefficient rank " +
                                       std::to_string(decision.certificate_rank) + ")"
                                 : "vanishes at s = " + (decision.dual_relations.empty()
                                                             ? std::string("any s")
                                                             : decision.dual_relations.front()[0].get_str() + "," +
                                                                   decision.dual_relations.front()[1].get_str() + "," +
                                                                   decision.dual_relations.front()[2].get_str()));
            return never_zero;
        });
    }
}

void radical_claims(std::vector<ClaimResult>& out, const ProblemInput& in, const VerifyOptions& opts) {
    Checker check{out, "radical-shear-4d"};
    if (in.points.size() < 2) {
        check.report("fixture", false, "expected points u and v");
        return;
    }
    const GeneratorSet g = in.group();
    const auto& u = in.points[0];
    const auto& v = in.points[1];
    const std::size_t n = g.dimension();

    // Shared setup: increments, target and the approximating sequence.
    std::optional<std::vector<Scalar>> c;
    Scalar t;
    bool along_last = true;
    for (std::size_t i = 0; i + 1 < n; ++i) along_last = along_last && (v[i] - u[i]).is_zero();
    std::vector<std::vector<long>> words;
    Approximation approx;
    std::string setup_error;
    try {
        c = translation_increments(g, u);
        t = v[n - 1] - u[n - 1];
        if (c && along_last) {
            approx = approximate_target(*c, t, opts.approximation_bound);
            for (const auto& st : approx.steps) words.push_back(st.exponents);
        }
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    auto setup_ok = [&](std::string& detail) {
        if (!setup_error.empty()) detail = "error: " + setup_error;
        else if (!c) detail = "orbit is not a translation along the last axis";
        else if (!along_last) detail = "v - u is not along the last axis";
        else if (words.empty()) detail = "no approximating sequence";
        else return true;
        return false;
    };

    check.run("v in closure of orbit, not in orbit", [&](std::string& detail) {
        if (!setup_ok(detail)) return false;
        const double residual = approx.steps.back().residual;
        std::vector<Scalar> values = *c;
        values.push_back(t);
        const auto cert = is_rationally_independent(values);
        detail = "best residual " + fmt(residual) + " at |k| <= " + std::to_string(opts.approximation_bound) + "; ";
        if (cert.independent) {
            detail += "increments and target are rationally independent (rank " + std::to_string(cert.rank) + ")";
        } else {
            detail += "no independence certificate: relation";
            for (const auto& r : cert.relation) detail += " " + r.get_str();
        }
        return residual < opts.approximation_tolerance && cert.independent;
    });

    check.run("unbounded sequence with B_m u -> v", [&](std::string& detail) {
        if (!setup_ok(detail)) return false;
        double max_entry = 0;
        for (const auto& w : words) {
            const auto b = g.word(w);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) max_entry = std::max(max_entry, b(i, j).magnitude());
        }
        const auto last = orbit_point(g, u, words.back());
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, (last[i] - v[i]).magnitude());
        detail = "max entry " + fmt(max_entry) + " over " + std::to_string(words.size()) + " terms, |B_m u - v| = " +
                 fmt(err);
        return max_entry > opts.unbounded_entry && err < opts.convergence_tolerance;
    });

    check.run("bounded restriction to H_u", [&](std::string& detail) {
        if (!setup_ok(detail)) return false;
        std::vector<Scalar> en(n);
        en[n - 1] = Scalar(1);
        const auto expected = Subspace<Scalar>::from_basis(ExactMatrix::from_columns({u, en}, n));
        const auto hu = h_u(g.generators(), u);
        std::vector<std::vector<long>> tail;
        for (const auto& st : approx.steps)
            if (st.residual < opts.convergence_tolerance) tail.push_back(st.exponents);
        if (tail.empty()) {
            detail = "no term within " + fmt(opts.convergence_tolerance) + " of v";
            return false;
        }
        const auto witness = bounded_restriction_witness(g, u, tail);
        const double bound = 1 + t.magnitude() + opts.convergence_tolerance;
        detail = "H_u dim " + std::to_string(hu.dim()) + (hu.same_as(expected) ? " = span{u, e_n}" : " != span{u, e_n}") +
                 ", restricted norm sup " + fmt(witness.report.restricted_norm_sup) + " <= " + fmt(bound) +
                 ", full entry sup " + fmt(witness.report.full_entry_sup);
        return hu.same_as(expected) && witness.h.same_as(expected) && witness.report.restricted_norm_sup <= bound;
    });
}

}  // namespace

ExampleSuite default_examples() {
    ExampleSuite s;
    s.shear_3d = from_group(fixtures::shear_3d(), {{"1", "1", "0"}, {"1", "sqrt(2)", "0"}});
    s.shear_4d = from_group(fixtures::shear_4d(), {{"1", "2", "sqrt(3)", "1/2"}, {"1", "sqrt(2)", "0", "0"}});
    s.complex_shear_5d = from_group(fixtures::complex_shear_5d(), {{"1+i", "1/2+2*i", "-3+i/3", "i", "0"}, {}});
    s.complex_shear_5d.points[1] = fixtures::complex_shear_dense_point();
    s.radical_shear_4d = from_group(fixtures::radical_shear_4d(), {{"1", "1", "0", "0"}, {"1", "1", "0", "sqrt(3)"}});
    return s;
}

std::vector<std::string> example_names() {
    return {"shear-3d", "shear-4d", "complex-shear-5d", "radical-shear-4d"};
}

ProblemInput& example_by_name(ExampleSuite& suite, const std::string& name) {
    if (name == "shear-3d") return suite.shear_3d;
    if (name == "shear-4d") return suite.shear_4d;
    if (name == "complex-shear-5d") return suite.complex_shear_5d;
    if (name == "radical-shear-4d") return suite.radical_shear_4d;
    throw DomainError("unknown example " + name);
}

std::vector<ClaimResult> verify_examples(const ExampleSuite& suite, const VerifyOptions& opts) {
    ScopedPrecision precision(opts.config.precision);
    std::vector<ClaimResult> out;
    shear_claims(out, "shear-3d", suite.shear_3d, opts);
    shear_claims(out, "shear-4d", suite.shear_4d, opts);
    shear_claims(out, "complex-shear-5d", suite.complex_shear_5d, opts);
    radical_claims(out, suite.radical_shear_4d, opts);
    return out;
}

}  // namespace abdyn
