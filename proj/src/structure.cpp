#include "abdyn/structure.hpp"

#include <algorithm>
#include <cmath>

namespace abdyn {

namespace {

Eigenvalue exact_eigenvalue(const Scalar& value, std::size_t multiplicity) {
    Eigenvalue e;
    e.value = value.evaluate(working_precision_bits());
    e.exact = value;
    e.multiplicity = multiplicity;
    return e;
}

std::vector<Scalar> unit_vector(std::size_t n, std::size_t i) {
    std::vector<Scalar> v(n);
    v[i] = Scalar(1);
    return v;
}

ExactMatrix leading_block(const ExactMatrix& m) { return m.block(0, 0, m.rows() - 1, m.cols() - 1); }

std::vector<ExactMatrix> leading_blocks(const std::vector<ExactMatrix>& gens) {
    std::vector<ExactMatrix> out;
    for (const auto& g : gens) out.push_back(leading_block(g));
    return out;
}

std::vector<Scalar> normalize_leading(std::vector<Scalar> v) {
    for (const auto& x : v) {
        if (x.is_zero()) continue;
        const Scalar inv = x.inverse();
        for (auto& y : v) y *= inv;
        break;
    }
    return v;
}

template <class T>
void require_invariant(const std::vector<Matrix<T>>& gens, const Matrix<T>& basis, const LinalgOptions& lin,
                       const std::string& what) {
    if (basis.cols() == 0) return;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        try {
            restrict_to(gens[g], basis, lin);
        } catch (const NotInvariant& e) {
            throw InvarianceViolation(what + " is not invariant under generator " + std::to_string(g) + ": " + e.what());
        }
    }
}

}  // namespace

GeneratorSet GeneratorSet::create(Field field, std::vector<ExactMatrix> generators, std::vector<std::string> names) {
    if (generators.empty()) throw DimensionMismatch("at least one generator is required");
    const std::size_t n = generators.front().rows();
    if (n == 0) throw DimensionMismatch("generators must have positive dimension");
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const auto& m = generators[g];
        if (m.rows() != n || m.cols() != n)
            throw DimensionMismatch("generator " + std::to_string(g) + " is not " + std::to_string(n) + "x" +
                                    std::to_string(n));
        if (field == Field::Real) {
            for (const auto& x : m.data())
                if (!x.is_real()) throw NonRealInput("generator " + std::to_string(g) + " has a non-real entry " + x.to_string());
        }
    }
    if (names.empty()) {
        for (std::size_t g = 0; g < generators.size(); ++g) names.push_back("g" + std::to_string(g + 1));
    }
    if (names.size() != generators.size()) throw DimensionMismatch("generator names do not match the generators");

    GeneratorSet set;
    set.field_ = field;
    set.n_ = n;
    for (std::size_t g = 0; g < generators.size(); ++g) {
        if (determinant(generators[g]).is_zero())
            throw NotInvertible("generator " + names[g] + " is singular");
        set.inverses_.push_back(inverse(generators[g]));
    }
    set.generators_ = std::move(generators);
    set.names_ = std::move(names);
    check_commuting(set.family());
    return set;
}

CommutingFamily GeneratorSet::family() const { return CommutingFamily::from_exact(field_, generators_); }

ExactMatrix GeneratorSet::word(const std::vector<long>& exponents) const {
    if (exponents.size() != generators_.size())
        throw DimensionMismatch("word has " + std::to_string(exponents.size()) + " exponents for " +
                                std::to_string(generators_.size()) + " generators");
    ExactMatrix out = ExactMatrix::identity(n_);
    for (std::size_t g = 0; g < generators_.size(); ++g) {
        if (exponents[g] != 0) out = out * matrix_power(generators_[g], inverses_[g], exponents[g]);
    }
    return out;
}

void require_s_form(const std::vector<ExactMatrix>& generators) {
    for (std::size_t g = 0; g < generators.size(); ++g) {
        if (!generators[g].is_square() || !is_s_form(generators[g]))
            throw NotSForm("matrix " + std::to_string(g) + " is not lower triangular with a constant diagonal");
    }
}

FFamily f_family(const std::vector<ExactMatrix>& gens) {
    require_s_form(gens);
    FFamily out;
    const std::size_t n = gens.empty() ? 0 : gens.front().rows();
    ExactMatrix chosen(n, 0);
    for (const auto& b : gens) {
        const Scalar mu = b(0, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::vector<Scalar> v = b.col(i);
            v[i] -= mu;
            const ExactMatrix candidate = chosen.hconcat(ExactMatrix::column(v));
            if (rank(candidate) > chosen.cols()) {
                chosen = candidate;
                out.chosen.push_back(v);
                out.chosen_index.push_back(out.vectors.size());
            }
            out.vectors.push_back(std::move(v));
        }
    }
    out.rank = out.chosen.size();
    out.span = out.rank == 0 ? Subspace<Scalar>(n) : Subspace<Scalar>::from_basis(chosen);
    return out;
}

FFamily projected_f_family(const std::vector<ExactMatrix>& gens) {
    require_s_form(gens);
    const std::size_t n = gens.empty() ? 0 : gens.front().rows();
    if (n <= 1) {
        FFamily out;
        out.span = Subspace<Scalar>(0);
        return out;
    }
    return f_family(leading_blocks(gens));
}

Subspace<Scalar> h_u(const std::vector<ExactMatrix>& gens, const std::vector<Scalar>& u) {
    const FFamily f = f_family(gens);
    const std::size_t n = gens.front().rows();
    if (u.size() != n) throw DimensionMismatch("point dimension does not match the group");
    std::vector<std::vector<Scalar>> cols{u};
    cols.insert(cols.end(), f.chosen.begin(), f.chosen.end());
    const auto h = Subspace<Scalar>::span(ExactMatrix::from_columns(cols, n));
    require_invariant(gens, h.basis(), {}, "H_u");
    return h;
}

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::ComplexHyperplane: return "complex-hyperplane";
        case CaseTag::RealHyperplane: return "real-hyperplane";
        case CaseTag::RealConjugatePair: return "real-conjugate-pair";
    }
    return "unknown";
}

InvariantFamily invariant_family(const GeneratorSet& group, const StructureOptions& opts) {
    return invariant_family(group.family(), opts);
}

InvariantFamily invariant_family(const CommutingFamily& family, const StructureOptions& opts) {
    const auto& sp = opts.spectral;
    const auto lin = sp.linalg();
    InvariantFamily out;
    out.field = family.field;
    out.n = family.n;
    out.blocks = simultaneous_refinement(family, sp);

    // Each piece contributes its real (or complex) basis to Q, its adapted basis to
    // M = Q * P and the number of leading adapted vectors its subspace omits.
    struct Piece {
        NumericMatrix basis;
        std::optional<ExactMatrix> exact_basis;
        NumericMatrix adapted;
        std::optional<ExactMatrix> exact_adapted;
        std::size_t omit = 1;
        CaseTag tag = CaseTag::ComplexHyperplane;
    };
    std::vector<Piece> pieces;

    auto realify_adapted = [](const auto& adapted) {
        // (Re p_1, Im p_1, Re p_2, Im p_2, ...)
        using M = std::decay_t<decltype(adapted)>;
        const M re = adapted.real_part();
        const M im = adapted.imag_part();
        M out(adapted.rows(), 2 * adapted.cols());
        for (std::size_t j = 0; j < adapted.cols(); ++j) {
            for (std::size_t i = 0; i < adapted.rows(); ++i) {
                out(i, 2 * j) = re(i, j);
                out(i, 2 * j + 1) = im(i, j);
            }
        }
        return out;
    };

    if (family.field == Field::Complex) {
        for (const auto& b : out.blocks) {
            TriangularForm t = triangularize_single_eigenvalue(family, b, sp);
            Piece p;
            p.basis = b.basis;
            p.exact_basis = b.exact_basis;
            p.adapted = t.adapted_basis;
            p.exact_adapted = t.exact_adapted_basis;
            if (!t.is_exact()) p.exact_basis.reset();
            pieces.push_back(std::move(p));
            out.forms.push_back(std::move(t));
        }
    } else {
        out.groups = pair_conjugates(out.blocks, sp);
        for (const auto& g : out.groups) {
            const SpectralBlock& first = out.blocks[g.members.front()];
            Piece p;
            p.basis = g.real_basis;
            p.exact_basis = g.exact_real_basis;
            if (g.conjugate_pair) {
                TriangularForm t = triangularize_single_eigenvalue(family, first, sp);
                p.adapted = realify_adapted(t.adapted_basis);
                if (t.exact_adapted_basis && p.exact_basis) p.exact_adapted = realify_adapted(*t.exact_adapted_basis);
                p.omit = 2;
                p.tag = CaseTag::RealConjugatePair;
                out.forms.push_back(std::move(t));
            } else {
                SpectralBlock real_block = first;
                real_block.basis = g.real_basis;
                real_block.exact_basis = g.exact_real_basis;
                TriangularForm t = triangularize_single_eigenvalue(family, real_block, sp);
                p.adapted = t.adapted_basis.real_part();
                if (t.exact_adapted_basis) p.exact_adapted = t.exact_adapted_basis->real_part();
                p.tag = CaseTag::RealHyperplane;
                out.forms.push_back(std::move(t));
            }
            if (!p.exact_adapted) p.exact_basis.reset();
            pieces.push_back(std::move(p));
        }
    }

    const bool exact = std::all_of(pieces.begin(), pieces.end(), [](const Piece& p) { return p.exact_adapted.has_value(); });
    NumericMatrix m;
    ExactMatrix em;
    std::vector<std::size_t> offsets;
    for (const auto& p : pieces) {
        offsets.push_back(m.cols());
        out.q = out.q.hconcat(p.basis);
        m = m.hconcat(p.adapted);
        if (exact) {
            out.exact_q = out.exact_q ? out.exact_q->hconcat(*p.exact_basis) : *p.exact_basis;
            em = em.hconcat(*p.exact_adapted);
        }
    }
    if (m.cols() != out.n) throw NumericAmbiguity("adapted bases do not span the whole space");
    if (exact) {
        out.exact_p = inverse(*out.exact_q) * em;
        out.q = to_numeric(*out.exact_q);
        out.p = to_numeric(*out.exact_p);
        m = to_numeric(em);
    } else {
        out.exact_q.reset();
        out.p = inverse(out.q, lin) * m;
    }

    for (std::size_t k = 0; k < pieces.size(); ++k) {
        std::vector<std::size_t> keep;
        for (std::size_t c = 0; c < out.n; ++c)
            if (c < offsets[k] || c >= offsets[k] + pieces[k].omit) keep.push_back(c);
        InvariantSubspace h;
        h.tag = pieces[k].tag;
        h.block = k;
        if (exact) {
            const ExactMatrix basis = select_columns(em, keep);
            h.exact = keep.empty() ? Subspace<Scalar>(out.n) : Subspace<Scalar>::from_basis(basis);
            h.numeric = keep.empty() ? Subspace<Complex>(out.n) : Subspace<Complex>::from_basis(to_numeric(basis), lin);
            if (family.exact) require_invariant(*family.exact, basis, {}, "H_" + std::to_string(k + 1));
        } else {
            const NumericMatrix basis = select_columns(m, keep);
            h.numeric = keep.empty() ? Subspace<Complex>(out.n) : Subspace<Complex>::from_basis(basis, lin);
        }
        if (!h.exact) {
            LinalgOptions scaled = lin;
            for (const auto& g : family.numeric) scaled.scale = std::max(scaled.scale, g.max_abs());
            require_invariant(family.numeric, h.numeric.basis(), scaled, "H_" + std::to_string(k + 1));
        }
        out.subspaces.push_back(std::move(h));
    }
    if (out.r() > out.n)
        throw InvarianceViolation("invariant family has " + std::to_string(out.r()) + " members in dimension " +
                                  std::to_string(out.n));
    return out;
}

Membership membership(const InvariantFamily& family, const std::vector<Scalar>& x, const StructureOptions& opts) {
    if (x.size() != family.n) throw DimensionMismatch("point dimension does not match the family");
    if (!family.is_exact()) return membership(family, to_numeric(x), opts);
    Membership out;
    for (std::size_t k = 0; k < family.subspaces.size(); ++k)
        if (family.subspaces[k].exact->contains(x)) out.containing.push_back(k);
    return out;
}

Membership membership(const InvariantFamily& family, const std::vector<Complex>& x, const StructureOptions& opts) {
    if (x.size() != family.n) throw DimensionMismatch("point dimension does not match the family");
    Membership out;
    const auto lin = opts.spectral.linalg();
    for (std::size_t k = 0; k < family.subspaces.size(); ++k)
        if (family.subspaces[k].numeric.contains(x, lin)) out.containing.push_back(k);
    return out;
}

const char* to_string(WitnessCase c) {
    switch (c) {
        case WitnessCase::Dimension1: return "dimension-1";
        case WitnessCase::SmallerLeadingSubspace: return "smaller-leading-subspace";
        case WitnessCase::FullRank: return "full-rank";
        case WitnessCase::HuRecursion: return "h_u-recursion";
        case WitnessCase::Homothety: return "homothety";
    }
    return "unknown";
}

namespace {

// Basis of the witness subspace for an S-form group and a point with nonzero first
// coordinate; its first column is u and the group restricted to it is S-form.
ExactMatrix witness_basis(const std::vector<ExactMatrix>& gens, const std::vector<Scalar>& u,
                          std::vector<WitnessCase>& cases) {
    const std::size_t n = u.size();
    if (n == 1) {
        cases.push_back(WitnessCase::Dimension1);
        return ExactMatrix::column(u);
    }
    const std::vector<Scalar> u1(u.begin(), u.end() - 1);
    std::vector<WitnessCase> inner;
    const ExactMatrix c1 = witness_basis(leading_blocks(gens), u1, inner);

    auto recurse_on = [&](const ExactMatrix& basis) {
        const auto restricted = restrict_family(gens, basis);
        require_s_form(restricted);
        const ExactMatrix sub = witness_basis(restricted, unit_vector(basis.cols(), 0), cases);
        return ExactMatrix(basis * sub);
    };

    if (c1.cols() < n - 1) {
        cases.push_back(WitnessCase::SmallerLeadingSubspace);
        std::vector<std::vector<Scalar>> cols{u};
        for (std::size_t k = 1; k < c1.cols(); ++k) {
            std::vector<Scalar> w = c1.col(k);
            w.push_back(Scalar());
            cols.push_back(std::move(w));
        }
        cols.push_back(unit_vector(n, n - 1));
        return recurse_on(ExactMatrix::from_columns(cols, n));
    }

    const FFamily f = f_family(gens);
    if (f.rank == 0 || f.rank == n - 1) {
        cases.push_back(f.rank == 0 ? WitnessCase::Homothety : WitnessCase::FullRank);
        std::vector<std::vector<Scalar>> cols{u};
        for (std::size_t i = 1; i < n; ++i) cols.push_back(unit_vector(n, i));
        return ExactMatrix::from_columns(cols, n);
    }

    cases.push_back(WitnessCase::HuRecursion);
    const ExactMatrix f_basis = ExactMatrix::from_columns(f.chosen, n);
    const auto on_f = restrict_family(gens, f_basis);
    SpectralBlock block;
    block.basis = NumericMatrix::identity(f.rank);
    block.exact_basis = ExactMatrix::identity(f.rank);
    for (const auto& g : gens) block.eigenvalues.push_back(exact_eigenvalue(g(0, 0), f.rank));
    const TriangularForm t = triangularize_single_eigenvalue(CommutingFamily::from_exact(Field::Complex, on_f), block);
    const ExactMatrix w = f_basis * *t.exact_adapted_basis;
    std::vector<std::vector<Scalar>> cols{u};
    for (std::size_t k = 0; k < w.cols(); ++k) cols.push_back(normalize_leading(w.col(k)));
    return recurse_on(ExactMatrix::from_columns(cols, n));
}

double row_sum_norm(const ExactMatrix& m) {
    double best = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double sum = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) sum += m(r, c).magnitude();
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

BoundedRestriction bounded_restriction_witness(const std::vector<ExactMatrix>& gens, const std::vector<Scalar>& u,
                                               const std::vector<ExactMatrix>& sequence, const WitnessOptions& opts) {
    if (gens.empty()) throw DimensionMismatch("at least one generator is required");
    require_s_form(gens);
    require_s_form(sequence);
    const std::size_t n = gens.front().rows();
    if (u.size() != n) throw DimensionMismatch("point dimension does not match the group");
    if (u.front().is_zero()) throw FirstCoordinateZero("the first coordinate of u is zero");

    BoundedRestriction out;
    out.basis = witness_basis(gens, u, out.cases);
    out.h = Subspace<Scalar>::from_basis(out.basis);
    require_invariant(gens, out.basis, {}, "witness subspace");

    std::vector<std::vector<std::complex<double>>> images;
    for (const auto& b : sequence) {
        if (b.rows() != n) throw DimensionMismatch("sequence element has the wrong dimension");
        ExactMatrix r;
        try {
            r = restrict_to(b, out.basis);
        } catch (const NotInvariant& e) {
            throw InvarianceViolation(std::string("sequence element leaves the witness subspace: ") + e.what());
        }
        out.report.restricted_norm_sup = std::max(out.report.restricted_norm_sup, row_sum_norm(r));
        out.report.restricted_entry_sup = std::max(out.report.restricted_entry_sup, r.max_abs());
        out.report.full_entry_sup = std::max(out.report.full_entry_sup, b.max_abs());
        std::vector<std::complex<double>> image;
        for (const auto& x : b.apply(u)) image.push_back(x.to_complex());
        images.push_back(std::move(image));
        out.restricted.push_back(std::move(r));
    }

    if (images.size() >= 2) {
        const auto tail = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::ceil(opts.tail_fraction * static_cast<double>(images.size()))));
        const std::size_t start = images.size() - std::min(tail, images.size());
        double diameter = 0;
        for (std::size_t i = start; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j)
                for (std::size_t c = 0; c < n; ++c) diameter = std::max(diameter, std::abs(images[i][c] - images[j][c]));
        out.report.tail_diameter = diameter;
        double scale = 1;
        for (const auto& x : images.back()) scale = std::max(scale, std::abs(x));
        if (!(diameter <= opts.tail_tolerance * scale))
            throw NotConvergent("images B_m u are not Cauchy over the tail (diameter " + std::to_string(diameter) + ")");
    }
    return out;
}

BoundedRestriction bounded_restriction_witness(const GeneratorSet& group, const std::vector<Scalar>& u,
                                               const std::vector<std::vector<long>>& words,
                                               const WitnessOptions& opts) {
    std::vector<ExactMatrix> sequence;
    sequence.reserve(words.size());
    for (const auto& w : words) sequence.push_back(group.word(w));
    return bounded_restriction_witness(group.generators(), u, sequence, opts);
}

InvariantTree invariant_tree(const GeneratorSet& group, std::optional<std::size_t> max_depth,
                             const StructureOptions& opts) {
    return invariant_tree(group.family(), max_depth, opts);
}

InvariantTree invariant_tree(const CommutingFamily& family, std::optional<std::size_t> max_depth,
                             const StructureOptions& opts) {
    const auto lin = opts.spectral.linalg();
    const std::size_t limit = max_depth.value_or(family.n);
    std::vector<std::vector<Eigenvalue>> spectra = family.candidate_spectra;
    if (spectra.size() != family.size()) {
        spectra.clear();
        for (std::size_t g = 0; g < family.size(); ++g)
            spectra.push_back(family.exact ? eigenvalues((*family.exact)[g], opts.spectral)
                                           : eigenvalues(family.numeric[g], opts.spectral));
    }

    InvariantTree tree;
    TreeNode root;
    root.numeric = Subspace<Complex>::whole(family.n);
    if (family.exact) root.exact = Subspace<Scalar>::whole(family.n);
    tree.nodes.push_back(std::move(root));

    auto find_node = [&](const TreeNode& candidate) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& node = tree.nodes[i];
            if (node.dim() != candidate.dim()) continue;
            const bool same = node.exact && candidate.exact ? node.exact->same_as(*candidate.exact)
                                                            : node.numeric.same_as(candidate.numeric, lin);
            if (same) return i;
        }
        return std::nullopt;
    };

    // Children have strictly smaller dimension, so processing nodes by decreasing
    // dimension finalizes every node's depth before it is expanded.
    std::vector<bool> expanded(1, false);
    while (true) {
        std::optional<std::size_t> next;
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            if (expanded[i]) continue;
            if (!next || tree.nodes[i].dim() > tree.nodes[*next].dim()) next = i;
        }
        if (!next) break;
        const std::size_t idx = *next;
        expanded[idx] = true;
        if (tree.nodes[idx].dim() == 0 || tree.nodes[idx].depth >= limit) continue;

        const TreeNode node = tree.nodes[idx];
        CommutingFamily sub;
        if (family.exact && node.exact) {
            sub = CommutingFamily::from_exact(family.field, restrict_family(*family.exact, node.exact->basis()));
        } else {
            LinalgOptions scaled = lin;
            for (const auto& g : family.numeric) scaled.scale = std::max(scaled.scale, g.max_abs());
            sub = CommutingFamily::from_numeric(family.field, restrict_family(family, node.numeric.basis(), scaled));
        }
        sub.candidate_spectra = spectra;
        const InvariantFamily local = invariant_family(sub, opts);
        for (const auto& h : local.subspaces) {
            TreeNode child;
            child.depth = node.depth + 1;
            if (h.exact && node.exact) {
                const ExactMatrix basis = node.exact->basis() * h.exact->basis();
                child.exact = h.dim() == 0 ? Subspace<Scalar>(family.n) : Subspace<Scalar>::from_basis(basis);
                child.numeric =
                    h.dim() == 0 ? Subspace<Complex>(family.n) : Subspace<Complex>::from_basis(to_numeric(basis), lin);
            } else {
                const NumericMatrix basis = node.numeric.basis() * h.numeric.basis();
                child.numeric = h.dim() == 0 ? Subspace<Complex>(family.n) : Subspace<Complex>::from_basis(basis, lin);
            }
            std::size_t child_index;
            if (auto existing = find_node(child)) {
                child_index = *existing;
                tree.nodes[child_index].depth = std::max(tree.nodes[child_index].depth, child.depth);
            } else {
                child_index = tree.nodes.size();
                tree.nodes.push_back(std::move(child));
                expanded.push_back(false);
            }
            auto& children = tree.nodes[idx].children;
            if (std::find(children.begin(), children.end(), child_index) == children.end())
                children.push_back(child_index);
        }
    }
    for (const auto& node : tree.nodes) tree.depth = std::max(tree.depth, node.depth);
    return tree;
}

}  // namespace abdyn
