#include "abdyn/spectral.hpp"

#include "abdyn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace abdyn {

const char* to_string(Field field) { return field == Field::Real ? "real" : "complex"; }

bool Eigenvalue::is_real(double tol) const {
    if (exact) return exact->is_real();
    return std::abs(static_cast<double>(value.imag())) <= tol;
}

namespace {

bool is_squarefree(std::uint64_t d) {
    for (std::uint64_t p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

std::vector<std::uint64_t> candidate_radicands(const Polynomial<Scalar>& f) {
    std::set<std::uint64_t> out;
    for (std::uint64_t d = 1; d <= 50; ++d)
        if (is_squarefree(d)) out.insert(d);
    for (const auto& c : f)
        for (const auto& [key, q] : c.terms()) out.insert(key.radicand);
    return {out.begin(), out.end()};
}

/// Recognises x as q * sqrt(d) with a small-denominator rational q, by continued fractions.
std::optional<Scalar> recognize_single_term(const Real& x, const std::vector<std::uint64_t>& radicands) {
    const unsigned bits = working_precision_bits();
    const Real tol = boost::multiprecision::ldexp(Real(1), -static_cast<int>(bits * 3 / 4));
    if (abs(x) <= tol) return Scalar();
    for (std::uint64_t d : radicands) {
        const Real y = x / boost::multiprecision::sqrt(Real(d));
        // Convergents h/k of the continued fraction of y.
        mpz_class h_prev = 1, h = 0, k_prev = 0, k = 1;
        Real rest = y;
        bool found = false;
        for (int step = 0; step < 60; ++step) {
            const Real a_real = floor(rest);
            mpz_class a;
            mpfr_get_z(a.get_mpz_t(), a_real.backend().data(), MPFR_RNDD);
            const mpz_class h_next = a * h_prev + h;
            const mpz_class k_next = a * k_prev + k;
            h = h_prev;
            k = k_prev;
            h_prev = h_next;
            k_prev = k_next;
            if (k_prev > 1000000) break;
            const Real approx = to_real(mpq_class(h_prev, k_prev));
            if (abs(y - approx) <= tol * std::max(Real(1), abs(y))) {
                found = true;
                break;
            }
            const Real frac = rest - a_real;
            if (frac == 0) break;
            rest = Real(1) / frac;
        }
        if (found) {
            mpq_class q(h_prev, k_prev);
            q.canonicalize();
            return Scalar(q) * Scalar::sqrt(d);
        }
    }
    return std::nullopt;
}

std::optional<Scalar> exact_square_root(const Scalar& value, const std::vector<std::uint64_t>& radicands) {
    if (value.is_zero()) return Scalar();
    if (auto q = value.as_rational()) {
        const mpz_class num = abs(q->get_num());
        const mpz_class den = q->get_den();
        const mpz_class prod = num * den;
        if (!prod.fits_ulong_p()) return std::nullopt;
        Scalar root = Scalar::sqrt(prod.get_ui()) * Scalar(mpq_class(1, 1) / mpq_class(den));
        if (*q < 0) root *= Scalar::imaginary_unit();
        return root;
    }
    const Complex numeric = value.evaluate(working_precision_bits());
    // Principal square root of the numeric value.
    const Real r = numeric.abs();
    Real re = boost::multiprecision::sqrt((r + numeric.real()) / 2);
    Real im = boost::multiprecision::sqrt((r - numeric.real()) / 2);
    if (numeric.imag() < 0) im = -im;
    auto re_c = recognize_single_term(re, radicands);
    auto im_c = recognize_single_term(im, radicands);
    if (!re_c || !im_c) return std::nullopt;
    const Scalar candidate = *re_c + Scalar::imaginary_unit() * *im_c;
    if (candidate * candidate == value) return candidate;
    return std::nullopt;
}

/// Exact root of the squarefree factor f close to z, if it lies in the scalar field.
std::optional<Scalar> recognize_root(const Polynomial<Scalar>& f, const Complex& z) {
    const std::size_t deg = f.size() - 1;
    if (deg == 1) return -(f[0] * f[1].inverse());
    const auto radicands = candidate_radicands(f);
    if (deg == 2) {
        const Scalar lead_inv = f[2].inverse();
        const Scalar b = f[1] * lead_inv;
        const Scalar c = f[0] * lead_inv;
        const Scalar disc = b * b - Scalar(4L) * c;
        if (auto s = exact_square_root(disc, radicands)) {
            const Scalar half(mpq_class(1, 2));
            const Scalar r1 = (-b + *s) * half;
            const Scalar r2 = (-b - *s) * half;
            const unsigned bits = working_precision_bits();
            const double d1 = (r1.evaluate(bits) - z).abs_double();
            const double d2 = (r2.evaluate(bits) - z).abs_double();
            return d1 <= d2 ? r1 : r2;
        }
    }
    auto re_c = recognize_single_term(z.real(), radicands);
    auto im_c = recognize_single_term(z.imag(), radicands);
    if (re_c && im_c) {
        const Scalar candidate = *re_c + Scalar::imaginary_unit() * *im_c;
        if (evaluate(f, candidate).is_zero()) return candidate;
    }
    return std::nullopt;
}

struct RawRoot {
    Complex value;
    std::optional<Scalar> exact;
    std::size_t multiplicity;
};

struct Cluster {
    Complex sum;
    std::size_t count = 0;  // raw roots merged (weighted by multiplicity)
    std::optional<Scalar> exact;
    bool exact_conflict = false;
    Complex center() const { return sum / Complex(static_cast<int>(count)); }
};

/// Groups raw roots within the cluster radius; throws ClusterAmbiguity when two
/// clusters are closer than ten radii.
std::vector<Eigenvalue> cluster_roots(const std::vector<RawRoot>& roots, const SpectralOptions& opts) {
    double scale = 1;
    for (const auto& r : roots) scale = std::max(scale, r.value.abs_double());
    const double delta = opts.cluster_factor * scale;
    std::vector<Cluster> clusters;
    for (const auto& r : roots) {
        bool placed = false;
        for (auto& c : clusters) {
            if ((c.center() - r.value).abs_double() <= delta) {
                c.sum += r.value * Complex(static_cast<int>(r.multiplicity));
                c.count += r.multiplicity;
                if (r.exact && c.exact && !(*r.exact == *c.exact)) c.exact_conflict = true;
                if (!r.exact) c.exact_conflict = true;
                placed = true;
                break;
            }
        }
        if (!placed) {
            Cluster c;
            c.sum = r.value * Complex(static_cast<int>(r.multiplicity));
            c.count = r.multiplicity;
            c.exact = r.exact;
            clusters.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            const double sep = (clusters[i].center() - clusters[j].center()).abs_double();
            if (sep <= 10 * delta) {
                std::ostringstream msg;
                msg << std::scientific << std::setprecision(3) << "eigenvalue clusters separated by " << sep
                    << ", within ten cluster radii (" << delta << ")";
                throw ClusterAmbiguity(msg.str());
            }
        }
    }
    std::vector<Eigenvalue> out;
    for (const auto& c : clusters) {
        Eigenvalue e;
        e.multiplicity = c.count;
        if (c.exact && !c.exact_conflict) {
            e.exact = c.exact;
            e.value = c.exact->evaluate(working_precision_bits());
        } else {
            e.value = c.center();
        }
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        const double ar = static_cast<double>(a.value.real()), br = static_cast<double>(b.value.real());
        if (ar != br) return ar < br;
        return static_cast<double>(a.value.imag()) < static_cast<double>(b.value.imag());
    });
    return out;
}

template <class T>
Matrix<T> shifted(const Matrix<T>& a, const T& lambda) {
    Matrix<T> n = a;
    for (std::size_t i = 0; i < a.rows(); ++i) n(i, i) -= lambda;
    return n;
}

void cross_check_multiplicities(const ExactMatrix* exact, const NumericMatrix& numeric,
                                const std::vector<Eigenvalue>& values, const SpectralOptions& opts) {
    for (const auto& e : values) {
        std::size_t dim = 0;
        if (exact && e.exact) {
            dim = generalized_eigenspace(*exact, *e.exact).cols();
        } else {
            dim = generalized_eigenspace(numeric, e.value, opts.linalg()).cols();
        }
        if (dim != e.multiplicity)
            throw NumericAmbiguity("eigenvalue " + FieldTraits<Complex>::render(e.value) + " has multiplicity " +
                                   std::to_string(e.multiplicity) + " but its generalized eigenspace has dimension " +
                                   std::to_string(dim));
    }
}

std::vector<Eigenvalue> exact_eigenvalues_at_current_precision(const ExactMatrix& a, const SpectralOptions& opts) {
    const auto factors = squarefree_decomposition(characteristic_polynomial(a));
    std::vector<RawRoot> raw;
    for (const auto& f : factors) {
        const auto roots = polynomial_roots(to_numeric(f.factor));
        for (const auto& z : roots) raw.push_back({z, recognize_root(f.factor, z), f.multiplicity});
    }
    return cluster_roots(raw, opts);
}

}  // namespace

template <class T>
Matrix<T> generalized_eigenspace(const Matrix<T>& a, const T& lambda, const LinalgOptions& base) {
    LinalgOptions opts = base;
    opts.scale = std::max({opts.scale, a.max_abs(), FieldTraits<T>::magnitude(lambda)});
    const Matrix<T> n = shifted(a, lambda);
    Matrix<T> k = kernel_basis(n, opts);
    while (k.cols() > 0 && k.cols() < a.rows()) {
        const Matrix<T> annihilator = kernel_basis(k.transpose(), opts).transpose();
        Matrix<T> next = kernel_basis(annihilator * n, opts);
        if (next.cols() <= k.cols()) break;
        k = std::move(next);
    }
    return k;
}

template Matrix<Scalar> generalized_eigenspace(const Matrix<Scalar>&, const Scalar&, const LinalgOptions&);
template Matrix<Complex> generalized_eigenspace(const Matrix<Complex>&, const Complex&, const LinalgOptions&);

std::vector<Eigenvalue> eigenvalues(const ExactMatrix& a, const SpectralOptions& opts) {
    if (!a.is_square()) throw DimensionMismatch("eigenvalues of a non-square matrix");
    if (a.rows() == 0) return {};
    unsigned bits = working_precision_bits();
    for (;;) {
        try {
            ScopedPrecision guard(bits);
            auto values = exact_eigenvalues_at_current_precision(a, opts);
            cross_check_multiplicities(&a, to_numeric(a), values, opts);
            return values;
        } catch (const ClusterAmbiguity&) {
            if (bits * 2 > opts.max_precision_bits) throw;
            bits *= 2;
        }
    }
}

std::vector<Eigenvalue> eigenvalues(const NumericMatrix& a, const SpectralOptions& opts) {
    if (!a.is_square()) throw DimensionMismatch("eigenvalues of a non-square matrix");
    if (a.rows() == 0) return {};
    const auto roots = polynomial_roots(characteristic_polynomial(a));
    std::vector<RawRoot> raw;
    for (const auto& z : roots) raw.push_back({z, std::nullopt, 1});
    auto values = cluster_roots(raw, opts);
    cross_check_multiplicities(nullptr, a, values, opts);
    return values;
}

CommutingFamily CommutingFamily::from_exact(Field field, std::vector<ExactMatrix> generators) {
    CommutingFamily f;
    f.field = field;
    f.n = generators.empty() ? 0 : generators.front().rows();
    for (const auto& g : generators) f.numeric.push_back(to_numeric(g));
    f.exact = std::move(generators);
    return f;
}

CommutingFamily CommutingFamily::from_numeric(Field field, std::vector<NumericMatrix> generators) {
    CommutingFamily f;
    f.field = field;
    f.n = generators.empty() ? 0 : generators.front().rows();
    f.numeric = std::move(generators);
    return f;
}

void check_commuting(const CommutingFamily& family, const SpectralOptions& opts) {
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (family.exact) {
                const auto& a = (*family.exact)[i];
                const auto& b = (*family.exact)[j];
                const ExactMatrix c = a * b - b * a;
                if (!(c == ExactMatrix(c.rows(), c.cols()))) throw NotAbelian(i, j, c.max_abs());
            } else {
                const auto& a = family.numeric[i];
                const auto& b = family.numeric[j];
                const double norm = (a * b - b * a).max_abs();
                if (norm > opts.eps * std::max(1.0, a.max_abs() * b.max_abs())) throw NotAbelian(i, j, norm);
            }
        }
    }
}

std::vector<NumericMatrix> restrict_family(const CommutingFamily& family, const NumericMatrix& basis,
                                           const LinalgOptions& opts) {
    std::vector<NumericMatrix> out;
    for (const auto& g : family.numeric) out.push_back(restrict_to(g, basis, opts));
    return out;
}

std::vector<ExactMatrix> restrict_family(const std::vector<ExactMatrix>& generators, const ExactMatrix& basis) {
    std::vector<ExactMatrix> out;
    for (const auto& g : generators) out.push_back(restrict_to(g, basis));
    return out;
}

namespace {

struct WorkingBlock {
    NumericMatrix basis;
    std::optional<ExactMatrix> exact_basis;
    std::vector<std::optional<Eigenvalue>> values;
};

/// Splits a block by the generalized eigenspaces of one generator. Returns the
/// pieces (a single piece when the generator has one eigenvalue on the block).
std::vector<WorkingBlock> split_block(const CommutingFamily& family, const WorkingBlock& block, std::size_t g,
                                      const std::vector<Eigenvalue>& candidates, const SpectralOptions& opts) {
    const std::size_t d = block.basis.cols();
    std::optional<ExactMatrix> exact_r;
    if (block.exact_basis && family.exact) exact_r = restrict_to((*family.exact)[g], *block.exact_basis);
    const NumericMatrix numeric_r =
        exact_r ? to_numeric(*exact_r) : restrict_to(family.numeric[g], block.basis, opts.linalg());

    std::vector<WorkingBlock> pieces;
    std::size_t total = 0;
    for (const auto& lambda : candidates) {
        WorkingBlock piece;
        if (exact_r && lambda.exact) {
            const ExactMatrix k = generalized_eigenspace(*exact_r, *lambda.exact);
            if (k.cols() == 0) continue;
            piece.exact_basis = *block.exact_basis * k;
            piece.basis = to_numeric(*piece.exact_basis);
        } else {
            const NumericMatrix k = generalized_eigenspace(numeric_r, lambda.value, opts.linalg());
            if (k.cols() == 0) continue;
            piece.basis = block.basis * k;
        }
        total += piece.basis.cols();
        piece.values = block.values;
        Eigenvalue e = lambda;
        e.multiplicity = piece.basis.cols();
        piece.values[g] = std::move(e);
        pieces.push_back(std::move(piece));
    }
    if (total != d)
        throw NumericAmbiguity("generator " + std::to_string(g) + ": generalized eigenspaces on a block of dimension " +
                               std::to_string(d) + " have total dimension " + std::to_string(total));
    if (pieces.size() == 1) {
        // Keep the original basis; the generator acts with one eigenvalue.
        WorkingBlock same = block;
        same.values[g] = pieces.front().values[g];
        same.values[g]->multiplicity = d;
        return {same};
    }
    return pieces;
}

}  // namespace

std::vector<SpectralBlock> simultaneous_refinement(const CommutingFamily& family, const SpectralOptions& opts) {
    check_commuting(family, opts);
    const std::size_t n = family.n;
    const std::size_t g_count = family.size();
    std::vector<std::vector<Eigenvalue>> spectra = family.candidate_spectra;
    if (spectra.size() != g_count) {
        spectra.clear();
        for (std::size_t g = 0; g < g_count; ++g) {
            spectra.push_back(family.exact ? eigenvalues((*family.exact)[g], opts)
                                           : eigenvalues(family.numeric[g], opts));
        }
    }

    WorkingBlock whole;
    whole.basis = NumericMatrix::identity(n);
    if (family.exact) whole.exact_basis = ExactMatrix::identity(n);
    whole.values.assign(g_count, std::nullopt);
    std::vector<WorkingBlock> blocks{whole};
    if (n == 0) return {};

    // Split by every generator in turn, then repeat until a pass changes nothing.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t g = 0; g < g_count; ++g) {
            std::vector<WorkingBlock> next;
            for (const auto& b : blocks) {
                if (b.values[g]) {
                    next.push_back(b);
                    continue;
                }
                auto pieces = split_block(family, b, g, spectra[g], opts);
                if (pieces.size() > 1) changed = true;
                for (auto& p : pieces) next.push_back(std::move(p));
            }
            blocks = std::move(next);
        }
    }

    std::vector<SpectralBlock> out;
    NumericMatrix stacked;
    for (auto& b : blocks) {
        SpectralBlock s;
        s.basis = std::move(b.basis);
        s.exact_basis = std::move(b.exact_basis);
        for (std::size_t g = 0; g < g_count; ++g) s.eigenvalues.push_back(*b.values[g]);
        stacked = stacked.hconcat(s.basis);
        out.push_back(std::move(s));
    }
    if (rank(stacked, opts.linalg()) != n)
        throw NumericAmbiguity("spectral blocks do not form a direct sum of the whole space");
    return out;
}

std::vector<RealBlockGroup> pair_conjugates(std::vector<SpectralBlock>& blocks, const SpectralOptions& opts) {
    const auto lin = opts.linalg();
    auto tolerance = [&](const Eigenvalue& e) { return opts.cluster_factor * std::max(1.0, e.value.abs_double()); };
    auto block_is_real = [&](const SpectralBlock& b) {
        return std::all_of(b.eigenvalues.begin(), b.eigenvalues.end(),
                           [&](const Eigenvalue& e) { return e.is_real(tolerance(e)); });
    };
    std::vector<bool> used(blocks.size(), false);
    std::vector<RealBlockGroup> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        SpectralBlock& b = blocks[i];
        RealBlockGroup group;
        group.members = {i};
        if (block_is_real(b)) {
            for (auto& e : b.eigenvalues) e.value = Complex(e.value.real());
            if (b.exact_basis) {
                group.exact_real_basis = realify_basis(*b.exact_basis);
                group.real_basis = to_numeric(*group.exact_real_basis);
            } else {
                group.real_basis = realify_basis(b.basis, lin);
            }
            if (group.real_basis.cols() != b.dim())
                throw NumericAmbiguity("real-eigenvalue block is not conjugation invariant");
            out.push_back(std::move(group));
            continue;
        }
        std::optional<std::size_t> match;
        for (std::size_t j = i + 1; j < blocks.size() && !match; ++j) {
            if (used[j] || blocks[j].dim() != b.dim()) continue;
            bool conj = true;
            for (std::size_t g = 0; g < b.eigenvalues.size() && conj; ++g) {
                const auto& ei = b.eigenvalues[g];
                const auto& ej = blocks[j].eigenvalues[g];
                if (ei.exact && ej.exact) {
                    conj = ei.exact->conj() == *ej.exact;
                } else {
                    conj = (ei.value.conj() - ej.value).abs_double() <= tolerance(ei);
                }
            }
            if (!conj) continue;
            bool same_space = false;
            if (b.exact_basis && blocks[j].exact_basis) {
                same_space = Subspace<Scalar>::span(b.exact_basis->conj())
                                 .same_as(Subspace<Scalar>::span(*blocks[j].exact_basis));
            } else {
                same_space = Subspace<Complex>::span(b.basis.conj(), lin)
                                 .same_as(Subspace<Complex>::span(blocks[j].basis, lin), lin);
            }
            if (same_space) match = j;
        }
        if (!match)
            throw UnmatchedConjugate("block " + std::to_string(i) + " with non-real eigenvalues has no conjugate block");
        used[*match] = true;
        b.partner = *match;
        blocks[*match].partner = i;
        group.members.push_back(*match);
        group.conjugate_pair = true;
        if (b.exact_basis) {
            group.exact_real_basis = realify_basis(b.exact_basis->hconcat(b.exact_basis->conj()));
            group.real_basis = to_numeric(*group.exact_real_basis);
        } else {
            group.real_basis = realify_basis(b.basis.hconcat(b.basis.conj()), lin);
        }
        if (group.real_basis.cols() != 2 * b.dim())
            throw NumericAmbiguity("conjugate blocks do not span a subspace of twice their dimension");
        out.push_back(std::move(group));
    }
    return out;
}

namespace {

template <class T>
struct LocalTriangularization {
    Matrix<T> p;
    std::vector<std::size_t> level_sizes;
};

template <class T>
LocalTriangularization<T> triangularize_nilpotent_parts(const std::vector<Matrix<T>>& nilpotent, std::size_t d,
                                                        const LinalgOptions& opts) {
    auto stack = [&](const Matrix<T>& left) {
        Matrix<T> s;
        for (const auto& nil : nilpotent) s = s.vconcat(left.rows() == 0 ? nil : left * nil);
        return s;
    };
    std::vector<Matrix<T>> levels;
    Matrix<T> current;
    if (nilpotent.empty()) {
        current = Matrix<T>::identity(d);
    } else {
        current = kernel_basis(stack(Matrix<T>()), opts);
    }
    if (current.cols() == 0) throw NoCommonEigenvector("the nilpotent parts have no common kernel vector");
    levels.push_back(current);
    while (current.cols() < d) {
        const Matrix<T> annihilator = kernel_basis(current.transpose(), opts).transpose();
        const Matrix<T> next = kernel_basis(stack(annihilator), opts);
        if (next.cols() <= current.cols())
            throw NoCommonEigenvector("common-kernel filtration stalled at dimension " + std::to_string(current.cols()));
        const std::size_t have = current.cols();
        const auto cols = independent_columns(current.hconcat(next), opts);
        std::vector<std::size_t> fresh;
        for (auto c : cols)
            if (c >= have) fresh.push_back(c - have);
        const Matrix<T> extension = select_columns(next, fresh);
        levels.push_back(extension);
        current = current.hconcat(extension);
    }
    LocalTriangularization<T> out;
    for (std::size_t k = levels.size(); k-- > 0;) {
        out.p = out.p.hconcat(levels[k]);
        out.level_sizes.push_back(levels[k].cols());
    }
    return out;
}

}  // namespace

TriangularForm triangularize_single_eigenvalue(const CommutingFamily& family, const SpectralBlock& block,
                                               const SpectralOptions& opts) {
    const auto lin = opts.linalg();
    const std::size_t d = block.dim();
    if (block.eigenvalues.size() != family.size())
        throw DimensionMismatch("block eigenvalue map does not match the family");
    TriangularForm out;
    out.mu = block.eigenvalues;
    const bool exact = family.exact && block.exact_basis &&
                       std::all_of(block.eigenvalues.begin(), block.eigenvalues.end(),
                                   [](const Eigenvalue& e) { return e.exact.has_value(); });
    if (exact) {
        const auto restricted = restrict_family(*family.exact, *block.exact_basis);
        std::vector<ExactMatrix> nil;
        for (std::size_t g = 0; g < restricted.size(); ++g) nil.push_back(shifted(restricted[g], *block.eigenvalues[g].exact));
        auto local = triangularize_nilpotent_parts(nil, d, lin);
        BasisChange<Scalar> change(local.p);
        std::vector<ExactMatrix> tri;
        for (const auto& r : restricted) {
            tri.push_back(change.conjugate(r));
            if (!is_s_form(tri.back())) throw NoCommonEigenvector("exact triangularization check failed");
        }
        out.level_sizes = std::move(local.level_sizes);
        out.exact_adapted_basis = *block.exact_basis * local.p;
        out.adapted_basis = to_numeric(*out.exact_adapted_basis);
        out.change = BasisChange<Complex>(to_numeric(local.p), lin);
        for (const auto& t : tri) out.triangular.push_back(to_numeric(t));
        out.exact_triangular = std::move(tri);
        out.exact_change = std::move(change);
        return out;
    }
    const auto restricted = restrict_family(family, block.basis, lin);
    std::vector<NumericMatrix> nil;
    LinalgOptions scaled = lin;
    for (std::size_t g = 0; g < restricted.size(); ++g) {
        nil.push_back(shifted(restricted[g], block.eigenvalues[g].value));
        scaled.scale = std::max(scaled.scale, restricted[g].max_abs());
    }
    auto local = triangularize_nilpotent_parts(nil, d, scaled);
    out.change = BasisChange<Complex>(local.p, lin);
    for (const auto& r : restricted) {
        out.triangular.push_back(out.change.conjugate(r));
        if (!is_s_form(out.triangular.back(), lin)) throw NoCommonEigenvector("numeric triangularization check failed");
    }
    out.level_sizes = std::move(local.level_sizes);
    out.adapted_basis = block.basis * local.p;
    return out;
}

}  // namespace abdyn
