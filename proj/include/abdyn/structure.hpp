#pragma once

// Invariant subspaces of abelian matrix groups.
//
// invariant_family computes hyperplanes and codimension-2 subspaces H_1..H_r whose
// union is the complement of the dense open set U. For groups of lower triangular
// matrices with constant diagonal ("S-form") this file also provides the F-family
// of nilpotent directions, the invariant subspaces H_u = span{u, F}, and the
// recursive construction of an invariant subspace on which a convergent sequence
// of group elements restricts to a bounded sequence.

#include "abdyn/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abdyn {

/// Validated generators of an abelian subgroup of GL(n, K).
class GeneratorSet {
public:
    /// Throws DimensionMismatch, NotInvertible, NonRealInput (real field with
    /// non-real entries) or NotAbelian.
    static GeneratorSet create(Field field, std::vector<ExactMatrix> generators, std::vector<std::string> names = {});

    Field field() const noexcept { return field_; }
    std::size_t dimension() const noexcept { return n_; }
    std::size_t size() const noexcept { return generators_.size(); }
    const std::vector<ExactMatrix>& generators() const noexcept { return generators_; }
    const std::vector<ExactMatrix>& inverses() const noexcept { return inverses_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    CommutingFamily family() const;
    /// Product of generator powers; exponents.size() must equal size().
    ExactMatrix word(const std::vector<long>& exponents) const;

private:
    Field field_ = Field::Complex;
    std::size_t n_ = 0;
    std::vector<ExactMatrix> generators_;
    std::vector<ExactMatrix> inverses_;
    std::vector<std::string> names_;
};

/// Throws NotSForm unless every matrix is lower triangular with constant diagonal.
void require_s_form(const std::vector<ExactMatrix>& generators);

struct FFamily {
    /// (B - mu_B I) e_i for every generator B and i = 1..n-1, generator-major.
    std::vector<std::vector<Scalar>> vectors;
    std::size_t rank = 0;
    /// Maximal independent subset, first found in generator order, then column order.
    std::vector<std::vector<Scalar>> chosen;
    /// Index of each chosen vector in `vectors`.
    std::vector<std::size_t> chosen_index;
    Subspace<Scalar> span;
};

FFamily f_family(const std::vector<ExactMatrix>& s_form_generators);
/// F-family of the leading (n-1) x (n-1) blocks.
FFamily projected_f_family(const std::vector<ExactMatrix>& s_form_generators);

/// span{u, v_1..v_r}; throws InvarianceViolation if some generator leaves it.
Subspace<Scalar> h_u(const std::vector<ExactMatrix>& s_form_generators, const std::vector<Scalar>& u);

enum class CaseTag { ComplexHyperplane, RealHyperplane, RealConjugatePair };

const char* to_string(CaseTag tag);

struct InvariantSubspace {
    Subspace<Complex> numeric;
    std::optional<Subspace<Scalar>> exact;
    CaseTag tag = CaseTag::ComplexHyperplane;
    /// Index of the real block group (real field) or spectral block (complex field).
    std::size_t block = 0;

    std::size_t dim() const noexcept { return numeric.dim(); }
};

struct InvariantFamily {
    Field field = Field::Complex;
    std::size_t n = 0;
    std::vector<InvariantSubspace> subspaces;

    std::vector<SpectralBlock> blocks;
    std::vector<RealBlockGroup> groups;  // real field only
    std::vector<TriangularForm> forms;   // one per piece (group or block)

    /// Q: concatenated (real) block bases. P: block-diagonal triangularizing change,
    /// so Q * P is the global adapted basis.
    NumericMatrix q;
    NumericMatrix p;
    std::optional<ExactMatrix> exact_q;
    std::optional<ExactMatrix> exact_p;

    std::size_t r() const noexcept { return subspaces.size(); }
    bool is_exact() const noexcept { return exact_q.has_value(); }
};

struct StructureOptions {
    SpectralOptions spectral;
};

InvariantFamily invariant_family(const GeneratorSet& group, const StructureOptions& opts = {});
InvariantFamily invariant_family(const CommutingFamily& family, const StructureOptions& opts = {});

struct Membership {
    /// Indices of the H_k containing the point; empty means the point lies in U.
    std::vector<std::size_t> containing;
    bool in_u() const noexcept { return containing.empty(); }
};

Membership membership(const InvariantFamily& family, const std::vector<Scalar>& x, const StructureOptions& opts = {});
Membership membership(const InvariantFamily& family, const std::vector<Complex>& x, const StructureOptions& opts = {});

struct BoundReport {
    /// sup over the sequence of the max-row-sum norm of B_m restricted to H.
    double restricted_norm_sup = 0;
    /// sup of the largest entry magnitude of the restricted matrices.
    double restricted_entry_sup = 0;
    /// sup of the largest entry magnitude of the full matrices B_m.
    double full_entry_sup = 0;
    /// Diameter of the images B_m u over the tail used for the convergence check.
    double tail_diameter = 0;
};

enum class WitnessCase { Dimension1, SmallerLeadingSubspace, FullRank, HuRecursion, Homothety };

const char* to_string(WitnessCase c);

struct BoundedRestriction {
    Subspace<Scalar> h;
    /// Basis of H whose first vector is u.
    ExactMatrix basis;
    std::vector<ExactMatrix> restricted;
    BoundReport report;
    /// Case taken at each level of the recursion, outermost first.
    std::vector<WitnessCase> cases;
};

struct WitnessOptions {
    /// Allowed diameter of the tail images, relative to max(1, |B_m u|).
    double tail_tolerance = 1e-2;
    /// Fraction of the sequence (from the end) treated as the tail.
    double tail_fraction = 0.5;
};

/// Invariant subspace H containing u, with a basis starting at u, on which the
/// restrictions of the sequence are bounded. Throws FirstCoordinateZero, NotSForm,
/// or NotConvergent when the tail images are not Cauchy within tolerance.
BoundedRestriction bounded_restriction_witness(const std::vector<ExactMatrix>& s_form_generators,
                                               const std::vector<Scalar>& u, const std::vector<ExactMatrix>& sequence,
                                               const WitnessOptions& opts = {});
BoundedRestriction bounded_restriction_witness(const GeneratorSet& group, const std::vector<Scalar>& u,
                                               const std::vector<std::vector<long>>& words,
                                               const WitnessOptions& opts = {});

struct TreeNode {
    Subspace<Complex> numeric;
    std::optional<Subspace<Scalar>> exact;
    std::vector<std::size_t> children;
    /// Length of the longest path from the root.
    std::size_t depth = 0;

    std::size_t dim() const noexcept { return numeric.dim(); }
};

struct InvariantTree {
    /// nodes[0] is the whole space; nodes equal as subspaces are shared.
    std::vector<TreeNode> nodes;
    std::size_t depth = 0;
};

/// Applies invariant_family recursively to the restriction of the group to each H_k.
InvariantTree invariant_tree(const GeneratorSet& group, std::optional<std::size_t> max_depth = std::nullopt,
                             const StructureOptions& opts = {});
InvariantTree invariant_tree(const CommutingFamily& family, std::optional<std::size_t> max_depth = std::nullopt,
                             const StructureOptions& opts = {});

}  // namespace abdyn
