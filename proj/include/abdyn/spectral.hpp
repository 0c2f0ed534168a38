#pragma once

// Eigenstructure of commuting families: eigenvalues with multiplicities, the
// finest simultaneous generalized-eigenspace decomposition, conjugate pairing
// over the reals and simultaneous triangularization of single-eigenvalue blocks.
//
// Eigenvalues are computed numerically; whenever a root is recognised as an
// element of the scalar field (verified by exact evaluation of its factor of the
// characteristic polynomial) the subspaces built from it are computed exactly.

#include "abdyn/linalg.hpp"

#include <optional>
#include <vector>

namespace abdyn {

enum class Field { Real, Complex };

const char* to_string(Field field);

struct SpectralOptions {
    /// Relative threshold of tolerant rank decisions.
    double eps = 1e-9;
    /// Cluster radius as a multiple of the spectral scale max(1, max |root|).
    double cluster_factor = 1e-8;
    /// Doubling of the working precision stops here before ClusterAmbiguity is raised.
    unsigned max_precision_bits = 1024;

    LinalgOptions linalg() const { return {eps}; }
};

struct Eigenvalue {
    Complex value;
    /// Set when the eigenvalue lies in the scalar field.
    std::optional<Scalar> exact;
    std::size_t multiplicity = 0;

    bool is_real(double tol) const;
};

/// Eigenvalues sorted by (real part, imaginary part). Multiplicities sum to n and
/// are cross-checked against the dimensions of generalized eigenspaces.
std::vector<Eigenvalue> eigenvalues(const ExactMatrix& a, const SpectralOptions& opts = {});
/// Numeric input: roots of a numerically computed characteristic polynomial,
/// clustered; multiple roots are only as accurate as eps^(1/multiplicity) allows.
std::vector<Eigenvalue> eigenvalues(const NumericMatrix& a, const SpectralOptions& opts = {});

/// Working form of a commuting family: numeric generators always, exact ones
/// when available, and optional candidate eigenvalues per generator (for example
/// inherited from a larger group this family is a restriction of).
struct CommutingFamily {
    Field field = Field::Complex;
    std::size_t n = 0;
    std::vector<NumericMatrix> numeric;
    std::optional<std::vector<ExactMatrix>> exact;
    std::vector<std::vector<Eigenvalue>> candidate_spectra;

    static CommutingFamily from_exact(Field field, std::vector<ExactMatrix> generators);
    static CommutingFamily from_numeric(Field field, std::vector<NumericMatrix> generators);

    std::size_t size() const noexcept { return numeric.size(); }
    bool is_exact() const noexcept { return exact.has_value(); }
};

/// Throws NotAbelian (with the first offending pair) unless all generators commute:
/// exactly on the exact backend, within eps * max(1, |A||B|) otherwise.
void check_commuting(const CommutingFamily& family, const SpectralOptions& opts = {});

struct SpectralBlock {
    NumericMatrix basis;
    std::optional<ExactMatrix> exact_basis;
    /// Eigenvalue of each generator on the block (multiplicity = block dimension).
    std::vector<Eigenvalue> eigenvalues;
    /// Index of the conjugate block (real field only).
    std::optional<std::size_t> partner;

    std::size_t dim() const noexcept { return basis.cols(); }
    bool is_exact() const noexcept { return exact_basis.has_value(); }
};

/// Basis (columns) of ker (A - lambda I)^dim, built by iterated preimages of the kernel.
template <class T>
Matrix<T> generalized_eigenspace(const Matrix<T>& a, const T& lambda, const LinalgOptions& opts = {});

/// Finest decomposition of K^n (computed over C) on which every generator has a
/// single eigenvalue per block. Blocks are invariant and direct-sum to K^n.
std::vector<SpectralBlock> simultaneous_refinement(const CommutingFamily& family, const SpectralOptions& opts = {});

/// A real-invariant piece: one real-eigenvalue block or a pair of conjugate blocks.
struct RealBlockGroup {
    std::vector<std::size_t> members;
    bool conjugate_pair = false;
    /// Real basis of the (sum of the) member subspaces.
    NumericMatrix real_basis;
    std::optional<ExactMatrix> exact_real_basis;
};

/// Matches blocks with non-real eigenvalue maps to their conjugates (sets
/// `partner`). Throws UnmatchedConjugate when some block has no partner.
std::vector<RealBlockGroup> pair_conjugates(std::vector<SpectralBlock>& blocks, const SpectralOptions& opts = {});

struct TriangularForm {
    /// Block-local change of basis P (d x d): P^-1 R P is lower triangular with constant diagonal.
    BasisChange<Complex> change;
    std::optional<BasisChange<Scalar>> exact_change;
    /// The adapted basis in ambient coordinates: block basis * P.
    NumericMatrix adapted_basis;
    std::optional<ExactMatrix> exact_adapted_basis;
    /// P^-1 R P for every generator.
    std::vector<NumericMatrix> triangular;
    std::optional<std::vector<ExactMatrix>> exact_triangular;
    /// Diagonal constant of every generator.
    std::vector<Eigenvalue> mu;
    /// Sizes of the levels of the common-kernel filtration, top level first.
    std::vector<std::size_t> level_sizes;

    bool is_exact() const noexcept { return exact_change.has_value(); }
};

/// Common basis of the block in which every generator is lower triangular with
/// a constant diagonal. The basis lists the top level of the filtration
/// W1 = common kernel of the nilpotent parts, W(j+1) = preimage of Wj, first.
/// Throws NoCommonEigenvector if the filtration stalls.
TriangularForm triangularize_single_eigenvalue(const CommutingFamily& family, const SpectralBlock& block,
                                               const SpectralOptions& opts = {});

/// Restrictions of the generators to a block, in the block basis.
std::vector<NumericMatrix> restrict_family(const CommutingFamily& family, const NumericMatrix& basis,
                                           const LinalgOptions& opts = {});
std::vector<ExactMatrix> restrict_family(const std::vector<ExactMatrix>& generators, const ExactMatrix& basis);

}  // namespace abdyn
