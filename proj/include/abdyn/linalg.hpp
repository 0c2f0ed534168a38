#pragma once

// Rank, kernels, restriction and subspace arithmetic over both backends.
//
// Exact matrices (Scalar) are reduced with fraction-free Bareiss elimination.
// Tolerant matrices (Complex) use partial pivoting; a column counts as zero
// when its best pivot is at most eps * max(largest entry magnitude, opts.scale).

#include "abdyn/matrix.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace abdyn {

struct LinalgOptions {
    /// Relative threshold of the tolerant backend (ignored by the exact one).
    double eps = 1e-9;
    /// Lower bound on the magnitude the threshold is relative to. Used for derived
    /// matrices such as A - lambda I, whose own entries may all be tiny.
    double scale = 0;
};

template <class T>
struct Echelon {
    Matrix<T> reduced;                 // row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
    double threshold = 0;              // absolute zero threshold used (0 when exact)
};

template <class T>
Echelon<T> row_echelon(const Matrix<T>& m, const LinalgOptions& opts = {});

template <class T>
std::size_t rank(const Matrix<T>& m, const LinalgOptions& opts = {});

/// Null space basis as the columns of a cols(m) x k matrix.
template <class T>
Matrix<T> kernel_basis(const Matrix<T>& m, const LinalgOptions& opts = {});

/// Indices of a maximal set of independent columns, chosen greedily left to right.
template <class T>
std::vector<std::size_t> independent_columns(const Matrix<T>& m, const LinalgOptions& opts = {});

template <class T>
Matrix<T> select_columns(const Matrix<T>& m, const std::vector<std::size_t>& cols);

template <class T>
T determinant(const Matrix<T>& m);

/// Throws NotInvertible for singular input (exactly singular, or below threshold).
template <class T>
Matrix<T> inverse(const Matrix<T>& m, const LinalgOptions& opts = {});

template <class T>
struct SolveResult {
    Matrix<T> solution;
    /// Per-column max-norm of basis * solution - rhs.
    std::vector<double> residuals;
};

/// Solves basis * X = rhs for a basis with independent columns, reporting residuals
/// (the system may be inconsistent; callers decide what residual is acceptable).
template <class T>
SolveResult<T> solve_in_basis(const Matrix<T>& basis, const Matrix<T>& rhs, const LinalgOptions& opts = {});

/// Subspace of K^n given by an independent basis (columns).
template <class T>
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(ambient, 0) {}

    /// Basis columns must be independent (checked).
    static Subspace from_basis(Matrix<T> basis, const LinalgOptions& opts = {});
    /// Extracts an independent subset of the spanning columns.
    static Subspace span(const Matrix<T>& spanning, const LinalgOptions& opts = {});
    static Subspace whole(std::size_t n) { return from_basis(Matrix<T>::identity(n)); }

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.cols(); }
    const Matrix<T>& basis() const noexcept { return basis_; }

    bool contains(const std::vector<T>& v, const LinalgOptions& opts = {}) const;
    bool contains(const Subspace& other, const LinalgOptions& opts = {}) const;
    bool same_as(const Subspace& other, const LinalgOptions& opts = {}) const {
        return dim() == other.dim() && contains(other, opts);
    }

private:
    std::size_t ambient_ = 0;
    Matrix<T> basis_;
};

template <class T>
Subspace<T> kernel(const Matrix<T>& m, const LinalgOptions& opts = {}) {
    return Subspace<T>::from_basis(kernel_basis(m, opts), opts);
}

/// Matrix of A restricted to the A-invariant span of `basis`, in that basis:
/// basis * result = A * basis. Throws NotInvariant if some A * h leaves the span.
template <class T>
Matrix<T> restrict_to(const Matrix<T>& a, const Matrix<T>& basis, const LinalgOptions& opts = {});

/// Absolute residual tolerance used for invariance checks of A on vector v.
template <class T>
double invariance_tolerance(const Matrix<T>& a, const std::vector<T>& v, const LinalgOptions& opts);

template <class T>
struct SumIntersection {
    Subspace<T> sum;
    Subspace<T> intersection;
};

template <class T>
SumIntersection<T> sum_intersection(const Subspace<T>& u, const Subspace<T>& v, const LinalgOptions& opts = {});

/// Invertible change of basis with cached inverse.
template <class T>
class BasisChange {
public:
    BasisChange() = default;
    explicit BasisChange(Matrix<T> p, const LinalgOptions& opts = {})
        : p_(std::move(p)), p_inv_(inverse(p_, opts)) {}

    const Matrix<T>& matrix() const noexcept { return p_; }
    const Matrix<T>& inverse_matrix() const noexcept { return p_inv_; }

    /// P^-1 * A * P.
    Matrix<T> conjugate(const Matrix<T>& a) const { return p_inv_ * a * p_; }

private:
    Matrix<T> p_;
    Matrix<T> p_inv_;
};

/// Stacks the columns of the real and imaginary parts and keeps an independent
/// subset: a real basis of a conjugation-invariant subspace.
template <class T>
Matrix<T> realify_basis(const Matrix<T>& basis, const LinalgOptions& opts = {});

/// True iff the matrix is lower triangular with a constant diagonal (exact, or within eps * scale).
template <class T>
bool is_s_form(const Matrix<T>& m, const LinalgOptions& opts = {});

}  // namespace abdyn
