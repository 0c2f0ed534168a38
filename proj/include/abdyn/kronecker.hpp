#pragma once

// Exact closure decisions for finitely generated subgroups Z v_1 + ... + Z v_k of R^d
// with entries in the radical field.
//
// Let A be the d x k matrix with columns v_i, r its rank and W its row space in R^k.
// Integer vectors t in W are exactly the values (phi(v_1), ..., phi(v_k)) of linear
// functionals phi taking integer values on the group, and the closure of the group
// is the common integer level set of those functionals. With m = dim_Q (W cap Q^k),
// the identity component of the closure has dimension r - m: the group is dense when
// r = d and m = 0, and closed (discrete) when m = r. For k = d + 1 and r = d the
// condition m = 0 says that det(A; s) never vanishes for nonzero integer rows s.

#include "abdyn/scalar.hpp"

#include <optional>
#include <vector>

namespace abdyn {

struct LatticeSpec {
    /// Generators v_1..v_k, each of length d, with real entries.
    std::vector<std::vector<Scalar>> vectors;

    std::size_t count() const noexcept { return vectors.size(); }
    std::size_t dimension() const noexcept { return vectors.empty() ? 0 : vectors.front().size(); }
};

/// Builds a spec from rows of scalar expressions.
LatticeSpec lattice_spec(const std::vector<std::vector<std::string>>& rows);

/// Integer vectors s spanning (over Q) all relations sum s_i v_i = 0, each primitive
/// with a positive first nonzero entry. Throws DomainError, DimensionMismatch or NonRealInput
/// for malformed specs.
std::vector<std::vector<mpz_class>> integer_relations(const LatticeSpec& spec);
/// First element of integer_relations, or nothing when the v_i are independent over Z.
std::optional<std::vector<mpz_class>> integer_relation(const LatticeSpec& spec);

enum class LatticeClosure { Closed, Dense, DenseInProperSubgroup };

const char* to_string(LatticeClosure kind);

struct LatticeDecision {
    LatticeClosure kind = LatticeClosure::Closed;
    /// Rank r of the generators over R.
    std::size_t real_rank = 0;
    /// m = dim_Q of the rational vectors in the row space.
    std::size_t dual_rank = 0;
    /// Dimension r - m of the identity component of the closure.
    std::size_t closure_dimension = 0;
    /// Integer vectors t = (phi(v_i)) spanning the rational part of the row space.
    std::vector<std::vector<mpz_class>> dual_relations;
    /// Integer relations among the generators.
    std::vector<std::vector<mpz_class>> relations;
    /// Rational system whose null space is the rational part of the row space: one
    /// row per (null vector of A, radical key), one column per generator. Full column
    /// rank certifies that no nonzero integer functional exists.
    RationalMatrix certificate;
    std::size_t certificate_rank = 0;
};

/// Throws UnsupportedDimension for d > 3, plus the errors of integer_relations.
LatticeDecision dense_in(const LatticeSpec& spec);

/// det of the (d+1) x (d+1) matrix whose first d rows are the coordinates of the
/// generators and whose last row is s. Requires k = d + 1.
Scalar delta_determinant(const LatticeSpec& spec, const std::vector<long>& s);

}  // namespace abdyn
