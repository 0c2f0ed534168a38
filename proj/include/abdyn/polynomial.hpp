#pragma once

// Univariate polynomials with coefficients in ascending degree order.

#include "abdyn/matrix.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace abdyn {

template <class T>
using Polynomial = std::vector<T>;

/// Characteristic polynomial det(xI - A), monic, by the Faddeev-LeVerrier recurrence.
Polynomial<Scalar> characteristic_polynomial(const ExactMatrix& a);
Polynomial<Complex> characteristic_polynomial(const NumericMatrix& a);

Polynomial<Scalar> derivative(const Polynomial<Scalar>& p);
/// Quotient and remainder; throws DomainError on a zero divisor.
std::pair<Polynomial<Scalar>, Polynomial<Scalar>> divide(const Polynomial<Scalar>& num, const Polynomial<Scalar>& den);
/// Monic greatest common divisor.
Polynomial<Scalar> gcd(Polynomial<Scalar> a, Polynomial<Scalar> b);
Polynomial<Scalar> make_monic(Polynomial<Scalar> p);

struct SquarefreeFactor {
    Polynomial<Scalar> factor;  // monic, squarefree, degree >= 1
    std::size_t multiplicity;
};

/// Yun's algorithm: p = lc * prod factor^multiplicity with pairwise coprime factors.
std::vector<SquarefreeFactor> squarefree_decomposition(const Polynomial<Scalar>& p);

Scalar evaluate(const Polynomial<Scalar>& p, const Scalar& x);
Complex evaluate(const Polynomial<Complex>& p, const Complex& x);

/// All complex roots of a polynomial of degree >= 1 by Aberth-Ehrlich iteration
/// at the working precision, followed by Newton polishing. Multiple roots converge
/// at reduced accuracy; callers cluster them.
std::vector<Complex> polynomial_roots(const Polynomial<Complex>& p);

}  // namespace abdyn
