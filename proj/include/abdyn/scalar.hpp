#pragma once

// Exact arithmetic in Q(sqrt(d1), ..., sqrt(dm), i).
//
// A Scalar is a finite sum of terms q * i^e * sqrt(d) with q rational,
// e in {0, 1} and d a squarefree positive integer (d = 1 is the rational
// part). Zero coefficients are never stored, so two Scalars are equal iff
// their term maps coincide.

#include "abdyn/numeric.hpp"

#include <compare>
#include <complex>
#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace abdyn {

struct RadicalKey {
    std::uint64_t radicand = 1;
    bool imaginary = false;

    auto operator<=>(const RadicalKey&) const = default;
};

class Scalar {
public:
    using TermMap = std::map<RadicalKey, mpq_class>;

    Scalar() = default;
    Scalar(long value);
    Scalar(const mpq_class& value);

    /// sqrt(k) in canonical form, e.g. sqrt(8) = 2*sqrt(2).
    static Scalar sqrt(std::uint64_t k);
    static Scalar imaginary_unit();
    static Scalar from_term(const RadicalKey& key, const mpq_class& coefficient);

    const TermMap& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_real() const;
    bool is_rational() const;
    std::optional<mpq_class> as_rational() const;

    Scalar conj() const;
    Scalar real_part() const;
    /// Imaginary part as a real Scalar (so x = re + i * im).
    Scalar imag_part() const;
    /// Image under sqrt(p) -> -sqrt(p) for a prime p.
    Scalar flip_prime(std::uint64_t p) const;
    /// Primes dividing some radicand, ascending.
    std::vector<std::uint64_t> primes() const;

    /// Multiplicative inverse by repeated conjugation; throws on zero.
    Scalar inverse() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }

    /// Canonical expression string; parse_scalar(to_string()) == *this.
    std::string to_string() const;

    /// Numeric value with absolute error below 2^(1 - bits).
    Complex evaluate(unsigned bits) const;
    std::complex<double> to_complex() const;
    double magnitude() const { return std::abs(to_complex()); }

private:
    void add_term(const RadicalKey& key, const mpq_class& coefficient);

    TermMap terms_;
};

/// Parses integers, '/', '+', '-', '*', parentheses, sqrt(k) for a
/// non-negative integer k, and i.
Scalar parse_scalar(std::string_view text);

// Rational matrices (row-major, vector of rows) used for Q-linear questions.
using RationalMatrix = std::vector<std::vector<mpq_class>>;

std::size_t rational_rank(RationalMatrix m);
/// Basis of the right null space.
std::vector<std::vector<mpq_class>> rational_kernel(RationalMatrix m);
/// Scales a rational vector to coprime integers whose first nonzero entry is positive.
std::vector<mpz_class> primitive_integer_vector(const std::vector<mpq_class>& v);

/// Coefficient matrix of the values over the radical basis they span:
/// one row per radical key, one column per value.
RationalMatrix coefficient_matrix(std::span<const Scalar> values,
                                  std::vector<RadicalKey>* keys = nullptr);

struct IndependenceCertificate {
    bool independent = false;
    /// Rank of the coefficient matrix over Q.
    std::size_t rank = 0;
    /// Radical keys spanning the values (rows of the coefficient matrix).
    std::vector<RadicalKey> basis;
    /// Nonzero integer relation sum relation[i] * values[i] = 0 when dependent.
    std::vector<mpz_class> relation;
};

/// Decides Q-linear independence exactly; throws NonRealInput for non-real values.
IndependenceCertificate is_rationally_independent(std::span<const Scalar> values);

std::string to_string(const RadicalKey& key);

}  // namespace abdyn
