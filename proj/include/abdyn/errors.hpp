#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abdyn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnsupportedRadical : public ParseError {
public:
    using ParseError::ParseError;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NonRealInput : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

class NotAbelian : public Error {
public:
    NotAbelian(std::size_t first, std::size_t second, double commutator_norm)
        : Error("generators " + std::to_string(first) + " and " + std::to_string(second) +
                " do not commute (max |AB-BA| = " + std::to_string(commutator_norm) + ")"),
          first_(first), second_(second), norm_(commutator_norm) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }
    double commutator_norm() const noexcept { return norm_; }

private:
    std::size_t first_;
    std::size_t second_;
    double norm_;
};

class NotInvertible : public DomainError {
public:
    using DomainError::DomainError;
};

class NotInvariant : public Error {
public:
    NotInvariant(std::size_t column, double residual)
        : Error("basis vector " + std::to_string(column) +
                " leaves the subspace (residual " + std::to_string(residual) + ")"),
          column_(column), residual_(residual) {}

    std::size_t column() const noexcept { return column_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t column_;
    double residual_;
};

/// Failures caused by floating-point clustering or tolerances; the CLI maps
/// all of these to exit code 3.
class NumericAmbiguity : public Error {
public:
    using Error::Error;
};

class ClusterAmbiguity : public NumericAmbiguity {
public:
    using NumericAmbiguity::NumericAmbiguity;
};

class UnmatchedConjugate : public NumericAmbiguity {
public:
    using NumericAmbiguity::NumericAmbiguity;
};

class NoCommonEigenvector : public NumericAmbiguity {
public:
    using NumericAmbiguity::NumericAmbiguity;
};

class InvarianceViolation : public Error {
public:
    using Error::Error;
};

class NotSForm : public DomainError {
public:
    using DomainError::DomainError;
};

class NotConvergent : public Error {
public:
    using Error::Error;
};

class FirstCoordinateZero : public DomainError {
public:
    using DomainError::DomainError;
};

class PointNotInU : public DomainError {
public:
    using DomainError::DomainError;
};

class NoProgress : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace abdyn
