#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <gmpxx.h>
#include <string>

namespace abdyn {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

/// Working precision of newly created Real values, in bits.
unsigned working_precision_bits();

/// RAII guard that changes the working precision for the current scope.
/// Values already constructed keep their precision.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned bits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_digits10_;
};

Real to_real(const mpq_class& q);
Real to_real(const mpz_class& z);

/// Decimal rendering with at most `digits` significant digits (general notation).
std::string to_decimal(const Real& x, int digits = 20);

/// Complex number over Real: the tolerant ("numeric") scalar backend.
class Complex {
public:
    Complex() : re_(0), im_(0) {}
    Complex(Real re, Real im = Real(0)) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(int re) : re_(re), im_(0) {}
    Complex(double re, double im) : re_(re), im_(im) {}

    const Real& real() const noexcept { return re_; }
    const Real& imag() const noexcept { return im_; }

    Complex conj() const { return {re_, -im_}; }
    Real norm() const { return re_ * re_ + im_ * im_; }
    Real abs() const;
    double abs_double() const;
    std::complex<double> to_std() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    Complex operator-() const { return {-re_, -im_}; }
    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }

    /// Exact equality of the floating values (rarely the right test).
    friend bool operator==(const Complex& a, const Complex& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    bool is_exact_zero() const { return re_ == 0 && im_ == 0; }

private:
    Real re_;
    Real im_;
};

}  // namespace abdyn
