#include "abdyn/numeric.hpp"

#include <cmath>
#include <sstream>

namespace abdyn {

namespace {

unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

struct DefaultPrecision {
    DefaultPrecision() { Real::default_precision(bits_to_digits10(128)); }
};
const DefaultPrecision default_precision_init;

}  // namespace

unsigned working_precision_bits() {
    return static_cast<unsigned>(std::floor((Real::default_precision() - 1) / 0.30102999566398120));
}

ScopedPrecision::ScopedPrecision(unsigned bits) : saved_digits10_(Real::default_precision()) {
    Real::default_precision(bits_to_digits10(bits));
}

ScopedPrecision::~ScopedPrecision() { Real::default_precision(saved_digits10_); }

Real to_real(const mpq_class& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real to_real(const mpz_class& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

std::string to_decimal(const Real& x, int digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

Real Complex::abs() const {
    return boost::multiprecision::sqrt(norm());
}

double Complex::abs_double() const {
    return std::hypot(static_cast<double>(re_), static_cast<double>(im_));
}

Complex& Complex::operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Complex& Complex::operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Complex& Complex::operator*=(const Complex& o) {
    Real re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
}

Complex& Complex::operator/=(const Complex& o) {
    const Real d = o.norm();
    Real re = (re_ * o.re_ + im_ * o.im_) / d;
    im_ = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(re);
    return *this;
}

}  // namespace abdyn
