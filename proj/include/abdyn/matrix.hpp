#pragma once

#include "abdyn/errors.hpp"
#include "abdyn/numeric.hpp"
#include "abdyn/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace abdyn {

/// Per-backend operations. Scalar is the exact backend, Complex the tolerant one.
template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Scalar> {
    static constexpr bool exact = true;
    static Scalar zero() { return {}; }
    static Scalar one() { return Scalar(1L); }
    static double magnitude(const Scalar& x) { return x.magnitude(); }
    static bool is_zero(const Scalar& x, double /*threshold*/) { return x.is_zero(); }
    static Scalar conj(const Scalar& x) { return x.conj(); }
    static Scalar real_part(const Scalar& x) { return x.real_part(); }
    static Scalar imag_part(const Scalar& x) { return x.imag_part(); }
    static bool is_real(const Scalar& x, double /*threshold*/) { return x.is_real(); }
    static Complex to_numeric(const Scalar& x) { return x.evaluate(working_precision_bits()); }
    static std::string render(const Scalar& x) { return x.to_string(); }
};

template <>
struct FieldTraits<Complex> {
    static constexpr bool exact = false;
    static Complex zero() { return Complex(); }
    static Complex one() { return Complex(1); }
    static double magnitude(const Complex& x) { return x.abs_double(); }
    static bool is_zero(const Complex& x, double threshold) { return x.abs_double() <= threshold; }
    static Complex conj(const Complex& x) { return x.conj(); }
    static Complex real_part(const Complex& x) { return Complex(x.real()); }
    static Complex imag_part(const Complex& x) { return Complex(x.imag()); }
    static bool is_real(const Complex& x, double threshold) {
        return std::abs(static_cast<double>(x.imag())) <= threshold;
    }
    static Complex to_numeric(const Complex& x) { return x; }
    static std::string render(const Complex& x) {
        return to_decimal(x.real()) + (x.imag() < 0 ? " - " : " + ") + to_decimal(abs(x.imag())) + "*i";
    }
};

/// Dense row-major matrix. Column vectors are n x 1 matrices.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, FieldTraits<T>::zero()) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldTraits<T>::one();
        return m;
    }

    static Matrix column(const std::vector<T>& v) {
        Matrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> col(std::size_t c) const {
        std::vector<T> v;
        v.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
        return v;
    }

    std::vector<T> row(std::size_t r) const {
        return std::vector<T>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }

    void set_col(std::size_t c, const std::vector<T>& v) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix b(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
        return b;
    }

    /// Columns [c0, c0 + n).
    Matrix columns(std::size_t c0, std::size_t n) const { return block(0, c0, rows_, n); }

    Matrix hconcat(const Matrix& o) const {
        if (o.rows_ != rows_ && !(empty() || o.empty())) throw DimensionMismatch("hconcat row mismatch");
        if (cols_ == 0) return o;
        if (o.cols_ == 0) return *this;
        Matrix m(rows_, cols_ + o.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
            for (std::size_t c = 0; c < o.cols_; ++c) m(r, cols_ + c) = o(r, c);
        }
        return m;
    }

    Matrix vconcat(const Matrix& o) const {
        if (rows_ == 0) return o;
        if (o.rows_ == 0) return *this;
        if (o.cols_ != cols_) throw DimensionMismatch("vconcat column mismatch");
        Matrix m(rows_ + o.rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
        for (std::size_t r = 0; r < o.rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(rows_ + r, c) = o(r, c);
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (FieldTraits<T>::exact && FieldTraits<T>::is_zero(aik, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
            }
        }
        return m;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
        std::vector<T> out(rows_, FieldTraits<T>::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
        return out;
    }

    /// Largest entry magnitude, as a double.
    double max_abs() const {
        double m = 0;
        for (const auto& x : data_) m = std::max(m, FieldTraits<T>::magnitude(x));
        return m;
    }

    Matrix conj() const {
        Matrix m = *this;
        for (auto& x : m.data_) x = FieldTraits<T>::conj(x);
        return m;
    }
    Matrix real_part() const {
        Matrix m = *this;
        for (auto& x : m.data_) x = FieldTraits<T>::real_part(x);
        return m;
    }
    Matrix imag_part() const {
        Matrix m = *this;
        for (auto& x : m.data_) x = FieldTraits<T>::imag_part(x);
        return m;
    }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    void check_same(const Matrix& o) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionMismatch("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ExactMatrix = Matrix<Scalar>;
using NumericMatrix = Matrix<Complex>;

inline NumericMatrix to_numeric(const ExactMatrix& m) {
    NumericMatrix out(m.rows(), m.cols());
    const unsigned bits = working_precision_bits();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).evaluate(bits);
    return out;
}

inline NumericMatrix to_numeric(const NumericMatrix& m) { return m; }

inline std::vector<Complex> to_numeric(const std::vector<Scalar>& v) {
    std::vector<Complex> out;
    out.reserve(v.size());
    const unsigned bits = working_precision_bits();
    for (const auto& x : v) out.push_back(x.evaluate(bits));
    return out;
}

inline std::vector<Complex> to_numeric(const std::vector<Complex>& v) { return v; }

/// Vector infinity norm.
template <class T>
double max_abs(const std::vector<T>& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, FieldTraits<T>::magnitude(x));
    return m;
}

/// Integer power by repeated squaring; negative exponents use the given inverse.
template <class T>
Matrix<T> matrix_power(const Matrix<T>& a, const Matrix<T>& a_inverse, long exponent) {
    Matrix<T> base = exponent < 0 ? a_inverse : a;
    unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
    Matrix<T> result = Matrix<T>::identity(a.rows());
    while (e > 0) {
        if (e & 1UL) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

}  // namespace abdyn
