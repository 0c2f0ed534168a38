#include "abdyn/linalg.hpp"

#include <limits>

namespace abdyn {

namespace {

template <class T>
using Traits = FieldTraits<T>;

double zero_threshold(const Matrix<Complex>& m, const LinalgOptions& opts) {
    return opts.eps * std::max(m.max_abs(), opts.scale);
}

double zero_threshold(const Matrix<Scalar>&, const LinalgOptions&) { return 0.0; }

Echelon<Scalar> echelon_exact(const Matrix<Scalar>& m) {
    Echelon<Scalar> out{m, {}, 0.0};
    Matrix<Scalar>& e = out.reduced;
    const std::size_t rows = e.rows();
    const std::size_t cols = e.cols();
    Scalar prev_inverse(1L);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && e(p, c).is_zero()) ++p;
        if (p == rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(e(p, j), e(r, j));
        const Scalar pivot = e(r, c);
        for (std::size_t i = r + 1; i < rows; ++i) {
            const Scalar lead = e(i, c);
            for (std::size_t j = c + 1; j < cols; ++j) {
                Scalar v = pivot * e(i, j);
                if (!lead.is_zero()) v -= lead * e(r, j);
                e(i, j) = v * prev_inverse;
            }
            e(i, c) = Scalar();
        }
        prev_inverse = pivot.inverse();
        out.pivots.push_back(c);
        ++r;
    }
    return out;
}

Echelon<Complex> echelon_tolerant(const Matrix<Complex>& m, const LinalgOptions& opts) {
    Echelon<Complex> out{m, {}, zero_threshold(m, opts)};
    Matrix<Complex>& e = out.reduced;
    const std::size_t rows = e.rows();
    const std::size_t cols = e.cols();
    if (out.threshold == 0.0) return out;  // zero matrix
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        double best = -1;
        for (std::size_t i = r; i < rows; ++i) {
            const double mag = e(i, c).abs_double();
            if (mag > best) {
                best = mag;
                p = i;
            }
        }
        if (best <= out.threshold) continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(e(p, j), e(r, j));
        const Complex inv = Complex(1) / e(r, c);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (e(i, c).is_exact_zero()) continue;
            const Complex f = e(i, c) * inv;
            for (std::size_t j = c + 1; j < cols; ++j) e(i, j) -= f * e(r, j);
            e(i, c) = Complex();
        }
        out.pivots.push_back(c);
        ++r;
    }
    return out;
}

}  // namespace

template <class T>
Echelon<T> row_echelon(const Matrix<T>& m, const LinalgOptions& opts) {
    if constexpr (Traits<T>::exact) {
        (void)opts;
        return echelon_exact(m);
    } else {
        return echelon_tolerant(m, opts);
    }
}

template <class T>
std::size_t rank(const Matrix<T>& m, const LinalgOptions& opts) {
    return row_echelon(m, opts).pivots.size();
}

template <class T>
Matrix<T> kernel_basis(const Matrix<T>& m, const LinalgOptions& opts) {
    const std::size_t cols = m.cols();
    const Echelon<T> ech = row_echelon(m, opts);
    const auto& e = ech.reduced;
    const auto& piv = ech.pivots;
    std::vector<bool> is_pivot(cols, false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<T> pivot_inverse;
    pivot_inverse.reserve(piv.size());
    for (std::size_t k = 0; k < piv.size(); ++k) {
        if constexpr (Traits<T>::exact) {
            pivot_inverse.push_back(e(k, piv[k]).inverse());
        } else {
            pivot_inverse.push_back(Complex(1) / e(k, piv[k]));
        }
    }
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> x(cols, Traits<T>::zero());
        x[f] = Traits<T>::one();
        for (std::size_t k = piv.size(); k-- > 0;) {
            T acc = Traits<T>::zero();
            for (std::size_t j = piv[k] + 1; j < cols; ++j) {
                if constexpr (Traits<T>::exact) {
                    if (x[j].is_zero() || e(k, j).is_zero()) continue;
                }
                acc += e(k, j) * x[j];
            }
            x[piv[k]] = -(acc * pivot_inverse[k]);
        }
        if constexpr (!Traits<T>::exact) {
            const double scale = max_abs(x);
            const Complex inv(Real(1) / Real(scale));
            for (auto& v : x) v *= inv;
        }
        basis.push_back(std::move(x));
    }
    return Matrix<T>::from_columns(basis, cols);
}

template <class T>
std::vector<std::size_t> independent_columns(const Matrix<T>& m, const LinalgOptions& opts) {
    return row_echelon(m, opts).pivots;
}

template <class T>
Matrix<T> select_columns(const Matrix<T>& m, const std::vector<std::size_t>& cols) {
    Matrix<T> out(m.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, cols[j]);
    return out;
}

template <class T>
T determinant(const Matrix<T>& m) {
    if (!m.is_square()) throw DimensionMismatch("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return Traits<T>::one();
    if constexpr (Traits<T>::exact) {
        Matrix<T> e = m;
        Scalar prev_inverse(1L);
        bool negate = false;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && e(p, c).is_zero()) ++p;
            if (p == n) return Scalar();
            if (p != c) {
                negate = !negate;
                for (std::size_t j = 0; j < n; ++j) std::swap(e(p, j), e(c, j));
            }
            const Scalar pivot = e(c, c);
            for (std::size_t i = c + 1; i < n; ++i) {
                const Scalar lead = e(i, c);
                for (std::size_t j = c + 1; j < n; ++j) {
                    Scalar v = pivot * e(i, j);
                    if (!lead.is_zero()) v -= lead * e(c, j);
                    e(i, j) = v * prev_inverse;
                }
                e(i, c) = Scalar();
            }
            prev_inverse = pivot.inverse();
        }
        return negate ? -e(n - 1, n - 1) : e(n - 1, n - 1);
    } else {
        Matrix<T> e = m;
        Complex det(1);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            double best = -1;
            for (std::size_t i = c; i < n; ++i) {
                if (e(i, c).abs_double() > best) {
                    best = e(i, c).abs_double();
                    p = i;
                }
            }
            if (best == 0) return Complex();
            if (p != c) {
                det = -det;
                for (std::size_t j = 0; j < n; ++j) std::swap(e(p, j), e(c, j));
            }
            det *= e(c, c);
            const Complex inv = Complex(1) / e(c, c);
            for (std::size_t i = c + 1; i < n; ++i) {
                const Complex f = e(i, c) * inv;
                for (std::size_t j = c + 1; j < n; ++j) e(i, j) -= f * e(c, j);
            }
        }
        return det;
    }
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m, const LinalgOptions& opts) {
    if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    Matrix<T> a = m;
    Matrix<T> inv = Matrix<T>::identity(n);
    const double threshold = zero_threshold(m, opts);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        if constexpr (Traits<T>::exact) {
            for (std::size_t i = c; i < n; ++i) {
                if (!a(i, c).is_zero()) {
                    p = i;
                    break;
                }
            }
        } else {
            double best = threshold;
            for (std::size_t i = c; i < n; ++i) {
                if (a(i, c).abs_double() > best) {
                    best = a(i, c).abs_double();
                    p = i;
                }
            }
        }
        if (p == n) throw NotInvertible("matrix is singular");
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        }
        T pinv;
        if constexpr (Traits<T>::exact) {
            pinv = a(c, c).inverse();
        } else {
            pinv = Complex(1) / a(c, c);
        }
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= pinv;
            inv(c, j) *= pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c) continue;
            const T f = a(i, c);
            if constexpr (Traits<T>::exact) {
                if (f.is_zero()) continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <class T>
SolveResult<T> solve_in_basis(const Matrix<T>& basis, const Matrix<T>& rhs, const LinalgOptions& opts) {
    const std::size_t n = basis.rows();
    const std::size_t d = basis.cols();
    const std::size_t k = rhs.cols();
    if (rhs.rows() != n) throw DimensionMismatch("solve_in_basis: row mismatch");
    Matrix<T> a = basis.hconcat(rhs);
    if (d == 0) {
        SolveResult<T> out{Matrix<T>(0, k), std::vector<double>(k, 0.0)};
        for (std::size_t j = 0; j < k; ++j) out.residuals[j] = max_abs(rhs.col(j));
        return out;
    }
    const double threshold = zero_threshold(basis, opts);
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = n;
        if constexpr (Traits<T>::exact) {
            for (std::size_t i = c; i < n; ++i) {
                if (!a(i, c).is_zero()) {
                    p = i;
                    break;
                }
            }
        } else {
            double best = threshold;
            for (std::size_t i = c; i < n; ++i) {
                if (a(i, c).abs_double() > best) {
                    best = a(i, c).abs_double();
                    p = i;
                }
            }
        }
        if (p == n) throw DomainError("solve_in_basis: basis columns are dependent");
        if (p != c)
            for (std::size_t j = 0; j < d + k; ++j) std::swap(a(p, j), a(c, j));
        T pinv;
        if constexpr (Traits<T>::exact) {
            pinv = a(c, c).inverse();
        } else {
            pinv = Complex(1) / a(c, c);
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            const T f = a(i, c) * pinv;
            if constexpr (Traits<T>::exact) {
                if (f.is_zero()) continue;
            }
            for (std::size_t j = c; j < d + k; ++j) a(i, j) -= f * a(c, j);
        }
    }
    Matrix<T> x(d, k);
    for (std::size_t col = 0; col < k; ++col) {
        for (std::size_t r = d; r-- > 0;) {
            T acc = a(r, d + col);
            for (std::size_t j = r + 1; j < d; ++j) acc -= a(r, j) * x(j, col);
            if constexpr (Traits<T>::exact) {
                x(r, col) = acc * a(r, r).inverse();
            } else {
                x(r, col) = acc / a(r, r);
            }
        }
    }
    const Matrix<T> residual = basis * x - rhs;
    SolveResult<T> out{std::move(x), std::vector<double>(k, 0.0)};
    for (std::size_t col = 0; col < k; ++col) {
        double r = 0;
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i) {
            r = std::max(r, Traits<T>::magnitude(residual(i, col)));
            if constexpr (Traits<T>::exact) nonzero = nonzero || !residual(i, col).is_zero();
        }
        if (nonzero && r == 0) r = std::numeric_limits<double>::denorm_min();
        out.residuals[col] = r;
    }
    return out;
}

template <class T>
double invariance_tolerance(const Matrix<T>& a, const std::vector<T>& v, const LinalgOptions& opts) {
    if constexpr (Traits<T>::exact) {
        (void)a;
        (void)v;
        (void)opts;
        return 0.0;
    } else {
        const double n = static_cast<double>(std::max<std::size_t>(1, a.rows()));
        return opts.eps * std::max(1.0, a.max_abs()) * std::max(1.0, max_abs(v)) * n;
    }
}

template <class T>
Matrix<T> restrict_to(const Matrix<T>& a, const Matrix<T>& basis, const LinalgOptions& opts) {
    const SolveResult<T> s = solve_in_basis(basis, a * basis, opts);
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        if (s.residuals[j] > invariance_tolerance(a, basis.col(j), opts)) throw NotInvariant(j, s.residuals[j]);
    }
    return s.solution;
}

template <class T>
Subspace<T> Subspace<T>::from_basis(Matrix<T> basis, const LinalgOptions& opts) {
    if (basis.cols() > 0 && rank(basis, opts) != basis.cols())
        throw DomainError("subspace basis columns are dependent");
    Subspace<T> s;
    s.ambient_ = basis.rows();
    s.basis_ = std::move(basis);
    return s;
}

template <class T>
Subspace<T> Subspace<T>::span(const Matrix<T>& spanning, const LinalgOptions& opts) {
    Subspace<T> s;
    s.ambient_ = spanning.rows();
    s.basis_ = select_columns(spanning, independent_columns(spanning, opts));
    if (s.basis_.cols() == 0) s.basis_ = Matrix<T>(spanning.rows(), 0);
    return s;
}

template <class T>
bool Subspace<T>::contains(const std::vector<T>& v, const LinalgOptions& opts) const {
    if (v.size() != ambient_) throw DimensionMismatch("subspace membership: dimension mismatch");
    if (dim() == 0) {
        if constexpr (Traits<T>::exact) {
            return std::all_of(v.begin(), v.end(), [](const T& x) { return x.is_zero(); });
        } else {
            return max_abs(v) <= opts.eps;
        }
    }
    const SolveResult<T> s = solve_in_basis(basis_, Matrix<T>::column(v), opts);
    if constexpr (Traits<T>::exact) {
        return s.residuals[0] == 0.0;
    } else {
        return s.residuals[0] <= opts.eps * std::max(1.0, max_abs(v)) * static_cast<double>(ambient_);
    }
}

template <class T>
bool Subspace<T>::contains(const Subspace& other, const LinalgOptions& opts) const {
    for (std::size_t j = 0; j < other.dim(); ++j)
        if (!contains(other.basis().col(j), opts)) return false;
    return true;
}

template <class T>
SumIntersection<T> sum_intersection(const Subspace<T>& u, const Subspace<T>& v, const LinalgOptions& opts) {
    if (u.ambient_dim() != v.ambient_dim()) throw DimensionMismatch("sum_intersection: ambient mismatch");
    const std::size_t n = u.ambient_dim();
    const Matrix<T> stacked = u.basis().hconcat(v.basis());
    SumIntersection<T> out;
    out.sum = stacked.cols() == 0 ? Subspace<T>(n) : Subspace<T>::span(stacked, opts);
    if (u.dim() == 0 || v.dim() == 0) {
        out.intersection = Subspace<T>(n);
        return out;
    }
    Matrix<T> neg_v = v.basis();
    neg_v *= -Traits<T>::one();
    const Matrix<T> coeffs = kernel_basis(u.basis().hconcat(neg_v), opts);
    if (coeffs.cols() == 0) {
        out.intersection = Subspace<T>(n);
        return out;
    }
    const Matrix<T> vectors = u.basis() * coeffs.block(0, 0, u.dim(), coeffs.cols());
    out.intersection = Subspace<T>::span(vectors, opts);
    return out;
}

template <class T>
Matrix<T> realify_basis(const Matrix<T>& basis, const LinalgOptions& opts) {
    const std::size_t n = basis.rows();
    Matrix<T> stacked(n, 2 * basis.cols());
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            stacked(i, 2 * j) = Traits<T>::real_part(basis(i, j));
            stacked(i, 2 * j + 1) = Traits<T>::imag_part(basis(i, j));
        }
    }
    auto cols = independent_columns(stacked, opts);
    if (cols.size() > basis.cols()) cols.resize(basis.cols());
    return select_columns(stacked, cols);
}

template <class T>
bool is_s_form(const Matrix<T>& m, const LinalgOptions& opts) {
    if (!m.is_square()) return false;
    const std::size_t n = m.rows();
    const double tol = Traits<T>::exact ? 0.0 : opts.eps * std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j)
            if (!Traits<T>::is_zero(m(i, j), tol)) return false;
        if (!Traits<T>::is_zero(m(i, i) - m(0, 0), tol)) return false;
    }
    return true;
}

#define ABDYN_INSTANTIATE_LINALG(T)                                                                  \
    template Echelon<T> row_echelon(const Matrix<T>&, const LinalgOptions&);                         \
    template std::size_t rank(const Matrix<T>&, const LinalgOptions&);                               \
    template Matrix<T> kernel_basis(const Matrix<T>&, const LinalgOptions&);                         \
    template std::vector<std::size_t> independent_columns(const Matrix<T>&, const LinalgOptions&);   \
    template Matrix<T> select_columns(const Matrix<T>&, const std::vector<std::size_t>&);            \
    template T determinant(const Matrix<T>&);                                                        \
    template Matrix<T> inverse(const Matrix<T>&, const LinalgOptions&);                              \
    template SolveResult<T> solve_in_basis(const Matrix<T>&, const Matrix<T>&, const LinalgOptions&); \
    template double invariance_tolerance(const Matrix<T>&, const std::vector<T>&, const LinalgOptions&); \
    template Matrix<T> restrict_to(const Matrix<T>&, const Matrix<T>&, const LinalgOptions&);        \
    template class Subspace<T>;                                                                      \
    template SumIntersection<T> sum_intersection(const Subspace<T>&, const Subspace<T>&,             \
                                                 const LinalgOptions&);                              \
    template Matrix<T> realify_basis(const Matrix<T>&, const LinalgOptions&);                        \
    template bool is_s_form(const Matrix<T>&, const LinalgOptions&);

ABDYN_INSTANTIATE_LINALG(Scalar)
ABDYN_INSTANTIATE_LINALG(Complex)

}  // namespace abdyn
