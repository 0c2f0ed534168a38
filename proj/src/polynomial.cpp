#include "abdyn/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace abdyn {

namespace {

template <class T>
void trim(Polynomial<T>& p) {
    while (!p.empty()) {
        if constexpr (FieldTraits<T>::exact) {
            if (!p.back().is_zero()) break;
        } else {
            if (!p.back().is_exact_zero()) break;
        }
        p.pop_back();
    }
}

template <class T>
Polynomial<T> faddeev_leverrier(const Matrix<T>& a) {
    if (!a.is_square()) throw DimensionMismatch("characteristic polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    Polynomial<T> c(n + 1, FieldTraits<T>::zero());
    c[n] = FieldTraits<T>::one();
    Matrix<T> m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<T> next = a * m;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        m = std::move(next);
        const Matrix<T> am = a * m;
        T trace = FieldTraits<T>::zero();
        for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
        if constexpr (FieldTraits<T>::exact) {
            c[n - k] = -(trace * Scalar(mpq_class(1, static_cast<long>(k))));
        } else {
            c[n - k] = -(trace / Complex(static_cast<int>(k)));
        }
    }
    return c;
}

Complex horner(const Polynomial<Complex>& p, const Complex& x, Complex* deriv) {
    Complex value;
    Complex d;
    for (std::size_t i = p.size(); i-- > 0;) {
        if (deriv) d = d * x + value;
        value = value * x + p[i];
    }
    if (deriv) *deriv = d;
    return value;
}

}  // namespace

Polynomial<Scalar> characteristic_polynomial(const ExactMatrix& a) { return faddeev_leverrier(a); }
Polynomial<Complex> characteristic_polynomial(const NumericMatrix& a) { return faddeev_leverrier(a); }

Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
    Polynomial<Scalar> d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Scalar(static_cast<long>(i)));
    trim(d);
    return d;
}

std::pair<Polynomial<Scalar>, Polynomial<Scalar>> divide(const Polynomial<Scalar>& num, const Polynomial<Scalar>& den) {
    Polynomial<Scalar> d = den;
    trim(d);
    if (d.empty()) throw DomainError("polynomial division by zero");
    Polynomial<Scalar> r = num;
    trim(r);
    if (r.size() < d.size()) return {{}, r};
    Polynomial<Scalar> q(r.size() - d.size() + 1);
    const Scalar lead_inv = d.back().inverse();
    for (std::size_t k = q.size(); k-- > 0;) {
        const Scalar coef = r[k + d.size() - 1] * lead_inv;
        q[k] = coef;
        if (coef.is_zero()) continue;
        for (std::size_t j = 0; j < d.size(); ++j) r[k + j] -= coef * d[j];
    }
    r.resize(d.size() - 1);
    trim(r);
    trim(q);
    return {q, r};
}

Polynomial<Scalar> make_monic(Polynomial<Scalar> p) {
    trim(p);
    if (p.empty()) return p;
    const Scalar inv = p.back().inverse();
    for (auto& c : p) c *= inv;
    return p;
}

Polynomial<Scalar> gcd(Polynomial<Scalar> a, Polynomial<Scalar> b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divide(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(std::move(a));
}

std::vector<SquarefreeFactor> squarefree_decomposition(const Polynomial<Scalar>& p) {
    std::vector<SquarefreeFactor> out;
    Polynomial<Scalar> f = make_monic(p);
    if (f.size() <= 1) return out;
    const Polynomial<Scalar> fp = derivative(f);
    Polynomial<Scalar> a = gcd(f, fp);
    Polynomial<Scalar> b = divide(f, a).first;
    Polynomial<Scalar> c = divide(fp, a).first;
    Polynomial<Scalar> d = c;
    {
        const auto bp = derivative(b);
        for (std::size_t i = 0; i < std::max(d.size(), bp.size()); ++i) {
            if (i >= d.size()) d.push_back(Scalar());
            if (i < bp.size()) d[i] -= bp[i];
        }
        trim(d);
    }
    for (std::size_t k = 1; b.size() > 1; ++k) {
        a = gcd(b, d);
        if (a.size() > 1) out.push_back({a, k});
        b = divide(b, a).first;
        c = divide(d, a).first;
        const auto bp = derivative(b);
        d = c;
        for (std::size_t i = 0; i < std::max(d.size(), bp.size()); ++i) {
            if (i >= d.size()) d.push_back(Scalar());
            if (i < bp.size()) d[i] -= bp[i];
        }
        trim(d);
    }
    return out;
}

Scalar evaluate(const Polynomial<Scalar>& p, const Scalar& x) {
    Scalar value;
    for (std::size_t i = p.size(); i-- > 0;) value = value * x + p[i];
    return value;
}

Complex evaluate(const Polynomial<Complex>& p, const Complex& x) { return horner(p, x, nullptr); }

std::vector<Complex> polynomial_roots(const Polynomial<Complex>& input) {
    Polynomial<Complex> p = input;
    trim(p);
    if (p.size() < 2) throw DomainError("polynomial_roots: degree must be at least one");
    const Complex lead_inv = Complex(1) / p.back();
    for (auto& c : p) c *= lead_inv;
    const std::size_t deg = p.size() - 1;
    if (deg == 1) return {-p[0]};

    // Start on a circle around the root centroid whose radius bounds the roots.
    const Complex center = -p[deg - 1] / Complex(static_cast<int>(deg));
    double radius = 0;
    for (std::size_t k = 1; k <= deg; ++k) {
        const double mag = p[deg - k].abs_double();
        if (mag > 0) radius = std::max(radius, 2.0 * std::pow(mag, 1.0 / static_cast<double>(k)));
    }
    if (radius == 0) radius = 1;
    std::vector<Complex> z(deg);
    const double pi = std::acos(-1.0);
    for (std::size_t k = 0; k < deg; ++k) {
        const double angle = 2 * pi * static_cast<double>(k) / static_cast<double>(deg) + 0.4;
        z[k] = center + Complex(radius * std::cos(angle), radius * std::sin(angle));
    }

    const unsigned bits = working_precision_bits();
    const double tolerance = std::ldexp(1.0, -static_cast<int>(bits) + 8);
    for (int iter = 0; iter < 2000; ++iter) {
        double max_step = 0;
        for (std::size_t k = 0; k < deg; ++k) {
            Complex dp;
            const Complex value = horner(p, z[k], &dp);
            if (value.is_exact_zero()) continue;
            if (dp.is_exact_zero()) dp = Complex(Real(tolerance));
            const Complex ratio = value / dp;
            Complex repulsion;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j == k) continue;
                const Complex diff = z[k] - z[j];
                if (!diff.is_exact_zero()) repulsion += Complex(1) / diff;
            }
            const Complex denom = Complex(1) - ratio * repulsion;
            const Complex step = denom.is_exact_zero() ? ratio : ratio / denom;
            z[k] -= step;
            max_step = std::max(max_step, step.abs_double() / std::max(1.0, z[k].abs_double()));
        }
        if (max_step <= tolerance) break;
    }

    for (auto& root : z) {
        for (int iter = 0; iter < 4; ++iter) {
            Complex dp;
            const Complex value = horner(p, root, &dp);
            if (value.is_exact_zero() || dp.is_exact_zero()) break;
            const Complex candidate = root - value / dp;
            if (horner(p, candidate, nullptr).abs_double() >= value.abs_double()) break;
            root = candidate;
        }
    }
    return z;
}

}  // namespace abdyn
