#include "abdyn/scalar.hpp"

#include "abdyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

namespace abdyn {

namespace {

struct SquareSplit {
    std::uint64_t square_root = 1;  // s in k = s^2 * d
    std::uint64_t squarefree = 1;   // d
};

SquareSplit split_square(std::uint64_t k) {
    SquareSplit out;
    for (std::uint64_t p = 2; p <= k / p; ++p) {
        unsigned e = 0;
        while (k % p == 0) {
            k /= p;
            ++e;
        }
        for (unsigned j = 0; j < e / 2; ++j) out.square_root *= p;
        if (e % 2 == 1) out.squarefree *= p;
    }
    if (k > 1) out.squarefree *= k;
    return out;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t k) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= k / p; ++p) {
        if (k % p == 0) {
            out.push_back(p);
            while (k % p == 0) k /= p;
        }
    }
    if (k > 1) out.push_back(k);
    return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw DomainError("radicand overflow in product");
    return r;
}

}  // namespace

Scalar::Scalar(long value) {
    if (value != 0) terms_.emplace(RadicalKey{}, mpq_class(value));
}

Scalar::Scalar(const mpq_class& value) {
    mpq_class c = value;
    c.canonicalize();
    if (c != 0) terms_.emplace(RadicalKey{}, std::move(c));
}

Scalar Scalar::sqrt(std::uint64_t k) {
    if (k == 0) return {};
    const SquareSplit s = split_square(k);
    return from_term(RadicalKey{s.squarefree, false}, mpq_class(mpz_class(std::to_string(s.square_root))));
}

Scalar Scalar::imaginary_unit() { return from_term(RadicalKey{1, true}, mpq_class(1)); }

Scalar Scalar::from_term(const RadicalKey& key, const mpq_class& coefficient) {
    mpq_class c = coefficient;
    c.canonicalize();
    Scalar s;
    s.add_term(key, c);
    return s;
}

void Scalar::add_term(const RadicalKey& key, const mpq_class& coefficient) {
    if (coefficient == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Scalar::is_real() const {
    return std::none_of(terms_.begin(), terms_.end(),
                        [](const auto& t) { return t.first.imaginary; });
}

bool Scalar::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == RadicalKey{});
}

std::optional<mpq_class> Scalar::as_rational() const {
    if (terms_.empty()) return mpq_class(0);
    if (!is_rational()) return std::nullopt;
    return terms_.begin()->second;
}

Scalar Scalar::conj() const {
    Scalar out = *this;
    for (auto& [key, c] : out.terms_)
        if (key.imaginary) c = -c;
    return out;
}

Scalar Scalar::real_part() const {
    Scalar out;
    for (const auto& [key, c] : terms_)
        if (!key.imaginary) out.terms_.emplace(key, c);
    return out;
}

Scalar Scalar::imag_part() const {
    Scalar out;
    for (const auto& [key, c] : terms_)
        if (key.imaginary) out.terms_.emplace(RadicalKey{key.radicand, false}, c);
    return out;
}

Scalar Scalar::flip_prime(std::uint64_t p) const {
    Scalar out = *this;
    for (auto& [key, c] : out.terms_)
        if (key.radicand % p == 0) c = -c;
    return out;
}

std::vector<std::uint64_t> Scalar::primes() const {
    std::vector<std::uint64_t> out;
    for (const auto& [key, c] : terms_) {
        for (auto p : prime_factors(key.radicand)) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw DomainError("division by zero");
    Scalar numerator(1L);
    Scalar current = *this;
    for (std::uint64_t p : primes()) {
        const Scalar flipped = current.flip_prime(p);
        numerator *= flipped;
        current *= flipped;
    }
    if (!current.is_real()) {
        const Scalar c = current.conj();
        numerator *= c;
        current *= c;
    }
    const auto norm = current.as_rational();
    // The norm of a nonzero element is a nonzero rational.
    mpq_class inv = 1 / *norm;
    for (auto& [key, c] : numerator.terms_) c *= inv;
    return numerator;
}

Scalar Scalar::operator-() const {
    Scalar out = *this;
    for (auto& [key, c] : out.terms_) c = -c;
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    for (const auto& [key, c] : o.terms_) add_term(key, c);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    for (const auto& [key, c] : o.terms_) add_term(key, -c);
    return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar out;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            const std::uint64_t g = std::gcd(ka.radicand, kb.radicand);
            const std::uint64_t rad = checked_mul(ka.radicand / g, kb.radicand / g);
            mpq_class coeff = ca * cb;
            if (g > 1) coeff *= mpz_class(std::to_string(g));
            if (ka.imaginary && kb.imaginary) coeff = -coeff;
            out.add_term(RadicalKey{rad, ka.imaginary != kb.imaginary}, coeff);
        }
    }
    return out;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    *this = *this * o;
    return *this;
}

std::string Scalar::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        const bool negative = c < 0;
        const mpq_class mag = abs(c);
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        std::string factor;
        if (key.imaginary) factor = "i";
        if (key.radicand > 1) {
            if (!factor.empty()) factor += "*";
            factor += "sqrt(" + std::to_string(key.radicand) + ")";
        }
        if (factor.empty()) {
            out += mag.get_str();
        } else if (mag == 1) {
            out += factor;
        } else {
            out += mag.get_str() + "*" + factor;
        }
    }
    return out;
}

Complex Scalar::evaluate(unsigned bits) const {
    double scale = 1.0;
    for (const auto& [key, c] : terms_)
        scale += std::abs(c.get_d()) * std::sqrt(static_cast<double>(key.radicand));
    const unsigned guard = 32 + static_cast<unsigned>(std::max(0.0, std::ceil(std::log2(scale))));
    ScopedPrecision precision(bits + guard);
    Real re(0);
    Real im(0);
    for (const auto& [key, c] : terms_) {
        Real term = to_real(c);
        if (key.radicand > 1) term *= boost::multiprecision::sqrt(Real(key.radicand));
        if (key.imaginary) {
            im += term;
        } else {
            re += term;
        }
    }
    return Complex(std::move(re), std::move(im));
}

std::complex<double> Scalar::to_complex() const {
    double re = 0;
    double im = 0;
    for (const auto& [key, c] : terms_) {
        const double term = c.get_d() * std::sqrt(static_cast<double>(key.radicand));
        (key.imaginary ? im : re) += term;
    }
    return {re, im};
}

std::string to_string(const RadicalKey& key) {
    std::string s = key.imaginary ? "i" : "";
    if (key.radicand > 1) s += (s.empty() ? "" : "*") + std::string("sqrt(") + std::to_string(key.radicand) + ")";
    return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    Scalar parse() {
        Scalar value = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return value;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("scalar expression \"" + std::string(text_) + "\": " + what +
                         " at offset " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Scalar expression() {
        Scalar value = term();
        for (;;) {
            if (accept('+')) {
                value += term();
            } else if (accept('-')) {
                value -= term();
            } else {
                return value;
            }
        }
    }

    Scalar term() {
        Scalar value = unary();
        for (;;) {
            if (accept('*')) {
                value *= unary();
            } else if (accept('/')) {
                Scalar d = unary();
                if (d.is_zero()) fail("division by zero");
                value /= d;
            } else {
                return value;
            }
        }
    }

    Scalar unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return primary();
    }

    Scalar primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return integer();
        if (accept('(')) {
            Scalar inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (text_.compare(pos_, 4, "sqrt") == 0) {
            pos_ += 4;
            if (!accept('(')) fail("expected '(' after sqrt");
            Scalar inner = expression();
            if (!accept(')')) fail("expected ')'");
            return radical(inner);
        }
        if (c == 'i' && !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
            ++pos_;
            return Scalar::imaginary_unit();
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Scalar integer() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return Scalar(mpq_class(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }

    Scalar radical(const Scalar& inner) {
        const auto q = inner.as_rational();
        if (!q || q->get_den() != 1) {
            throw UnsupportedRadical("scalar expression \"" + std::string(text_) +
                                     "\": sqrt of a non-integer (nested radicals are unsupported)");
        }
        const mpz_class k = q->get_num();
        if (k < 0) fail("sqrt of a negative integer");
        if (k > mpz_class(std::to_string(std::numeric_limits<std::uint64_t>::max()))) {
            throw UnsupportedRadical("radicand too large");
        }
        return Scalar::sqrt(std::stoull(k.get_str()));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(std::string_view text) { return ExpressionParser(text).parse(); }

// ---------------------------------------------------------------------------
// Rational linear algebra

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const mpq_class inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const mpq_class f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rational_rank(RationalMatrix m) { return rref(m).size(); }

std::vector<std::vector<mpq_class>> rational_kernel(RationalMatrix m) {
    if (m.empty()) return {};
    const std::size_t cols = m.front().size();
    const auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<mpq_class>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<mpq_class> v(cols, mpq_class(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m[k][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<mpz_class> primitive_integer_vector(const std::vector<mpq_class>& v) {
    mpz_class lcm = 1;
    for (const auto& x : v) lcm = ::lcm(lcm, mpz_class(x.get_den()));
    std::vector<mpz_class> out;
    out.reserve(v.size());
    mpz_class g = 0;
    for (const auto& x : v) {
        mpq_class scaled = x * lcm;
        out.push_back(scaled.get_num());
        g = gcd(g, out.back());
    }
    if (g == 0) return out;
    bool flip = false;
    for (const auto& x : out) {
        if (x != 0) {
            flip = x < 0;
            break;
        }
    }
    for (auto& x : out) {
        x /= g;
        if (flip) x = -x;
    }
    return out;
}

RationalMatrix coefficient_matrix(std::span<const Scalar> values, std::vector<RadicalKey>* keys) {
    std::map<RadicalKey, std::size_t> index;
    for (const auto& v : values)
        for (const auto& [key, c] : v.terms()) index.try_emplace(key, 0);
    std::size_t row = 0;
    for (auto& [key, i] : index) i = row++;
    RationalMatrix m(index.size(), std::vector<mpq_class>(values.size(), mpq_class(0)));
    for (std::size_t j = 0; j < values.size(); ++j)
        for (const auto& [key, c] : values[j].terms()) m[index[key]][j] = c;
    if (keys) {
        keys->clear();
        for (const auto& [key, i] : index) keys->push_back(key);
    }
    return m;
}

IndependenceCertificate is_rationally_independent(std::span<const Scalar> values) {
    for (const auto& v : values)
        if (!v.is_real()) throw NonRealInput("rational independence requires real values, got " + v.to_string());
    IndependenceCertificate cert;
    RationalMatrix m = coefficient_matrix(values, &cert.basis);
    if (m.empty()) {
        // Every value is zero.
        cert.rank = 0;
        cert.independent = values.empty();
        if (!values.empty()) {
            cert.relation.assign(values.size(), mpz_class(0));
            cert.relation.front() = 1;
        }
        return cert;
    }
    cert.rank = rational_rank(m);
    cert.independent = cert.rank == values.size();
    if (!cert.independent) cert.relation = primitive_integer_vector(rational_kernel(m).front());
    return cert;
}

}  // namespace abdyn
