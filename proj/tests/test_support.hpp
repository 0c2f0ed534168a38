#pragma once

#include "abdyn/linalg.hpp"
#include "abdyn/scalar.hpp"

#include <random>
#include <vector>

namespace abdyn::testing {

inline Scalar s(const char* text) { return parse_scalar(text); }

inline ExactMatrix exact(std::initializer_list<std::initializer_list<const char*>> rows) {
    ExactMatrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (const char* e : row) m(r, c++) = parse_scalar(e);
        ++r;
    }
    return m;
}

inline std::vector<Scalar> exact_vec(std::initializer_list<const char*> entries) {
    std::vector<Scalar> v;
    for (const char* e : entries) v.push_back(parse_scalar(e));
    return v;
}

/// Random element of Q(sqrt2, sqrt3, sqrt5, i) with small coefficients.
inline Scalar random_scalar(std::mt19937_64& rng, bool allow_imaginary = true) {
    static const std::uint64_t radicands[] = {1, 2, 3, 5, 6};
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_int_distribution<int> pick(0, 4);
    std::bernoulli_distribution imag(allow_imaginary ? 0.3 : 0.0);
    Scalar out;
    const int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
        const RadicalKey key{radicands[pick(rng)], imag(rng)};
        out += Scalar::from_term(key, mpq_class(coeff(rng), den(rng)));
    }
    return out;
}

inline ExactMatrix random_rational_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range = 4) {
    std::uniform_int_distribution<int> d(-range, range);
    ExactMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Scalar(static_cast<long>(d(rng)));
    return m;
}

}  // namespace abdyn::testing
