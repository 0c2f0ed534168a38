#include "abdyn/kernels.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace abdyn::kernels::scalar {

void affine_batch(std::size_t dim, const double* r, const double* t, double* points, std::size_t count) {
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t k = 0; k < dim; ++k) x[k] = points[k * count + j];
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = t[i];
            for (std::size_t k = 0; k < dim; ++k) acc = acc + r[i * dim + k] * x[k];
            points[i * count + j] = acc;
        }
    }
}

double affine_window(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                     double bound, std::uint8_t* mask) {
    affine_batch(dim, r, t, points, count);
    window_mask(dim, points, count, bound, mask);
    return max_abs(points, dim * count);
}

void window_mask(std::size_t dim, const double* points, std::size_t count, double bound, std::uint8_t* mask) {
    for (std::size_t j = 0; j < count; ++j) {
        bool inside = true;
        for (std::size_t k = 0; k < dim; ++k) inside = inside && std::fabs(points[k * count + j]) <= bound;
        mask[j] = inside ? 1 : 0;
    }
}

double max_abs(const double* x, std::size_t n) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (std::isnan(a)) return std::numeric_limits<double>::infinity();
        if (a > m) m = a;
    }
    return m;
}

double max_adjacent_gap(const double* sorted, std::size_t n) {
    double g = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = sorted[i + 1] - sorted[i];
        if (d > g) g = d;
    }
    return g;
}

}  // namespace abdyn::kernels::scalar
