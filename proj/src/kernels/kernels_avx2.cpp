#include "abdyn/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace abdyn::kernels::avx2 {

namespace {

constexpr std::size_t kMaxDim = 16;

// Fused step for a compile-time dimension D (D = 0 reads the dimension at run time).
template <std::size_t D>
double affine_window_impl(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                          double bound, std::uint8_t* mask) {
    const std::size_t n = D == 0 ? dim : D;
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d limit = _mm256_set1_pd(bound);
    __m256d rv[D == 0 ? kMaxDim * kMaxDim : D * D];
    __m256d tv[D == 0 ? kMaxDim : D];
    for (std::size_t i = 0; i < n; ++i) {
        tv[i] = _mm256_set1_pd(t[i]);
        for (std::size_t k = 0; k < n; ++k) rv[i * n + k] = _mm256_set1_pd(r[i * n + k]);
    }
    __m256d x[D == 0 ? kMaxDim : D];
    __m256d m = _mm256_setzero_pd();
    __m256d nan = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        for (std::size_t k = 0; k < n; ++k) x[k] = _mm256_loadu_pd(points + k * count + j);
        __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (std::size_t i = 0; i < n; ++i) {
            __m256d acc = tv[i];
            for (std::size_t k = 0; k < n; ++k) acc = _mm256_add_pd(acc, _mm256_mul_pd(rv[i * n + k], x[k]));
            _mm256_storeu_pd(points + i * count + j, acc);
            const __m256d a = _mm256_andnot_pd(sign, acc);
            inside = _mm256_and_pd(inside, _mm256_cmp_pd(a, limit, _CMP_LE_OQ));
            nan = _mm256_or_pd(nan, _mm256_cmp_pd(a, a, _CMP_UNORD_Q));
            m = _mm256_max_pd(m, a);
        }
        const int bits = _mm256_movemask_pd(inside);
        for (int b = 0; b < 4; ++b) mask[j + b] = static_cast<std::uint8_t>((bits >> b) & 1);
    }
    double tail = 0;
    for (; j < count; ++j) {
        double xs[kMaxDim];
        for (std::size_t k = 0; k < n; ++k) xs[k] = points[k * count + j];
        bool inside = true;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = t[i];
            for (std::size_t k = 0; k < n; ++k) acc = acc + r[i * n + k] * xs[k];
            points[i * count + j] = acc;
            const double a = std::fabs(acc);
            inside = inside && a <= bound;
            if (std::isnan(a)) tail = std::numeric_limits<double>::infinity();
            else if (a > tail) tail = a;
        }
        mask[j] = inside ? 1 : 0;
    }
    if (_mm256_movemask_pd(nan) != 0) return std::numeric_limits<double>::infinity();
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    const double best = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
    return tail > best ? tail : best;
}

}  // namespace

void affine_batch(std::size_t dim, const double* r, const double* t, double* points, std::size_t count) {
    if (dim > kMaxDim) {
        scalar::affine_batch(dim, r, t, points, count);
        return;
    }
    __m256d x[kMaxDim];
    __m256d out[kMaxDim];
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        for (std::size_t k = 0; k < dim; ++k) x[k] = _mm256_loadu_pd(points + k * count + j);
        for (std::size_t i = 0; i < dim; ++i) {
            __m256d acc = _mm256_set1_pd(t[i]);
            for (std::size_t k = 0; k < dim; ++k)
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(r[i * dim + k]), x[k]));
            out[i] = acc;
        }
        for (std::size_t i = 0; i < dim; ++i) _mm256_storeu_pd(points + i * count + j, out[i]);
    }
    for (; j < count; ++j) {
        double xs[kMaxDim];
        for (std::size_t k = 0; k < dim; ++k) xs[k] = points[k * count + j];
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = t[i];
            for (std::size_t k = 0; k < dim; ++k) acc = acc + r[i * dim + k] * xs[k];
            points[i * count + j] = acc;
        }
    }
}

double affine_window(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                     double bound, std::uint8_t* mask) {
    switch (dim) {
        case 1: return affine_window_impl<1>(dim, r, t, points, count, bound, mask);
        case 2: return affine_window_impl<2>(dim, r, t, points, count, bound, mask);
        case 3: return affine_window_impl<3>(dim, r, t, points, count, bound, mask);
        case 4: return affine_window_impl<4>(dim, r, t, points, count, bound, mask);
        default: break;
    }
    if (dim > kMaxDim) return scalar::affine_window(dim, r, t, points, count, bound, mask);
    return affine_window_impl<0>(dim, r, t, points, count, bound, mask);
}

void window_mask(std::size_t dim, const double* points, std::size_t count, double bound, std::uint8_t* mask) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d limit = _mm256_set1_pd(bound);
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (std::size_t k = 0; k < dim; ++k) {
            const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(points + k * count + j));
            inside = _mm256_and_pd(inside, _mm256_cmp_pd(a, limit, _CMP_LE_OQ));
        }
        const int bits = _mm256_movemask_pd(inside);
        for (int b = 0; b < 4; ++b) mask[j + b] = static_cast<std::uint8_t>((bits >> b) & 1);
    }
    for (; j < count; ++j) {
        bool inside = true;
        for (std::size_t k = 0; k < dim; ++k) inside = inside && std::fabs(points[k * count + j]) <= bound;
        mask[j] = inside ? 1 : 0;
    }
}

double max_abs(const double* x, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    __m256d nan = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i));
        nan = _mm256_or_pd(nan, _mm256_cmp_pd(a, a, _CMP_UNORD_Q));
        m = _mm256_max_pd(m, a);
    }
    if (_mm256_movemask_pd(nan) != 0) return std::numeric_limits<double>::infinity();
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double best = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
    const double tail = scalar::max_abs(x + i, n - i);
    return tail > best ? tail : best;
}

double max_adjacent_gap(const double* sorted, std::size_t n) {
    if (n < 2) return 0;
    __m256d g = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 5 <= n; i += 4) {
        const __m256d lo = _mm256_loadu_pd(sorted + i);
        const __m256d hi = _mm256_loadu_pd(sorted + i + 1);
        g = _mm256_max_pd(g, _mm256_sub_pd(hi, lo));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, g);
    double best = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
    const double tail = scalar::max_adjacent_gap(sorted + i, n - i);
    return tail > best ? tail : best;
}

}  // namespace abdyn::kernels::avx2
