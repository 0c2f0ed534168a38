#pragma once

// Double-precision batch kernels used by orbit enumeration, with a portable
// reference implementation and an AVX2 variant selected at run time.
//
// Point batches are stored coordinate-major: coordinate k of point j lives at
// points[k * count + j]. Both variants perform the same operations in the same
// order without fused multiply-add, so their results are bitwise identical.

#include <cstddef>
#include <cstdint>
#include <optional>

namespace abdyn::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// Best variant supported by this CPU.
Isa detected_isa();
/// Variant currently used by the dispatching entry points.
Isa active_isa();
/// Overrides the variant (std::nullopt restores detection). Forcing Avx2 on a
/// CPU without it throws std::runtime_error.
void force_isa(std::optional<Isa> isa);

/// x_j <- R x_j + t for every point, R a dim x dim row-major matrix.
void affine_batch(std::size_t dim, const double* r, const double* t, double* points, std::size_t count);
/// mask[j] = 1 iff every coordinate of point j satisfies |x| <= bound (NaN fails).
void window_mask(std::size_t dim, const double* points, std::size_t count, double bound, std::uint8_t* mask);
/// affine_batch followed by window_mask on the updated points, in one pass.
/// Returns max_abs over the updated points.
double affine_window(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                     double bound, std::uint8_t* mask);
/// Largest |x_i|; +inf if some entry is NaN; 0 for an empty range.
double max_abs(const double* x, std::size_t n);
/// Largest x[i+1] - x[i] of a sorted array; 0 when n < 2.
double max_adjacent_gap(const double* sorted, std::size_t n);

namespace scalar {
void affine_batch(std::size_t dim, const double* r, const double* t, double* points, std::size_t count);
double affine_window(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                     double bound, std::uint8_t* mask);
void window_mask(std::size_t dim, const double* points, std::size_t count, double bound, std::uint8_t* mask);
double max_abs(const double* x, std::size_t n);
double max_adjacent_gap(const double* sorted, std::size_t n);
}  // namespace scalar

namespace avx2 {
void affine_batch(std::size_t dim, const double* r, const double* t, double* points, std::size_t count);
double affine_window(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                     double bound, std::uint8_t* mask);
void window_mask(std::size_t dim, const double* points, std::size_t count, double bound, std::uint8_t* mask);
double max_abs(const double* x, std::size_t n);
double max_adjacent_gap(const double* sorted, std::size_t n);
}  // namespace avx2

}  // namespace abdyn::kernels
