#include "abdyn/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace abdyn::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{detected_isa()};
    return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return active().load(); }

void force_isa(std::optional<Isa> isa) {
    const Isa chosen = isa.value_or(detected_isa());
    if (chosen == Isa::Avx2 && !cpu_has_avx2()) throw std::runtime_error("AVX2 is not supported by this CPU");
    active().store(chosen);
}

void affine_batch(std::size_t dim, const double* r, const double* t, double* points, std::size_t count) {
    if (active_isa() == Isa::Avx2) return avx2::affine_batch(dim, r, t, points, count);
    scalar::affine_batch(dim, r, t, points, count);
}

double affine_window(std::size_t dim, const double* r, const double* t, double* points, std::size_t count,
                     double bound, std::uint8_t* mask) {
    if (active_isa() == Isa::Avx2) return avx2::affine_window(dim, r, t, points, count, bound, mask);
    return scalar::affine_window(dim, r, t, points, count, bound, mask);
}

void window_mask(std::size_t dim, const double* points, std::size_t count, double bound, std::uint8_t* mask) {
    if (active_isa() == Isa::Avx2) return avx2::window_mask(dim, points, count, bound, mask);
    scalar::window_mask(dim, points, count, bound, mask);
}

double max_abs(const double* x, std::size_t n) {
    return active_isa() == Isa::Avx2 ? avx2::max_abs(x, n) : scalar::max_abs(x, n);
}

double max_adjacent_gap(const double* sorted, std::size_t n) {
    return active_isa() == Isa::Avx2 ? avx2::max_adjacent_gap(sorted, n) : scalar::max_adjacent_gap(sorted, n);
}

}  // namespace abdyn::kernels
