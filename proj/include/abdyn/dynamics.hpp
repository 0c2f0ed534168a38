#pragma once

// Finite orbit exploration: truncated orbits {g u : g = prod A_i^{k_i}, |k_i| <= K},
// heuristic closure classification, the inverse-sequence check for convergent
// sequences, integer approximation of a target by a Z-combination of values and
// density propagation across orbits of U.
//
// Orbits live in the affine hull u + V, where V is the smallest invariant subspace
// containing every (A_i - I) u. Each generator acts on V-coordinates as an affine
// map, so enumeration only iterates dim(V)-dimensional affine steps.

#include "abdyn/structure.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace abdyn {

struct OrbitOptions {
    /// Keep only points whose hull coordinates lie in [-window, window]^d.
    std::optional<double> window;
    /// Points closer than this (max-norm, hull coordinates) are identified.
    double eps = 1e-9;
    /// Cap on stored points; further points are dropped and `truncated` is set.
    std::size_t max_points = 2'000'000;
    /// Points with a coordinate above this magnitude are dropped and `clipped` is set.
    double overflow_limit = 1e100;
    /// explore_orbit stops growing K before (2K+1)^g words would exceed this.
    std::uint64_t max_words = 500'000'000;
};

struct OrbitCloud {
    Field field = Field::Complex;
    std::size_t n = 0;
    std::vector<Scalar> base;
    long bound = 0;
    /// n for the real field, 2n for the complex field (real and imaginary parts).
    std::size_t real_dim = 0;
    std::size_t hull_dim = 0;
    /// Real coordinates of u.
    std::vector<double> origin;
    /// Orthonormal basis of V, real_dim x hull_dim row-major.
    std::vector<double> hull_basis;
    /// Hull coordinates, point-major: coordinate k of point j at j * hull_dim + k.
    std::vector<double> coords;
    /// Smallest max|k_i| among the exponent tuples reaching each point.
    std::vector<long> radius;
    std::uint64_t enumerated = 0;
    bool clipped = false;
    bool truncated = false;
    std::optional<double> window;
    double eps = 1e-9;

    std::size_t size() const noexcept { return radius.size(); }
    /// Real coordinates (length real_dim) of point j.
    std::vector<double> real_point(std::size_t j) const;
    /// Point j in K^n.
    std::vector<std::complex<double>> point(std::size_t j) const;
    /// Hull coordinates of an ambient point (orthogonal projection of x - u).
    std::vector<double> hull_coordinates(const std::vector<std::complex<double>>& x) const;
};

/// Throws DimensionMismatch for a wrong point size and DomainError for K < 0.
OrbitCloud enumerate_orbit(const GeneratorSet& group, const std::vector<Scalar>& u, long bound,
                           const OrbitOptions& opts = {});

/// Exact orbit point A_1^{k_1} ... A_g^{k_g} u.
std::vector<Scalar> orbit_point(const GeneratorSet& group, const std::vector<Scalar>& u,
                                const std::vector<long>& exponents);

/// Writes one point per line: real coordinates, or real and imaginary parts
/// interleaved for the complex field, as decimal strings.
void write_cloud_csv(std::ostream& out, const OrbitCloud& cloud);

enum class ClosureKind { Discrete, DenseInAffine, Inconclusive };

const char* to_string(ClosureKind kind);

struct ClassifyOptions {
    double window = 1.0;
    /// Largest allowed gap (1-dimensional hulls) within [-window, window].
    double gap_threshold = 0.01;
    /// Largest allowed covering radius of the window (2- and 3-dimensional hulls).
    double covering_threshold = 0.15;
    /// DISCRETE requires a minimum distance of at least this multiple of eps, and the
    /// same window points and minimum distances at bounds K/4, K/2 and K.
    double min_distance_factor = 100.0;
};

struct ClosureVerdict {
    ClosureKind kind = ClosureKind::Inconclusive;
    /// Real dimension of the affine hull.
    std::size_t dimension = 0;
    /// Max gap (d = 1) or covering radius (d = 2, 3) of the window; +inf if not computed.
    double gap = 0;
    /// Minimum distance between window points at bound K, K/2 and K/4.
    double min_distance = 0;
    double min_distance_half = 0;
    double min_distance_quarter = 0;
    std::size_t window_points = 0;
    /// Window points reached with exponents bounded by K/2.
    std::size_t window_points_half = 0;
    /// The cloud dropped points above the overflow limit.
    bool clipped = false;
    std::vector<std::string> notes;

    bool same_kind(const ClosureVerdict& o) const { return kind == o.kind && dimension == o.dimension; }
    std::string label() const;
};

ClosureVerdict classify_closure(const OrbitCloud& cloud, const ClassifyOptions& opts = {});

struct ExploreResult {
    ClosureVerdict verdict;
    long bound = 0;
    std::vector<std::pair<long, ClosureVerdict>> history;
    bool stabilized = false;
};

/// Classifies clouds for K = 1, 2, 4, ... up to max_bound (and the word budget) and
/// stops once the same conclusive verdict has been seen three times in a row.
ExploreResult explore_orbit(const GeneratorSet& group, const std::vector<Scalar>& u, long max_bound,
                            const OrbitOptions& orbit = {}, const ClassifyOptions& classify = {});

struct PropertyOptions {
    double tolerance = 1e-3;
    double tail_fraction = 0.5;
};

struct PropertyReport {
    /// |B_m u - v| and |B_m^-1 v - u| (max-norm) along the sequence.
    std::vector<double> forward_errors;
    std::vector<double> inverse_errors;
    double tail_max_forward = 0;
    double tail_max_inverse = 0;
    /// Tail inverse errors never increase by more than `tolerance`.
    bool monotone_tail = false;
    /// tail_max_inverse <= tolerance and monotone_tail.
    bool tends_to_zero = false;
};

/// Throws PointNotInU when u or v lies in some H_k.
PropertyReport property_p_check(const GeneratorSet& group, const InvariantFamily& family, const std::vector<Scalar>& u,
                                const std::vector<Scalar>& v, const std::vector<std::vector<long>>& words,
                                const PropertyOptions& opts = {});
PropertyReport property_p_check(const InvariantFamily& family, const std::vector<Scalar>& u,
                                const std::vector<Scalar>& v, const std::vector<ExactMatrix>& sequence,
                                const PropertyOptions& opts = {});

struct ApproximationStep {
    std::vector<long> exponents;
    double residual = 0;
};

struct Approximation {
    /// Strictly decreasing residuals |sum k_i v_i - target|.
    std::vector<ApproximationStep> steps;
    /// No improvement over the second half of the search range (and residual > 0).
    bool stalled = false;
};

/// Searches boxes of increasing size up to max_bound. The last nonzero value's
/// coefficient is chosen optimally by rounding, which makes each box search
/// exhaustive. Throws NonRealInput for non-real input and NoProgress when every
/// value is zero.
Approximation approximate_target(const std::vector<Scalar>& values, const Scalar& target, long max_bound);

struct DensitySample {
    std::vector<Scalar> point;
    ClosureVerdict verdict;
};

struct DensityReport {
    bool skipped = false;
    std::string reason;
    std::vector<DensitySample> samples;
    /// Samples whose orbit did not reach the same density.
    std::vector<std::size_t> failures;
};

struct DensityOptions {
    std::size_t samples = 20;
    long bound = 12;
    std::uint64_t seed = 1;
    /// Sample coordinates are p / q with |p| <= numerator_range and 1 <= q <= 4.
    int numerator_range = 2;
    OrbitOptions orbit;
    ClassifyOptions classify;
};

/// Requires `verdict` to be DENSE_IN_AFFINE of the full real dimension; otherwise
/// the check is skipped.
DensityReport density_propagation_check(const GeneratorSet& group, const InvariantFamily& family,
                                        const ClosureVerdict& verdict, const DensityOptions& opts = {});

}  // namespace abdyn
