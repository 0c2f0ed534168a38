#include "abdyn/dynamics.hpp"

#include "abdyn/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace abdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExactMatrix real_representation(const ExactMatrix& m, Field field) {
    if (field == Field::Real) return m;
    const std::size_t n = m.rows();
    ExactMatrix out(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Scalar re = m(i, j).real_part();
            const Scalar im = m(i, j).imag_part();
            out(i, j) = re;
            out(i, n + j) = -im;
            out(n + i, j) = im;
            out(n + i, n + j) = re;
        }
    }
    return out;
}

std::vector<Scalar> real_representation(const std::vector<Scalar>& v, Field field) {
    if (field == Field::Real) return v;
    std::vector<Scalar> out;
    for (const auto& x : v) out.push_back(x.real_part());
    for (const auto& x : v) out.push_back(x.imag_part());
    return out;
}

std::vector<Scalar> subtract(std::vector<Scalar> a, const std::vector<Scalar>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

bool all_zero(const std::vector<Scalar>& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x.is_zero(); });
}

// Smallest subspace containing every (M_i - I) u and invariant under every M_i.
ExactMatrix krylov_closure(const std::vector<ExactMatrix>& gens, const std::vector<Scalar>& u) {
    ExactMatrix span(u.size(), 0);
    auto add = [&](const std::vector<Scalar>& v) {
        if (all_zero(v)) return;
        ExactMatrix candidate = span.hconcat(ExactMatrix::column(v));
        if (rank(candidate) > span.cols()) span = std::move(candidate);
    };
    for (const auto& g : gens) add(subtract(g.apply(u), u));
    for (std::size_t next = 0; next < span.cols(); ++next) {
        const auto col = span.col(next);
        for (const auto& g : gens) add(g.apply(col));
    }
    return span;
}

// Modified Gram-Schmidt (two passes) at the working precision; columns in, columns out.
std::vector<std::vector<Real>> orthonormalize(const ExactMatrix& basis) {
    const NumericMatrix numeric = to_numeric(basis);
    std::vector<std::vector<Real>> q;
    for (std::size_t c = 0; c < numeric.cols(); ++c) {
        std::vector<Real> v;
        for (std::size_t r = 0; r < numeric.rows(); ++r) v.push_back(numeric(r, c).real());
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : q) {
                Real dot = 0;
                for (std::size_t r = 0; r < v.size(); ++r) dot += e[r] * v[r];
                for (std::size_t r = 0; r < v.size(); ++r) v[r] -= dot * e[r];
            }
        }
        Real norm = 0;
        for (const auto& x : v) norm += x * x;
        norm = sqrt(norm);
        for (auto& x : v) x /= norm;
        q.push_back(std::move(v));
    }
    return q;
}

struct AffineMap {
    std::vector<double> r;  // d x d row-major
    std::vector<double> t;
};

AffineMap hull_map(const ExactMatrix& m, const std::vector<Scalar>& u, const std::vector<std::vector<Real>>& q) {
    const std::size_t d = q.size();
    const std::size_t dim = u.size();
    const NumericMatrix mn = to_numeric(m);
    const auto shift = to_numeric(subtract(m.apply(u), u));
    AffineMap out;
    out.r.resize(d * d);
    out.t.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<Real> image(dim, Real(0));
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) image[i] += mn(i, j).real() * q[k][j];
        for (std::size_t i = 0; i < d; ++i) {
            Real dot = 0;
            for (std::size_t r = 0; r < dim; ++r) dot += q[i][r] * image[r];
            out.r[i * d + k] = static_cast<double>(dot);
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        Real dot = 0;
        for (std::size_t r = 0; r < dim; ++r) dot += q[i][r] * shift[r].real();
        out.t[i] = static_cast<double>(dot);
    }
    return out;
}

// Coordinate-major batch of points with the exponent radius of each.
struct Batch {
    std::size_t count = 0;
    std::vector<double> x;
    std::vector<long> radius;
};

Batch concat(const std::vector<Batch>& parts, std::size_t d) {
    Batch out;
    for (const auto& p : parts) out.count += p.count;
    out.x.resize(d * out.count);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        for (std::size_t k = 0; k < d; ++k)
            std::copy(p.x.begin() + k * p.count, p.x.begin() + (k + 1) * p.count, out.x.begin() + k * out.count + offset);
        out.radius.insert(out.radius.end(), p.radius.begin(), p.radius.end());
        offset += p.count;
    }
    return out;
}

struct CellHash {
    std::size_t operator()(const std::vector<double>& key) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (double v : key) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Cells have width 2 eps, so a point within eps of p lies in p's cell or in the
// neighbouring cell on the nearer side of each coordinate.
class Deduplicator {
public:
    Deduplicator(OrbitCloud& cloud, std::size_t d, double eps, std::size_t max_points)
        : cloud_(cloud), d_(d), eps_(eps), max_points_(max_points), key_(d), probe_(d), side_(d) {}

    void insert(const double* p, long radius) {
        for (std::size_t k = 0; k < d_; ++k) {
            const double scaled = p[k] / (2 * eps_);
            key_[k] = std::floor(scaled);
            side_[k] = scaled - key_[k] < 0.5 ? -1.0 : 1.0;
        }
        if (auto existing = find(p)) {
            cloud_.radius[*existing] = std::min(cloud_.radius[*existing], radius);
            return;
        }
        if (cloud_.size() >= max_points_) {
            cloud_.truncated = true;
            return;
        }
        cells_[key_].push_back(cloud_.size());
        cloud_.coords.insert(cloud_.coords.end(), p, p + d_);
        cloud_.radius.push_back(radius);
    }

private:
    std::optional<std::size_t> find(const double* p) {
        if (d_ > 3) return find_in(p, key_);
        for (std::size_t mask = 0; mask < (std::size_t{1} << d_); ++mask) {
            for (std::size_t k = 0; k < d_; ++k) probe_[k] = key_[k] + ((mask >> k) & 1 ? side_[k] : 0.0);
            if (auto hit = find_in(p, probe_)) return hit;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> find_in(const double* p, const std::vector<double>& key) const {
        const auto it = cells_.find(key);
        if (it == cells_.end()) return std::nullopt;
        for (auto idx : it->second) {
            const double* q = cloud_.coords.data() + idx * d_;
            bool close = true;
            for (std::size_t k = 0; k < d_ && close; ++k) close = std::fabs(p[k] - q[k]) <= eps_;
            if (close) return idx;
        }
        return std::nullopt;
    }

    OrbitCloud& cloud_;
    std::size_t d_;
    double eps_;
    std::size_t max_points_;
    std::vector<double> key_;
    std::vector<double> probe_;
    std::vector<double> side_;
    std::unordered_map<std::vector<double>, std::vector<std::size_t>, CellHash> cells_;
};

}  // namespace

std::vector<double> OrbitCloud::real_point(std::size_t j) const {
    std::vector<double> out = origin;
    for (std::size_t i = 0; i < real_dim; ++i)
        for (std::size_t k = 0; k < hull_dim; ++k) out[i] += hull_basis[i * hull_dim + k] * coords[j * hull_dim + k];
    return out;
}

std::vector<std::complex<double>> OrbitCloud::point(std::size_t j) const {
    const auto real = real_point(j);
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = field == Field::Real ? real[i] : std::complex<double>(real[i], real[n + i]);
    return out;
}

std::vector<double> OrbitCloud::hull_coordinates(const std::vector<std::complex<double>>& x) const {
    if (x.size() != n) throw DimensionMismatch("point dimension does not match the orbit");
    std::vector<double> real(real_dim);
    for (std::size_t i = 0; i < n; ++i) {
        real[i] = x[i].real();
        if (field == Field::Complex) real[n + i] = x[i].imag();
    }
    std::vector<double> out(hull_dim, 0.0);
    for (std::size_t k = 0; k < hull_dim; ++k)
        for (std::size_t i = 0; i < real_dim; ++i) out[k] += hull_basis[i * hull_dim + k] * (real[i] - origin[i]);
    return out;
}

std::vector<Scalar> orbit_point(const GeneratorSet& group, const std::vector<Scalar>& u,
                                const std::vector<long>& exponents) {
    if (u.size() != group.dimension()) throw DimensionMismatch("point dimension does not match the group");
    return group.word(exponents).apply(u);
}

OrbitCloud enumerate_orbit(const GeneratorSet& group, const std::vector<Scalar>& u, long bound,
                           const OrbitOptions& opts) {
    if (u.size() != group.dimension()) throw DimensionMismatch("point dimension does not match the group");
    if (bound < 0) throw DomainError("exponent bound must be non-negative");
    const Field field = group.field();
    OrbitCloud cloud;
    cloud.field = field;
    cloud.n = group.dimension();
    cloud.base = u;
    cloud.bound = bound;
    cloud.window = opts.window;
    cloud.eps = opts.eps;

    const auto ur = real_representation(u, field);
    std::vector<ExactMatrix> gens;
    std::vector<ExactMatrix> invs;
    for (std::size_t g = 0; g < group.size(); ++g) {
        gens.push_back(real_representation(group.generators()[g], field));
        invs.push_back(real_representation(group.inverses()[g], field));
    }
    cloud.real_dim = ur.size();
    for (const auto& c : to_numeric(ur)) cloud.origin.push_back(static_cast<double>(c.real()));

    const ExactMatrix v = krylov_closure(gens, ur);
    const std::size_t d = v.cols();
    cloud.hull_dim = d;
    const auto q = orthonormalize(v);
    cloud.hull_basis.assign(cloud.real_dim * d, 0.0);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < cloud.real_dim; ++i) cloud.hull_basis[i * d + k] = static_cast<double>(q[k][i]);

    std::uint64_t total = 1;
    for (std::size_t g = 0; g < group.size(); ++g) total *= static_cast<std::uint64_t>(2 * bound + 1);
    cloud.enumerated = total;
    if (d == 0) {
        cloud.radius.push_back(0);
        return cloud;
    }

    std::vector<AffineMap> forward;
    std::vector<AffineMap> backward;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        forward.push_back(hull_map(gens[g], ur, q));
        backward.push_back(hull_map(invs[g], ur, q));
    }

    const double bound_abs = std::min(opts.window.value_or(kInf), opts.overflow_limit);
    Deduplicator dedup(cloud, d, opts.eps, opts.max_points);
    std::vector<std::uint8_t> mask;
    std::vector<double> point(d);
    auto collect = [&](const Batch& b, long step) {
        for (std::size_t j = 0; j < b.count; ++j) {
            if (j + 8 <= b.count) {
                std::uint64_t word;
                std::memcpy(&word, mask.data() + j, sizeof word);
                if (word == 0) {
                    j += 7;
                    continue;
                }
            }
            if (!mask[j]) continue;
            for (std::size_t k = 0; k < d; ++k) point[k] = b.x[k * b.count + j];
            dedup.insert(point.data(), std::max(b.radius[j], step));
        }
    };

    // Materialize all words in the first g - 1 generators, then stream the last one.
    Batch batch;
    batch.count = 1;
    batch.x.assign(d, 0.0);
    batch.radius = {0};
    const std::size_t last = gens.size() - 1;
    for (std::size_t g = 0; g < last; ++g) {
        std::vector<Batch> parts{batch};
        for (const auto* maps : {&forward, &backward}) {
            Batch cur = batch;
            for (long j = 1; j <= bound; ++j) {
                kernels::affine_batch(d, (*maps)[g].r.data(), (*maps)[g].t.data(), cur.x.data(), cur.count);
                Batch step = cur;
                for (auto& r : step.radius) r = std::max(r, j);
                parts.push_back(std::move(step));
            }
        }
        batch = concat(parts, d);
    }
    if (kernels::max_abs(batch.x.data(), batch.x.size()) > opts.overflow_limit) cloud.clipped = true;
    mask.resize(batch.count);
    kernels::window_mask(d, batch.x.data(), batch.count, bound_abs, mask.data());
    collect(batch, 0);
    for (const auto* maps : {&forward, &backward}) {
        Batch cur = batch;
        for (long j = 1; j <= bound; ++j) {
            const double peak = kernels::affine_window(d, (*maps)[last].r.data(), (*maps)[last].t.data(), cur.x.data(),
                                                       cur.count, bound_abs, mask.data());
            if (peak > opts.overflow_limit) cloud.clipped = true;
            collect(cur, j);
        }
    }
    return cloud;
}

void write_cloud_csv(std::ostream& out, const OrbitCloud& cloud) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        line.str("");
        const auto p = cloud.point(j);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i > 0) line << ',';
            line << p[i].real();
            if (cloud.field == Field::Complex) line << ',' << p[i].imag();
        }
        out << line.str() << '\n';
    }
}

const char* to_string(ClosureKind kind) {
    switch (kind) {
        case ClosureKind::Discrete: return "DISCRETE";
        case ClosureKind::DenseInAffine: return "DENSE_IN_AFFINE";
        case ClosureKind::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

std::string ClosureVerdict::label() const {
    if (kind == ClosureKind::DenseInAffine) return "DENSE_IN_AFFINE(" + std::to_string(dimension) + ")";
    return to_string(kind);
}

namespace {

using PointSet = std::vector<std::vector<double>>;

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

// Closest pair by a sweep over the first coordinate.
double min_distance(PointSet pts) {
    if (pts.size() < 2) return kInf;
    std::sort(pts.begin(), pts.end());
    double best = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size() && pts[j][0] - pts[i][0] < best; ++j)
            best = std::min(best, distance(pts[i], pts[j]));
    }
    return best;
}

// Largest distance from a probe grid over [-w, w]^d to the nearest point.
double covering_radius(const PointSet& pts, std::size_t d, double w) {
    if (pts.empty()) return kInf;
    const std::size_t cells = d == 2 ? 32 : 16;
    const double cell = 2 * w / static_cast<double>(cells);
    auto cell_of = [&](double x) {
        const long c = static_cast<long>(std::floor((x + w) / cell));
        return std::clamp<long>(c, 0, static_cast<long>(cells) - 1);
    };
    std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(std::pow(cells, d)));
    auto index = [&](const std::array<long, 3>& c) {
        std::size_t idx = 0;
        for (std::size_t k = d; k-- > 0;) idx = idx * cells + static_cast<std::size_t>(c[k]);
        return idx;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::array<long, 3> c{};
        for (std::size_t k = 0; k < d; ++k) c[k] = cell_of(pts[i][k]);
        grid[index(c)].push_back(i);
    }
    const std::size_t per_dim = d == 2 ? 41 : 21;
    const double step = 2 * w / static_cast<double>(per_dim - 1);
    std::size_t probes = 1;
    for (std::size_t k = 0; k < d; ++k) probes *= per_dim;
    double worst = 0;
    std::vector<double> probe(d);
    for (std::size_t p = 0; p < probes; ++p) {
        std::size_t code = p;
        std::array<long, 3> home{};
        for (std::size_t k = 0; k < d; ++k) {
            probe[k] = -w + step * static_cast<double>(code % per_dim);
            code /= per_dim;
            home[k] = cell_of(probe[k]);
        }
        double best = kInf;
        for (long ring = 0; ring <= static_cast<long>(cells); ++ring) {
            if (best < kInf && static_cast<double>(ring - 1) * cell >= best) break;
            const long span = 2 * ring + 1;
            long combos = 1;
            for (std::size_t k = 0; k < d; ++k) combos *= span;
            for (long c = 0; c < combos; ++c) {
                long code2 = c;
                std::array<long, 3> at{};
                bool on_ring = false;
                bool inside = true;
                for (std::size_t k = 0; k < d; ++k) {
                    const long off = code2 % span - ring;
                    code2 /= span;
                    if (std::labs(off) == ring) on_ring = true;
                    at[k] = home[k] + off;
                    if (at[k] < 0 || at[k] >= static_cast<long>(cells)) inside = false;
                }
                if (!on_ring || !inside) continue;
                for (auto i : grid[index(at)]) best = std::min(best, distance(probe, pts[i]));
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

bool same_distance(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::max(a, b));
}

}  // namespace

ClosureVerdict classify_closure(const OrbitCloud& cloud, const ClassifyOptions& opts) {
    ClosureVerdict out;
    const std::size_t d = cloud.hull_dim;
    out.dimension = d;
    out.gap = kInf;
    if (cloud.size() == 0) {
        out.notes.push_back("empty cloud");
        return out;
    }
    if (cloud.window && *cloud.window < opts.window)
        out.notes.push_back("cloud window is smaller than the classification window");
    out.clipped = cloud.clipped;
    if (cloud.clipped) out.notes.push_back("points above the overflow limit were dropped");
    if (cloud.truncated) out.notes.push_back("point cap reached; the cloud is incomplete");
    if (d == 0) {
        out.kind = ClosureKind::Discrete;
        out.gap = 0;
        out.min_distance = out.min_distance_half = out.min_distance_quarter = kInf;
        out.window_points = 1;
        out.notes.push_back("the orbit is a single point");
        return out;
    }

    PointSet all;
    std::vector<long> radius;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        const double* p = cloud.coords.data() + j * d;
        bool inside = true;
        for (std::size_t k = 0; k < d && inside; ++k) inside = std::fabs(p[k]) <= opts.window;
        if (!inside) continue;
        all.emplace_back(p, p + d);
        radius.push_back(cloud.radius[j]);
    }
    out.window_points = all.size();
    auto within = [&](long r) {
        PointSet s;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (radius[i] <= r) s.push_back(all[i]);
        return s;
    };
    out.min_distance = min_distance(all);
    out.min_distance_half = min_distance(within(cloud.bound / 2));
    out.min_distance_quarter = min_distance(within(cloud.bound / 4));

    if (all.size() <= 1) {
        out.kind = ClosureKind::Discrete;
        out.notes.push_back("the window holds at most one orbit point");
        return out;
    }
    const bool separated = out.min_distance >= opts.min_distance_factor * cloud.eps;
    const PointSet half = within(cloud.bound / 2);
    out.window_points_half = half.size();
    if (separated && same_distance(out.min_distance, out.min_distance_half) &&
        same_distance(out.min_distance, out.min_distance_quarter) && out.window_points_half == out.window_points) {
        out.kind = ClosureKind::Discrete;
        out.notes.push_back("window points and minimum distance are stable across nested boxes");
        return out;
    }

    if (d == 1) {
        std::vector<double> x;
        for (const auto& p : all) x.push_back(p[0]);
        std::sort(x.begin(), x.end());
        out.gap = std::max({x.front() + opts.window, opts.window - x.back(),
                            kernels::max_adjacent_gap(x.data(), x.size())});
        if (out.gap <= opts.gap_threshold) out.kind = ClosureKind::DenseInAffine;
        return out;
    }
    if (d <= 3) {
        out.gap = covering_radius(all, d, opts.window);
        if (out.gap <= opts.covering_threshold) out.kind = ClosureKind::DenseInAffine;
        return out;
    }
    out.notes.push_back("no density test for hulls of dimension above 3");
    return out;
}

ExploreResult explore_orbit(const GeneratorSet& group, const std::vector<Scalar>& u, long max_bound,
                            const OrbitOptions& orbit, const ClassifyOptions& classify) {
    if (max_bound < 1) throw DomainError("exploration needs a bound of at least 1");
    OrbitOptions o = orbit;
    if (!o.window) o.window = classify.window;
    ExploreResult out;
    std::size_t repeats = 0;
    for (long k = 1;; k = std::min(2 * k, max_bound)) {
        const ClosureVerdict v = classify_closure(enumerate_orbit(group, u, k, o), classify);
        const bool repeat = !out.history.empty() && out.history.back().second.same_kind(v);
        repeats = repeat ? repeats + 1 : 0;
        out.history.emplace_back(k, v);
        out.verdict = v;
        out.bound = k;
        if (v.kind != ClosureKind::Inconclusive && repeats >= 2) {
            out.stabilized = true;
            break;
        }
        if (k == max_bound) break;
        const long next = std::min(2 * k, max_bound);
        double words = 1;
        for (std::size_t g = 0; g < group.size(); ++g) words *= static_cast<double>(2 * next + 1);
        if (words > static_cast<double>(o.max_words)) break;
    }
    return out;
}

namespace {

double vector_error(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).magnitude());
    return m;
}

void require_in_u(const InvariantFamily& family, const std::vector<Scalar>& x, const char* name) {
    const auto m = membership(family, x);
    if (!m.in_u())
        throw PointNotInU(std::string(name) + " lies in the invariant subspace H_" + std::to_string(m.containing.front() + 1));
}

PropertyReport summarize(PropertyReport r, const PropertyOptions& opts) {
    const std::size_t count = r.inverse_errors.size();
    if (count == 0) return r;
    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(opts.tail_fraction * static_cast<double>(count))));
    const std::size_t start = count - std::min(tail, count);
    r.monotone_tail = true;
    for (std::size_t i = start; i < count; ++i) {
        r.tail_max_forward = std::max(r.tail_max_forward, r.forward_errors[i]);
        r.tail_max_inverse = std::max(r.tail_max_inverse, r.inverse_errors[i]);
        if (i > start && r.inverse_errors[i] > r.inverse_errors[i - 1] + opts.tolerance) r.monotone_tail = false;
    }
    r.tends_to_zero = r.monotone_tail && r.tail_max_inverse <= opts.tolerance;
    return r;
}

}  // namespace

PropertyReport property_p_check(const GeneratorSet& group, const InvariantFamily& family, const std::vector<Scalar>& u,
                                const std::vector<Scalar>& v, const std::vector<std::vector<long>>& words,
                                const PropertyOptions& opts) {
    require_in_u(family, u, "u");
    require_in_u(family, v, "v");
    PropertyReport r;
    for (const auto& w : words) {
        std::vector<long> inv = w;
        for (auto& e : inv) e = -e;
        r.forward_errors.push_back(vector_error(group.word(w).apply(u), v));
        r.inverse_errors.push_back(vector_error(group.word(inv).apply(v), u));
    }
    return summarize(std::move(r), opts);
}

PropertyReport property_p_check(const InvariantFamily& family, const std::vector<Scalar>& u,
                                const std::vector<Scalar>& v, const std::vector<ExactMatrix>& sequence,
                                const PropertyOptions& opts) {
    require_in_u(family, u, "u");
    require_in_u(family, v, "v");
    PropertyReport r;
    for (const auto& b : sequence) {
        r.forward_errors.push_back(vector_error(b.apply(u), v));
        r.inverse_errors.push_back(vector_error(inverse(b).apply(v), u));
    }
    return summarize(std::move(r), opts);
}

Approximation approximate_target(const std::vector<Scalar>& values, const Scalar& target, long max_bound) {
    if (!target.is_real()) throw NonRealInput("target " + target.to_string() + " is not real");
    for (const auto& v : values)
        if (!v.is_real()) throw NonRealInput("value " + v.to_string() + " is not real");
    if (max_bound < 0) throw DomainError("search bound must be non-negative");
    std::optional<std::size_t> pivot;
    for (std::size_t i = values.size(); i-- > 0;)
        if (!values[i].is_zero()) {
            pivot = i;
            break;
        }
    if (!pivot) throw NoProgress("every value is zero; no combination moves toward the target");

    const unsigned bits = working_precision_bits();
    std::vector<Real> v;
    for (const auto& x : values) v.push_back(x.evaluate(bits).real());
    const Real t = target.evaluate(bits).real();
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i != *pivot) free.push_back(i);

    Approximation out;
    Real best = -1;
    long last_improvement = 0;
    const Real lo(-max_bound);
    const Real hi(max_bound);
    std::vector<long> k(values.size(), 0);
    for (long shell = 0; shell <= max_bound; ++shell) {
        // Odometer over the boundary of [-shell, shell]^free with c[0] varying fastest:
        // c[0] sweeps the full range only when another coordinate is already on the
        // boundary, and otherwise jumps from -shell to shell.
        std::vector<long> c(free.size(), -shell);
        bool done = c.empty() && shell > 0;
        while (!done) {
            long outer = 0;
            for (std::size_t i = 1; i < c.size(); ++i) outer = std::max(outer, std::labs(c[i]));
            {
                Real partial = 0;
                for (std::size_t i = 0; i < free.size(); ++i) {
                    k[free[i]] = c[i];
                    partial += v[free[i]] * Real(c[i]);
                }
                Real coef = round((t - partial) / v[*pivot]);
                if (coef < lo) coef = lo;
                if (coef > hi) coef = hi;
                k[*pivot] = static_cast<long>(coef);
                const Real residual = abs(partial + coef * v[*pivot] - t);
                if (best < 0 || residual < best) {
                    best = residual;
                    last_improvement = shell;
                    out.steps.push_back({k, static_cast<double>(residual)});
                    if (residual == 0) return out;
                }
            }
            if (c.empty()) break;
            if (outer < shell && c[0] == -shell) c[0] = shell;
            else ++c[0];
            std::size_t pos = 0;
            while (c[pos] > shell) {
                c[pos] = -shell;
                if (++pos == c.size()) break;
                ++c[pos];
            }
            done = pos == c.size();
        }
    }
    out.stalled = best > 0 && 2 * last_improvement <= max_bound;
    return out;
}

DensityReport density_propagation_check(const GeneratorSet& group, const InvariantFamily& family,
                                        const ClosureVerdict& verdict, const DensityOptions& opts) {
    DensityReport out;
    const std::size_t real_dim = group.field() == Field::Real ? group.dimension() : 2 * group.dimension();
    if (verdict.kind != ClosureKind::DenseInAffine || verdict.dimension != real_dim) {
        out.skipped = true;
        out.reason = "the reference orbit is not dense in the whole space (" + verdict.label() + ")";
        return out;
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> num(-opts.numerator_range, opts.numerator_range);
    std::uniform_int_distribution<int> den(1, 4);
    auto random_rational = [&] { return Scalar(mpq_class(num(rng), den(rng))); };
    OrbitOptions orbit = opts.orbit;
    if (!orbit.window) orbit.window = opts.classify.window;
    for (std::size_t attempt = 0; out.samples.size() < opts.samples && attempt < 50 * opts.samples; ++attempt) {
        std::vector<Scalar> p;
        for (std::size_t i = 0; i < group.dimension(); ++i) {
            Scalar x = random_rational();
            if (group.field() == Field::Complex) x += random_rational() * Scalar::imaginary_unit();
            p.push_back(std::move(x));
        }
        if (!membership(family, p).in_u()) continue;
        DensitySample s;
        s.verdict = classify_closure(enumerate_orbit(group, p, opts.bound, orbit), opts.classify);
        s.point = std::move(p);
        if (s.verdict.kind != ClosureKind::DenseInAffine || s.verdict.dimension != real_dim)
            out.failures.push_back(out.samples.size());
        out.samples.push_back(std::move(s));
    }
    return out;
}

}  // namespace abdyn
