#include "abdyn/report.hpp"

#include "abdyn/errors.hpp"
#include "abdyn/numeric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace abdyn {

using nlohmann::json;

namespace {

Field parse_field(const std::string& s) {
    if (s == "real") return Field::Real;
    if (s == "complex") return Field::Complex;
    throw ParseError("field must be \"real\" or \"complex\", got \"" + s + "\"");
}

std::string field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Scalar parse_entry(const json& e) {
    if (e.is_string()) return parse_scalar(e.get<std::string>());
    if (e.is_number_integer()) return Scalar(e.get<long>());
    throw ParseError("matrix entries must be expression strings or integers, got " + e.dump());
}

ValueText text_of(const Scalar& x) { return {format_decimal(x.evaluate(working_precision_bits())), x.to_string()}; }
ValueText text_of(const Complex& z) { return {format_decimal(z), ""}; }

ValueText text_of(const Eigenvalue& e) {
    if (e.exact) return text_of(*e.exact);
    return text_of(e.value);
}

template <class T>
MatrixText text_of(const Matrix<T>& m) {
    MatrixText out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(text_of(m(i, j)));
    return out;
}

std::optional<double> finite(double x) {
    if (std::isfinite(x)) return x;
    return std::nullopt;
}

template <class T>
double invariance_residual(const std::vector<Matrix<T>>& gens, const Matrix<T>& basis, const LinalgOptions& opts) {
    if (basis.cols() == 0) return 0;
    double worst = 0;
    for (const auto& a : gens)
        for (double r : solve_in_basis(basis, a * basis, opts).residuals) worst = std::max(worst, r);
    return worst;
}

}  // namespace

GeneratorSet ProblemInput::group() const { return GeneratorSet::create(field, generators, names); }

ProblemInput parse_problem(const json& j) {
    ProblemInput in;
    try {
        in.field = parse_field(require(j, "field").get<std::string>());
        in.dimension = require(j, "dimension").get<std::size_t>();
        const auto& gens = require(j, "generators");
        if (!gens.is_array() || gens.empty()) throw ParseError("\"generators\" must be a non-empty array");
        for (const auto& g : gens) {
            if (!g.is_array() || g.size() != in.dimension)
                throw DimensionMismatch("every generator must have " + std::to_string(in.dimension) + " rows");
            ExactMatrix m(in.dimension, in.dimension);
            for (std::size_t r = 0; r < in.dimension; ++r) {
                if (!g[r].is_array() || g[r].size() != in.dimension)
                    throw DimensionMismatch("every generator row must have " + std::to_string(in.dimension) + " entries");
                for (std::size_t c = 0; c < in.dimension; ++c) m(r, c) = parse_entry(g[r][c]);
            }
            in.generators.push_back(std::move(m));
        }
        if (j.contains("names")) in.names = j.at("names").get<std::vector<std::string>>();
        if (j.contains("points")) {
            for (const auto& p : j.at("points")) {
                if (!p.is_array() || p.size() != in.dimension)
                    throw DimensionMismatch("every point must have " + std::to_string(in.dimension) + " entries");
                std::vector<Scalar> v;
                for (const auto& e : p) v.push_back(parse_entry(e));
                in.points.push_back(std::move(v));
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed problem file: ") + e.what());
    }
    return in;
}

ProblemInput load_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_problem(j);
}

json problem_to_json(const ProblemInput& input) {
    json gens = json::array();
    for (const auto& g : input.generators) {
        json rows = json::array();
        for (std::size_t r = 0; r < g.rows(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(g(r, c).to_string());
            rows.push_back(row);
        }
        gens.push_back(rows);
    }
    json j{{"field", field_name(input.field)}, {"dimension", input.dimension}, {"generators", gens}};
    if (!input.names.empty()) j["names"] = input.names;
    if (!input.points.empty()) {
        json pts = json::array();
        for (const auto& p : input.points) {
            json row = json::array();
            for (const auto& x : p) row.push_back(x.to_string());
            pts.push_back(row);
        }
        j["points"] = pts;
    }
    return j;
}

std::vector<Scalar> parse_point(const std::string& text) {
    std::vector<Scalar> out;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(parse_scalar(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(parse_scalar(cur));
    return out;
}

std::string format_decimal(const Complex& z, int digits) {
    const Real scale = std::max(Real(1), z.abs());
    const bool has_re = abs(z.real()) > scale * Real(1e-30);
    const bool has_im = abs(z.imag()) > scale * Real(1e-30);
    if (!has_im) return has_re ? to_decimal(z.real(), digits) : "0";
    std::string im = to_decimal(abs(z.imag()), digits);
    const char* sign = z.imag() < 0 ? "-" : "+";
    if (!has_re) return (z.imag() < 0 ? "-" : "") + im + "i";
    return to_decimal(z.real(), digits) + sign + im + "i";
}

StructureOptions ReportConfig::structure() const {
    StructureOptions o;
    o.spectral.eps = tol;
    return o;
}

OrbitOptions ReportConfig::orbit() const {
    OrbitOptions o;
    o.window = window;
    o.eps = tol;
    return o;
}

ClassifyOptions ReportConfig::classify() const {
    ClassifyOptions o;
    o.window = window;
    o.gap_threshold = gap_threshold;
    o.covering_threshold = covering_threshold;
    o.min_distance_factor = min_distance_factor;
    return o;
}

void to_json(json& j, const ValueText& v) {
    j = json{{"decimal", v.decimal}};
    if (!v.exact.empty()) j["exact"] = v.exact;
}

void from_json(const json& j, ValueText& v) {
    v.decimal = j.at("decimal").get<std::string>();
    v.exact = j.value("exact", std::string());
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EigenvalueReport, value, multiplicity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FormReport, dimension, level_sizes, mu, adapted_basis)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SubspaceReport, dimension, tag, block, basis, residual)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TreeReport, depth, node_dimensions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DensityCheckReport, skipped, reason, samples, failures)

void to_json(json& j, const BlockReport& b) {
    j = json{{"dimension", b.dimension}, {"eigenvalues", b.eigenvalues}};
    j["partner"] = b.partner ? json(*b.partner) : json(nullptr);
}

void from_json(const json& j, BlockReport& b) {
    b.dimension = j.at("dimension").get<std::size_t>();
    b.eigenvalues = j.at("eigenvalues").get<std::vector<EigenvalueReport>>();
    b.partner = j.at("partner").is_null() ? std::nullopt : std::optional(j.at("partner").get<std::size_t>());
}

namespace {

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

void to_json(json& j, const PointReport& p) {
    j = json{{"point", p.point},
             {"membership", p.membership},
             {"containing", p.containing},
             {"verdict", p.verdict},
             {"dimension", p.dimension},
             {"bound", p.bound},
             {"stabilized", p.stabilized},
             {"window_points", p.window_points},
             {"gap", optional_number(p.gap)},
             {"min_distance", optional_number(p.min_distance)},
             {"clipped", p.clipped}};
    j["density"] = p.density ? json(*p.density) : json(nullptr);
}

void from_json(const json& j, PointReport& p) {
    p.point = j.at("point").get<std::vector<ValueText>>();
    p.membership = j.at("membership").get<std::string>();
    p.containing = j.at("containing").get<std::vector<std::size_t>>();
    p.verdict = j.at("verdict").get<std::string>();
    p.dimension = j.at("dimension").get<std::size_t>();
    p.bound = j.at("bound").get<long>();
    p.stabilized = j.at("stabilized").get<bool>();
    p.window_points = j.at("window_points").get<std::size_t>();
    p.gap = read_optional(j, "gap");
    p.min_distance = read_optional(j, "min_distance");
    p.clipped = j.at("clipped").get<bool>();
    if (!j.at("density").is_null()) p.density = j.at("density").get<DensityCheckReport>();
}

void to_json(json& j, const ReportConfig& c) {
    j = json{{"precision", c.precision},
             {"tol", c.tol},
             {"max_exponent", c.max_exponent},
             {"seed", c.seed},
             {"window", c.window},
             {"gap_threshold", c.gap_threshold},
             {"covering_threshold", c.covering_threshold},
             {"min_distance_factor", c.min_distance_factor},
             {"density", c.density},
             {"density_samples", c.density_samples},
             {"density_bound", c.density_bound}};
}

void from_json(const json& j, ReportConfig& c) {
    c.precision = j.at("precision").get<unsigned>();
    c.tol = j.at("tol").get<double>();
    c.max_exponent = j.at("max_exponent").get<long>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.window = j.at("window").get<double>();
    c.gap_threshold = j.at("gap_threshold").get<double>();
    c.covering_threshold = j.at("covering_threshold").get<double>();
    c.min_distance_factor = j.at("min_distance_factor").get<double>();
    c.density = j.at("density").get<bool>();
    c.density_samples = j.at("density_samples").get<std::size_t>();
    c.density_bound = j.at("density_bound").get<long>();
}

void to_json(json& j, const AnalysisReport& r) {
    j = json{{"tool", r.tool},
             {"version", r.version},
             {"input", {{"field", r.field}, {"dimension", r.n}, {"names", r.names}, {"generators", r.generators}}},
             {"commuting", r.commuting},
             {"spectral_blocks", r.blocks},
             {"triangular_forms", r.forms},
             {"invariant_family", {{"r", r.r}, {"exact", r.exact}, {"subspaces", r.subspaces}}},
             {"invariant_tree", r.tree},
             {"points", r.points},
             {"config", r.config}};
}

void from_json(const json& j, AnalysisReport& r) {
    r.tool = j.at("tool").get<std::string>();
    r.version = j.at("version").get<std::string>();
    const auto& in = j.at("input");
    r.field = in.at("field").get<std::string>();
    r.n = in.at("dimension").get<std::size_t>();
    r.names = in.at("names").get<std::vector<std::string>>();
    r.generators = in.at("generators").get<std::vector<MatrixText>>();
    r.commuting = j.at("commuting").get<bool>();
    r.blocks = j.at("spectral_blocks").get<std::vector<BlockReport>>();
    r.forms = j.at("triangular_forms").get<std::vector<FormReport>>();
    const auto& fam = j.at("invariant_family");
    r.r = fam.at("r").get<std::size_t>();
    r.exact = fam.at("exact").get<bool>();
    r.subspaces = fam.at("subspaces").get<std::vector<SubspaceReport>>();
    r.tree = j.at("invariant_tree").get<TreeReport>();
    r.points = j.at("points").get<std::vector<PointReport>>();
    r.config = j.at("config").get<ReportConfig>();
}

const char* version() { return "1.0.0"; }

PointReport analyze_point(const GeneratorSet& group, const InvariantFamily& family, const std::vector<Scalar>& point,
                          const ReportConfig& config, OrbitCloud* cloud_out) {
    if (point.size() != group.dimension()) throw DimensionMismatch("point dimension does not match the group");
    PointReport p;
    for (const auto& x : point) p.point.push_back(text_of(x));
    const auto m = membership(family, point, config.structure());
    p.membership = m.in_u() ? "IN_U" : "IN_H";
    p.containing = m.containing;
    const auto explored = explore_orbit(group, point, config.max_exponent, config.orbit(), config.classify());
    const auto& verdict = explored.verdict;
    OrbitCloud cloud;
    if (cloud_out) cloud = enumerate_orbit(group, point, explored.bound, config.orbit());
    p.verdict = to_string(verdict.kind);
    p.dimension = verdict.dimension;
    p.bound = explored.bound;
    p.stabilized = explored.stabilized;
    p.window_points = verdict.window_points;
    p.gap = finite(verdict.gap);
    p.min_distance = finite(verdict.min_distance);
    p.clipped = verdict.clipped;
    if (config.density) {
        DensityOptions d;
        d.samples = config.density_samples;
        d.bound = config.density_bound;
        d.seed = config.seed;
        d.orbit = config.orbit();
        d.classify = config.classify();
        const auto check = density_propagation_check(group, family, verdict, d);
        p.density = DensityCheckReport{check.skipped, check.reason, check.samples.size(), check.failures};
    }
    if (cloud_out) *cloud_out = std::move(cloud);
    return p;
}

AnalysisReport analyze(const ProblemInput& input, const ReportConfig& config) {
    ScopedPrecision precision(config.precision);
    AnalysisReport rep;
    rep.version = version();
    rep.config = config;
    rep.field = field_name(input.field);
    rep.n = input.dimension;
    for (const auto& g : input.generators) rep.generators.push_back(text_of(g));

    const GeneratorSet group = input.group();
    rep.names = group.names();
    rep.commuting = true;

    const auto opts = config.structure();
    const InvariantFamily family = invariant_family(group, opts);
    for (const auto& b : family.blocks) {
        BlockReport br;
        br.dimension = b.dim();
        for (const auto& e : b.eigenvalues) br.eigenvalues.push_back({text_of(e), e.multiplicity});
        br.partner = b.partner;
        rep.blocks.push_back(std::move(br));
    }
    for (const auto& f : family.forms) {
        FormReport fr;
        fr.dimension = f.adapted_basis.cols();
        fr.level_sizes = f.level_sizes;
        for (const auto& mu : f.mu) fr.mu.push_back(text_of(mu));
        fr.adapted_basis = f.exact_adapted_basis ? text_of(*f.exact_adapted_basis) : text_of(f.adapted_basis);
        rep.forms.push_back(std::move(fr));
    }
    rep.r = family.r();
    rep.exact = family.is_exact();
    std::vector<NumericMatrix> numeric_gens;
    for (const auto& g : group.generators()) numeric_gens.push_back(to_numeric(g));
    for (const auto& h : family.subspaces) {
        SubspaceReport sr;
        sr.dimension = h.dim();
        sr.tag = to_string(h.tag);
        sr.block = h.block;
        if (h.exact) {
            sr.basis = text_of(h.exact->basis());
            sr.residual = invariance_residual(group.generators(), h.exact->basis(), opts.spectral.linalg());
        } else {
            sr.basis = text_of(h.numeric.basis());
            sr.residual = invariance_residual(numeric_gens, h.numeric.basis(), opts.spectral.linalg());
        }
        rep.subspaces.push_back(std::move(sr));
    }
    const InvariantTree tree = invariant_tree(group, std::nullopt, opts);
    rep.tree.depth = tree.depth;
    for (const auto& node : tree.nodes) rep.tree.node_dimensions.push_back(node.dim());

    for (const auto& pt : input.points) rep.points.push_back(analyze_point(group, family, pt, config));
    return rep;
}

}  // namespace abdyn
