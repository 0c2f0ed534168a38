#pragma once

// Problem files and analysis reports.
//
// A problem file is JSON with `field` ("real" or "complex"), `dimension`,
// `generators` (row-major matrices of scalar expressions), and optional `names`
// and `points`. Reports carry decimal renderings next to exact expressions and
// every configuration value needed to rerun the analysis.

#include "abdyn/dynamics.hpp"
#include "abdyn/structure.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abdyn {

struct ProblemInput {
    Field field = Field::Real;
    std::size_t dimension = 0;
    std::vector<ExactMatrix> generators;
    std::vector<std::string> names;
    std::vector<std::vector<Scalar>> points;

    GeneratorSet group() const;
};

/// Throws ParseError for malformed files and DimensionMismatch for inconsistent sizes.
ProblemInput parse_problem(const nlohmann::json& j);
ProblemInput load_problem(const std::string& path);
nlohmann::json problem_to_json(const ProblemInput& input);

/// Splits "1, sqrt(2), 0" at top-level commas and parses each entry.
std::vector<Scalar> parse_point(const std::string& text);

/// Fixed-digit decimal of a numeric value: "x" or "x+yi" / "x-yi".
std::string format_decimal(const Complex& z, int digits = 17);

struct ValueText {
    std::string decimal;
    /// Empty when only a numeric value is known.
    std::string exact;
    bool operator==(const ValueText&) const = default;
};

using MatrixText = std::vector<std::vector<ValueText>>;

struct EigenvalueReport {
    ValueText value;
    std::size_t multiplicity = 0;
    bool operator==(const EigenvalueReport&) const = default;
};

struct BlockReport {
    std::size_t dimension = 0;
    /// Eigenvalue of each generator on the block.
    std::vector<EigenvalueReport> eigenvalues;
    std::optional<std::size_t> partner;
    bool operator==(const BlockReport&) const = default;
};

struct FormReport {
    std::size_t dimension = 0;
    std::vector<std::size_t> level_sizes;
    std::vector<ValueText> mu;
    /// Basis (columns) in which the piece is lower triangular.
    MatrixText adapted_basis;
    bool operator==(const FormReport&) const = default;
};

struct SubspaceReport {
    std::size_t dimension = 0;
    std::string tag;
    std::size_t block = 0;
    MatrixText basis;
    /// Largest invariance residual over the generators (0 on the exact backend).
    double residual = 0;
    bool operator==(const SubspaceReport&) const = default;
};

struct TreeReport {
    std::size_t depth = 0;
    std::vector<std::size_t> node_dimensions;
    bool operator==(const TreeReport&) const = default;
};

struct DensityCheckReport {
    bool skipped = false;
    std::string reason;
    std::size_t samples = 0;
    std::vector<std::size_t> failures;
    bool operator==(const DensityCheckReport&) const = default;
};

struct PointReport {
    std::vector<ValueText> point;
    /// "IN_U" or "IN_H".
    std::string membership;
    std::vector<std::size_t> containing;
    std::string verdict;
    std::size_t dimension = 0;
    /// Bound of the final cloud and whether the verdict had stabilized there.
    long bound = 0;
    bool stabilized = false;
    std::size_t window_points = 0;
    std::optional<double> gap;
    std::optional<double> min_distance;
    bool clipped = false;
    /// Present when the density check across U was requested.
    std::optional<DensityCheckReport> density;
    bool operator==(const PointReport&) const = default;
};

struct ReportConfig {
    unsigned precision = 128;
    double tol = 1e-9;
    long max_exponent = 256;
    std::uint64_t seed = 0;
    double window = 1.0;
    double gap_threshold = 0.01;
    double covering_threshold = 0.15;
    double min_distance_factor = 100.0;
    /// Run the density check (seeded by `seed`) for points with dense orbits.
    bool density = false;
    std::size_t density_samples = 20;
    long density_bound = 12;
    bool operator==(const ReportConfig&) const = default;

    StructureOptions structure() const;
    OrbitOptions orbit() const;
    ClassifyOptions classify() const;
};

struct AnalysisReport {
    std::string tool = "abdyn";
    std::string version;
    std::string field;
    std::size_t n = 0;
    std::vector<std::string> names;
    std::vector<MatrixText> generators;
    bool commuting = false;
    std::vector<BlockReport> blocks;
    std::vector<FormReport> forms;
    std::size_t r = 0;
    bool exact = false;
    std::vector<SubspaceReport> subspaces;
    TreeReport tree;
    std::vector<PointReport> points;
    ReportConfig config;
    bool operator==(const AnalysisReport&) const = default;
};

void to_json(nlohmann::json& j, const ValueText& v);
void from_json(const nlohmann::json& j, ValueText& v);
void to_json(nlohmann::json& j, const EigenvalueReport& e);
void from_json(const nlohmann::json& j, EigenvalueReport& e);
void to_json(nlohmann::json& j, const BlockReport& b);
void from_json(const nlohmann::json& j, BlockReport& b);
void to_json(nlohmann::json& j, const FormReport& f);
void from_json(const nlohmann::json& j, FormReport& f);
void to_json(nlohmann::json& j, const SubspaceReport& s);
void from_json(const nlohmann::json& j, SubspaceReport& s);
void to_json(nlohmann::json& j, const TreeReport& t);
void from_json(const nlohmann::json& j, TreeReport& t);
void to_json(nlohmann::json& j, const DensityCheckReport& d);
void from_json(const nlohmann::json& j, DensityCheckReport& d);
void to_json(nlohmann::json& j, const PointReport& p);
void from_json(const nlohmann::json& j, PointReport& p);
void to_json(nlohmann::json& j, const ReportConfig& c);
void from_json(const nlohmann::json& j, ReportConfig& c);
void to_json(nlohmann::json& j, const AnalysisReport& r);
void from_json(const nlohmann::json& j, AnalysisReport& r);

/// Library version string.
const char* version();

/// Runs the structure analysis and classifies every input point at the configured bound.
/// Throws NotAbelian, NumericAmbiguity subclasses and the errors of the input checks.
AnalysisReport analyze(const ProblemInput& input, const ReportConfig& config = {});

PointReport analyze_point(const GeneratorSet& group, const InvariantFamily& family, const std::vector<Scalar>& point,
                          const ReportConfig& config, OrbitCloud* cloud = nullptr);

}  // namespace abdyn
