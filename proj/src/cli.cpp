#include "abdyn/cli.hpp"

#include "abdyn/errors.hpp"
#include "abdyn/numeric.hpp"
#include "abdyn/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace abdyn::cli {

namespace {

struct Flags {
    ReportConfig config;
    std::string input;
    std::string output;
    std::string point;
    std::string dump_points;
    std::string fixtures;
    bool json = false;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

std::string membership_text(const PointReport& p) {
    if (p.membership == "IN_U") return "IN_U";
    std::string s;
    for (auto k : p.containing) s += (s.empty() ? "IN_H" : ",IN_H") + std::to_string(k + 1);
    return s;
}

int cmd_analyze(const Flags& flags, std::ostream& out) {
    const auto input = load_problem(flags.input);
    const auto report = analyze(input, flags.config);
    const std::string text = nlohmann::json(report).dump(2) + "\n";
    if (flags.output.empty())
        out << text;
    else
        write_text(flags.output, text);
    return Success;
}

int cmd_orbit(const Flags& flags, std::ostream& out) {
    ScopedPrecision precision(flags.config.precision);
    const auto input = load_problem(flags.input);
    const auto group = input.group();
    const auto family = invariant_family(group, flags.config.structure());
    const auto point = parse_point(flags.point);
    OrbitCloud cloud;
    const auto report =
        analyze_point(group, family, point, flags.config, flags.dump_points.empty() ? nullptr : &cloud);
    if (!flags.dump_points.empty()) {
        std::ofstream f(flags.dump_points, std::ios::binary);
        if (!f) throw Error("cannot write " + flags.dump_points);
        write_cloud_csv(f, cloud);
    }
    if (flags.json) {
        out << nlohmann::json(report).dump(2) << "\n";
        return Success;
    }
    std::string label = report.verdict;
    if (report.verdict == "DENSE_IN_AFFINE") label += "(" + std::to_string(report.dimension) + ")";
    out << "verdict: " << label << "\n";
    out << "membership: " << membership_text(report) << "\n";
    out << "bound: " << report.bound << (report.stabilized ? " (stabilized)" : " (not stabilized)") << "\n";
    out << "window points: " << report.window_points << "\n";
    if (report.gap) out << "gap: " << *report.gap << "\n";
    if (report.min_distance) out << "min distance: " << *report.min_distance << "\n";
    if (report.density) {
        out << "density check: "
            << (report.density->skipped ? "skipped (" + report.density->reason + ")"
                                        : std::to_string(report.density->samples) + " samples, " +
                                              std::to_string(report.density->failures.size()) + " failures")
            << "\n";
    }
    return Success;
}

int cmd_verify(const Flags& flags, std::ostream& out) {
    auto suite = default_examples();
    if (!flags.fixtures.empty()) {
        for (const auto& name : example_names()) {
            const auto path = std::filesystem::path(flags.fixtures) / (name + ".json");
            if (std::filesystem::exists(path)) example_by_name(suite, name) = load_problem(path.string());
        }
    }
    VerifyOptions opts;
    opts.config = flags.config;
    std::size_t failed = 0;
    const auto results = verify_examples(suite, opts);
    if (flags.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : results)
            arr.push_back({{"example", r.example}, {"claim", r.claim}, {"passed", r.passed}, {"detail", r.detail}});
        out << arr.dump(2) << "\n";
    }
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        if (!flags.json)
            out << (r.passed ? "PASS " : "FAIL ") << r.example << ": " << r.claim << " (" << r.detail << ")\n";
    }
    if (!flags.json) out << results.size() - failed << "/" << results.size() << " claims passed\n";
    return failed == 0 ? Success : Failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Invariant subspaces and orbit closures of abelian matrix groups", "abdyn"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags flags;
    app.add_option("--precision", flags.config.precision, "Working precision in bits")->capture_default_str();
    app.add_option("--tol", flags.config.tol, "Comparison tolerance")->capture_default_str();
    app.add_option("--max-exponent", flags.config.max_exponent, "Largest exponent bound K")->capture_default_str();
    app.add_option("--seed", flags.config.seed, "Seed for randomized checks")->capture_default_str();
    app.add_option("--window", flags.config.window, "Half-width of the classification window")->capture_default_str();

    auto* analyze_cmd = app.add_subcommand("analyze", "Invariant subspaces, tree and orbit verdicts of a problem file");
    analyze_cmd->add_option("input", flags.input, "Problem file")->required();
    analyze_cmd->add_option("-o,--output", flags.output, "Report path (default: standard output)");
    analyze_cmd->add_flag("--density", flags.config.density, "Check that density propagates across U");

    auto* orbit_cmd = app.add_subcommand("orbit", "Closure verdict and membership of one point");
    orbit_cmd->add_option("input", flags.input, "Problem file")->required();
    orbit_cmd->add_option("--point", flags.point, "Comma-separated scalar expressions")->required();
    orbit_cmd->add_option("--dump-points", flags.dump_points, "Write the final cloud as CSV");
    orbit_cmd->add_flag("--density", flags.config.density, "Check that density propagates across U");
    orbit_cmd->add_flag("--json", flags.json, "Print the point report as JSON");

    auto* verify_cmd = app.add_subcommand("verify-examples", "Recompute every claim about the reference examples");
    verify_cmd->add_option("--fixtures", flags.fixtures, "Directory with replacement <name>.json fixtures");
    verify_cmd->add_flag("--json", flags.json, "Print results as JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : Failure;
    }

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(flags, out);
        if (orbit_cmd->parsed()) return cmd_orbit(flags, out);
        return cmd_verify(flags, out);
    } catch (const NotAbelian& e) {
        err << "error: " << e.what() << "\n";
        return NotAbelianExit;
    } catch (const NumericAmbiguity& e) {
        err << "error (numeric ambiguity): " << e.what() << "\n";
        return NumericAmbiguityExit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Failure;
    }
}

}  // namespace abdyn::cli
