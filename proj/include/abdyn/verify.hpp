#pragma once

// End-to-end verification of the reference examples: closed versus dense orbits of
// the shear groups, the determinant criterion for the complex shear group, and the
// convergent unbounded sequence of the radical shear group.
//
// Each claim is recomputed from the fixture, so a modified fixture changes the
// outcome instead of being compared against stored answers.

#include "abdyn/report.hpp"

#include <string>
#include <vector>

namespace abdyn {

struct ExampleSuite {
    /// Points: a point with a closed orbit, then one with a dense orbit.
    ProblemInput shear_3d;
    ProblemInput shear_4d;
    ProblemInput complex_shear_5d;
    /// Points: u, then the limit point v.
    ProblemInput radical_shear_4d;
};

/// The built-in fixtures (identical to the files under fixtures/).
ExampleSuite default_examples();
/// Names used for fixture files: "<name>.json".
std::vector<std::string> example_names();
ProblemInput& example_by_name(ExampleSuite& suite, const std::string& name);

struct VerifyOptions {
    long discrete_bound = 100;
    long line_bound = 1000;
    long plane_bound = 200;
    long approximation_bound = 10000;
    double approximation_tolerance = 1e-4;
    double convergence_tolerance = 1e-3;
    double unbounded_entry = 1e3;
    ReportConfig config;
};

struct ClaimResult {
    std::string example;
    std::string claim;
    bool passed = false;
    std::string detail;
};

std::vector<ClaimResult> verify_examples(const ExampleSuite& suite, const VerifyOptions& opts = {});

}  // namespace abdyn
