#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullframe/job.hpp"

namespace nullframe {

struct GoldenCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct GoldenSuiteResult {
    std::vector<GoldenCheck> checks;
    bool all_pass = true;
    std::string rendered;  // the pass/fail lines, one per check

    int failures() const;
};

// Runs every check declared by the golden files under data_dir (the bundled
// reference examples). tol_override, when set, tightens each check to
// min(declared tolerance, override) so tolerance plumbing is observable.
GoldenSuiteResult verify_reference_suite(const std::string& data_dir,
                                         std::optional<double> tol_override = std::nullopt);

}  // namespace nullframe
