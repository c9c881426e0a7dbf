#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nullframe/classify.hpp"
#include "nullframe/eikonal.hpp"
#include "nullframe/frame.hpp"

namespace nullframe {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "nullframe 0.1.0";

enum class Task { Verify, Frame, Classify, Theorems, Synthesize };

std::string to_string(Task t);

struct SynthesizeSpec {
    std::string sigma1_text;
    std::string sigma2_text;
    ExprAst sigma1;
    ExprAst sigma2;
    double t_min = 0.0;
    double t_max = 1.0;
    int sample_count = 201;
    FrenetInit init;
    double c = 1.0;           // helix constant for the axis check
    double phi_offset = 0.0;  // antiderivative perturbation (negative control)
};

struct JobSpec {
    std::array<std::string, 4> curve_text;
    CurveSpec curve;
    std::optional<FieldSpec> field;
    std::string field_text;
    Tolerances tolerances;
    GradientConvention convention = GradientConvention::Metric;
    std::vector<Task> tasks;
    std::optional<SynthesizeSpec> synthesize;
    std::optional<Corollary3Params> corollary3;
};

// Throws SchemaError naming the offending field.
JobSpec parse_job(const nlohmann::json& doc);
JobSpec load_job_file(const std::string& path);

// Normalized echo of a parsed job (defaults filled in).
nlohmann::json job_to_json(const JobSpec& job);

// Executes the requested tasks in the fixed order verify, frame, classify,
// theorems, synthesize. Task-level failures are embedded in the report and
// do not abort the remaining tasks. The report is deterministic for a fixed
// job (no timestamps, sorted keys).
nlohmann::json run_job(const JobSpec& job);

// One CSV per sampled profile in the report (17 significant digits,
// RFC 4180 quoting). Returns the written paths.
std::vector<std::string> export_profiles(const nlohmann::json& report,
                                         const std::string& out_dir);

}  // namespace nullframe
