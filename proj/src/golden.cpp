#include "nullframe/golden.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace nullframe {

namespace {

using nlohmann::json;

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct CheckContext {
    const JobSpec& job;
    double tol_floor;  // from --tol; infinity when absent

    double tol(const json& check, const char* key, double fallback) const {
        double t = check.contains(key) ? check[key].get<double>() : fallback;
        return std::min(t, tol_floor);
    }
};

GradientConvention check_convention(const json& check, const JobSpec& job) {
    if (check.contains("convention"))
        return gradient_convention_from_string(check["convention"].get<std::string>());
    return job.convention;
}

GoldenCheck eval_check(const json& check, const CheckContext& ctx, const std::string& stem) {
    const std::string kind = check.at("check").get<std::string>();
    GoldenCheck result;
    result.name = stem + "/" + kind;
    if (check.contains("which")) result.name += ":" + check["which"].get<std::string>();
    if (check.contains("sigma")) result.name += ":" + check["sigma"].get<std::string>();
    if (check.contains("label"))
        result.name += ":" + check["label"].get<std::string>();
    const JobSpec& job = ctx.job;

    if (kind == "null_deviation") {
        const double tol = ctx.tol(check, "tol", 1e-10);
        const CurveCheck c = verify_curve(job.curve, tol);
        result.pass = c.max_null_deviation <= tol;
        result.detail = "max |g(a',a')| = " + format_value(c.max_null_deviation) +
                        " (tol " + format_value(tol) + ")";
    } else if (kind == "pseudo_arc_deviation") {
        const double tol = ctx.tol(check, "tol", 1e-10);
        const CurveCheck c = verify_curve(job.curve, tol);
        result.pass = c.max_pseudo_arc_deviation <= tol;
        result.detail = "max |g(a'',a'') - 1| = " + format_value(c.max_pseudo_arc_deviation) +
                        " (tol " + format_value(tol) + ")";
    } else if (kind == "eikonal_norm") {
        const double tol = ctx.tol(check, "tol", 1e-10);
        const double expected = check.at("value").get<double>();
        const EikonalCheck e = eikonal_deviation(*job.field, job.curve, tol, job.convention);
        const double gap = std::abs(e.norm_value - expected);
        result.pass = e.is_eikonal && gap <= tol;
        result.detail = "|grad f| = " + format_value(e.norm_value) + " (expected " +
                        format_value(expected) + ", deviation " +
                        format_value(e.max_deviation) + ", tol " + format_value(tol) + ")";
    } else if (kind == "helix" || kind == "slant") {
        const double tol = ctx.tol(check, "tol", 1e-10);
        const GradientConvention conv = check_convention(check, job);
        Tolerances tols = job.tolerances;
        tols.const_tol = std::min(tols.const_tol, ctx.tol_floor);
        const ClassificationReport rep = classify(job.curve, *job.field, tols, conv);
        const ConstancyVerdict& v = kind == "helix" ? rep.helix : rep.slant;
        const bool expected_verdict = check.at("verdict").get<bool>();
        bool ok = v.verdict == expected_verdict;
        std::string detail = kind + " is " + to_string(v.status) + " under " +
                             to_string(conv) + " (c = " + format_value(v.c) + ")";
        if (ok && expected_verdict && check.contains("c")) {
            const double expected_c = check["c"].get<double>();
            ok = std::abs(v.c - expected_c) <= tol;
            detail += ", expected c = " + format_value(expected_c);
        }
        if (ok && check.contains("profile")) {
            // The sampled pairing must match a closed-form profile in t.
            const ExprAst profile = parse_expr(check["profile"].get<std::string>(), {"t"});
            const double profile_tol = ctx.tol(check, "profile_tol", 1e-8);
            const std::vector<double>& values =
                kind == "helix" ? rep.grad_xi_profile : rep.grad_N_profile;
            double max_gap = 0.0;
            for (std::size_t i = 0; i < rep.grid.size(); ++i) {
                const double ref = eval_scalar(profile, std::array<double, 1>{rep.grid[i]});
                max_gap = std::max(max_gap, std::abs(values[i] - ref));
            }
            ok = max_gap <= profile_tol;
            detail += ", profile gap " + format_value(max_gap);
        }
        if (ok && check.value("expect_warning", false)) {
            ok = !rep.warnings.empty();
            detail += ok ? ", warning emitted" : ", expected a warning but none was emitted";
        }
        result.pass = ok;
        result.detail = detail;
    } else if (kind == "frame_vectors") {
        const double tol = ctx.tol(check, "tol", 1e-12);
        const std::string which = check.at("which").get<std::string>();
        const json& expected = check.at("expected");
        std::array<ExprAst, 4> refs;
        for (int i = 0; i < 4; ++i)
            refs[static_cast<std::size_t>(i)] =
                parse_expr(expected.at(static_cast<std::size_t>(i)).get<std::string>(), {"t"});
        const FramePath path = frame_path(job.curve, job.tolerances.frame_tol);
        double max_gap = 0.0;
        for (const CartanFrameSample& s : path.samples) {
            const Vec4 actual = which == "xi" ? s.xi
                                : which == "N" ? s.N
                                : which == "W1" ? s.W1
                                                : s.W2;
            for (int i = 0; i < 4; ++i) {
                const double ref = eval_scalar(refs[static_cast<std::size_t>(i)],
                                               std::array<double, 1>{s.t});
                max_gap = std::max(max_gap, std::abs(actual[i] - ref));
            }
        }
        result.pass = max_gap <= tol;
        result.detail = which + " componentwise gap " + format_value(max_gap) + " (tol " +
                        format_value(tol) + ")";
    } else if (kind == "sigma_max") {
        const double tol = ctx.tol(check, "tol", 1e-12);
        const std::string which = check.at("sigma").get<std::string>();
        const FramePath path = frame_path(job.curve, job.tolerances.frame_tol);
        double max_abs = 0.0;
        for (const CartanFrameSample& s : path.samples)
            max_abs = std::max(max_abs, std::abs(which == "sigma1" ? s.sigma1 : s.sigma2));
        result.pass = max_abs <= tol;
        result.detail = "max |" + which + "| = " + format_value(max_abs) + " (tol " +
                        format_value(tol) + ")";
    } else if (kind == "theorem4_residuals") {
        const double tol = ctx.tol(check, "tol", 1e-8);
        const Theorem4Check t4 =
            theorem4_residuals(job.curve, *job.field, job.tolerances.const_tol);
        result.pass = t4.max_residual() <= tol;
        result.detail = "max residual = " + format_value(t4.max_residual()) + " (tol " +
                        format_value(tol) + ")";
    } else if (kind == "corollary3_axis") {
        const double tol = ctx.tol(check, "tol", 1e-12);
        Corollary3Params params;
        params.c = check.at("c").get<double>();
        params.m = check.at("m").get<double>();
        params.n = check.at("n").get<double>();
        params.k = check.at("k").get<double>();
        const json& expected = check.at("expected");
        const Vec4 ref = {expected.at(0).get<double>(), expected.at(1).get<double>(),
                          expected.at(2).get<double>(), expected.at(3).get<double>()};
        const FramePath path = frame_path(job.curve, job.tolerances.frame_tol);
        double max_gap = 0.0;
        for (const CartanFrameSample& s : path.samples) {
            const Vec4 axis = corollary3_axis(params, s);
            max_gap = std::max(max_gap, max_abs_component(axis - ref));
        }
        result.pass = max_gap <= tol;
        result.detail = "axis gap " + format_value(max_gap) + " at every grid t (tol " +
                        format_value(tol) + ")";
    } else {
        result.pass = false;
        result.detail = "unknown check kind '" + kind + "'";
    }
    return result;
}

}  // namespace

int GoldenSuiteResult::failures() const {
    int n = 0;
    for (const GoldenCheck& c : checks)
        if (!c.pass) ++n;
    return n;
}

GoldenSuiteResult verify_reference_suite(const std::string& data_dir,
                                         std::optional<double> tol_override) {
    namespace fs = std::filesystem;
    GoldenSuiteResult result;

    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(data_dir, ec)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot read data directory '" + data_dir + "': " + ec.message());
    if (files.empty()) throw IoError("no golden files found under '" + data_dir + "'");
    std::sort(files.begin(), files.end());

    const double tol_floor =
        tol_override ? *tol_override : std::numeric_limits<double>::infinity();

    for (const fs::path& file : files) {
        std::ifstream in(file);
        if (!in) throw IoError("cannot open golden file '" + file.string() + "'");
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw SchemaError("golden file '" + file.string() + "' is not valid JSON: " +
                              e.what());
        }
        const std::string stem = doc.contains("name") ? doc["name"].get<std::string>()
                                                      : file.stem().string();
        const JobSpec job = parse_job(doc.at("job"));
        const CheckContext ctx{job, tol_floor};
        for (const json& check : doc.at("expect")) {
            GoldenCheck gc;
            try {
                gc = eval_check(check, ctx, stem);
            } catch (const Error& e) {
                gc.name = stem + "/" + check.value("check", "?");
                gc.pass = false;
                gc.detail = std::string("error: ") + e.what();
            }
            result.rendered += (gc.pass ? "[PASS] " : "[FAIL] ") + gc.name + ": " + gc.detail + "\n";
            result.all_pass = result.all_pass && gc.pass;
            result.checks.push_back(std::move(gc));
        }
    }
    return result;
}

}  // namespace nullframe
