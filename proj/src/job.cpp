#include "nullframe/job.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace nullframe {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

const json& require_field(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object()) schema_fail(ctx, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_fail(ctx + "." + key, "missing required field");
    return *it;
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) schema_fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_fail(path, "expected an integer");
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_fail(path, "expected a string");
    return j.get<std::string>();
}

ExprAst parse_schema_expr(const std::string& text, const std::vector<std::string>& vars,
                          const std::string& path) {
    try {
        return parse_expr(text, vars);
    } catch (const Error& e) {
        schema_fail(path, std::string("bad expression: ") + e.what());
    }
}

Vec4 as_vec4(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) schema_fail(path, "expected an array of 4 numbers");
    return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]"),
            as_double(j[2], path + "[2]"), as_double(j[3], path + "[3]")};
}

Task task_from_string(const std::string& s, const std::string& path) {
    if (s == "verify") return Task::Verify;
    if (s == "frame") return Task::Frame;
    if (s == "classify") return Task::Classify;
    if (s == "theorems") return Task::Theorems;
    if (s == "synthesize") return Task::Synthesize;
    schema_fail(path, "unknown task '" + s + "'");
}

json vec4_to_json(const Vec4& v) { return json::array({v.x1, v.x2, v.x3, v.x4}); }

json verdict_to_json(const ConstancyVerdict& v) {
    return {{"verdict", v.verdict},
            {"status", to_string(v.status)},
            {"c", v.c},
            {"deviation", v.deviation}};
}

std::string error_type_name(const Error& e) {
    if (dynamic_cast<const SyntaxError*>(&e)) return "SyntaxError";
    if (dynamic_cast<const UnknownIdentifier*>(&e)) return "UnknownIdentifier";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const NotNull*>(&e)) return "NotNull";
    if (dynamic_cast<const NotPseudoArc*>(&e)) return "NotPseudoArc";
    if (dynamic_cast<const DegeneratePseudoArc*>(&e)) return "DegeneratePseudoArc";
    if (dynamic_cast<const DegenerateSpan*>(&e)) return "DegenerateSpan";
    if (dynamic_cast<const BadInitialFrame*>(&e)) return "BadInitialFrame";
    if (dynamic_cast<const CurvatureDegenerate*>(&e)) return "CurvatureDegenerate";
    if (dynamic_cast<const CurvatureNotZero*>(&e)) return "CurvatureNotZero";
    if (dynamic_cast<const HessianNotZero*>(&e)) return "HessianNotZero";
    if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
    if (dynamic_cast<const IoError*>(&e)) return "IoError";
    if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
    return "Error";
}

struct ProfileBuilder {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    json to_json() const {
        json rows_json = json::array();
        for (const auto& r : rows) rows_json.push_back(r);
        return {{"name", name}, {"columns", columns}, {"rows", rows_json}};
    }
};

}  // namespace

std::string to_string(Task t) {
    switch (t) {
        case Task::Verify: return "verify";
        case Task::Frame: return "frame";
        case Task::Classify: return "classify";
        case Task::Theorems: return "theorems";
        case Task::Synthesize: return "synthesize";
    }
    return "?";
}

JobSpec parse_job(const json& doc) {
    if (!doc.is_object()) throw SchemaError("job: expected a JSON object");
    if (doc.contains("schema_version")) {
        const int v = as_int(doc["schema_version"], "schema_version");
        if (v != kSchemaVersion)
            schema_fail("schema_version", "unsupported version " + std::to_string(v));
    }

    JobSpec job;

    const json& curve = require_field(doc, "curve", "job");
    const json& comps = require_field(curve, "components", "curve");
    if (!comps.is_array() || comps.size() != 4)
        schema_fail("curve.components", "expected an array of 4 expression strings");
    static const std::vector<std::string> kCurveVar = {"t"};
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string path = "curve.components[" + std::to_string(i) + "]";
        job.curve_text[i] = as_string(comps[i], path);
        job.curve.components[i] = parse_schema_expr(job.curve_text[i], kCurveVar, path);
    }
    const json& domain = require_field(curve, "domain", "curve");
    if (!domain.is_array() || domain.size() != 2)
        schema_fail("curve.domain", "expected [t_min, t_max]");
    job.curve.t_min = as_double(domain[0], "curve.domain[0]");
    job.curve.t_max = as_double(domain[1], "curve.domain[1]");
    if (!(job.curve.t_min < job.curve.t_max))
        schema_fail("curve.domain", "t_min must be < t_max");
    job.curve.sample_count = as_int(require_field(curve, "samples", "curve"), "curve.samples");
    if (job.curve.sample_count < 2) schema_fail("curve.samples", "need at least 2 samples");

    if (doc.contains("field") && !doc["field"].is_null()) {
        job.field_text = as_string(doc["field"], "field");
        static const std::vector<std::string> kFieldVars = {"x1", "x2", "x3", "x4"};
        job.field = FieldSpec{parse_schema_expr(job.field_text, kFieldVars, "field")};
    }

    if (doc.contains("tolerances")) {
        const json& tols = doc["tolerances"];
        if (!tols.is_object()) schema_fail("tolerances", "expected an object");
        if (tols.contains("frame_tol"))
            job.tolerances.frame_tol = as_double(tols["frame_tol"], "tolerances.frame_tol");
        if (tols.contains("const_tol"))
            job.tolerances.const_tol = as_double(tols["const_tol"], "tolerances.const_tol");
        if (tols.contains("ode_tol"))
            job.tolerances.ode_tol = as_double(tols["ode_tol"], "tolerances.ode_tol");
    }

    if (doc.contains("gradient_convention")) {
        const std::string s = as_string(doc["gradient_convention"], "gradient_convention");
        try {
            job.convention = gradient_convention_from_string(s);
        } catch (const Error& e) {
            schema_fail("gradient_convention", e.what());
        }
    }

    const json& tasks = require_field(doc, "tasks", "job");
    if (!tasks.is_array() || tasks.empty())
        schema_fail("tasks", "expected a non-empty array of task names");
    for (std::size_t i = 0; i < tasks.size(); ++i)
        job.tasks.push_back(
            task_from_string(as_string(tasks[i], "tasks"), "tasks[" + std::to_string(i) + "]"));

    const bool needs_field =
        std::any_of(job.tasks.begin(), job.tasks.end(),
                    [](Task t) { return t == Task::Classify || t == Task::Theorems; });
    if (needs_field && !job.field)
        schema_fail("field", "classify/theorems tasks require a field expression");

    if (std::find(job.tasks.begin(), job.tasks.end(), Task::Synthesize) != job.tasks.end() &&
        !doc.contains("synthesize"))
        schema_fail("synthesize", "synthesize task requires a synthesize block");

    if (doc.contains("synthesize")) {
        const json& syn = doc["synthesize"];
        SynthesizeSpec spec;
        spec.sigma1_text = as_string(require_field(syn, "sigma1", "synthesize"), "synthesize.sigma1");
        spec.sigma2_text = as_string(require_field(syn, "sigma2", "synthesize"), "synthesize.sigma2");
        spec.sigma1 = parse_schema_expr(spec.sigma1_text, kCurveVar, "synthesize.sigma1");
        spec.sigma2 = parse_schema_expr(spec.sigma2_text, kCurveVar, "synthesize.sigma2");
        const json& sdomain = require_field(syn, "domain", "synthesize");
        if (!sdomain.is_array() || sdomain.size() != 2)
            schema_fail("synthesize.domain", "expected [t_min, t_max]");
        spec.t_min = as_double(sdomain[0], "synthesize.domain[0]");
        spec.t_max = as_double(sdomain[1], "synthesize.domain[1]");
        spec.sample_count =
            as_int(require_field(syn, "samples", "synthesize"), "synthesize.samples");
        const json& init = require_field(syn, "init_frame", "synthesize");
        spec.init.frame.t = spec.t_min;
        spec.init.frame.xi = as_vec4(require_field(init, "xi", "synthesize.init_frame"),
                                     "synthesize.init_frame.xi");
        spec.init.frame.N = as_vec4(require_field(init, "N", "synthesize.init_frame"),
                                    "synthesize.init_frame.N");
        spec.init.frame.W1 = as_vec4(require_field(init, "W1", "synthesize.init_frame"),
                                     "synthesize.init_frame.W1");
        spec.init.frame.W2 = as_vec4(require_field(init, "W2", "synthesize.init_frame"),
                                     "synthesize.init_frame.W2");
        if (init.contains("position"))
            spec.init.position = as_vec4(init["position"], "synthesize.init_frame.position");
        if (syn.contains("c")) spec.c = as_double(syn["c"], "synthesize.c");
        if (syn.contains("phi_offset"))
            spec.phi_offset = as_double(syn["phi_offset"], "synthesize.phi_offset");
        job.synthesize = std::move(spec);
    }

    if (doc.contains("corollary3")) {
        const json& c3 = doc["corollary3"];
        Corollary3Params params;
        params.c = as_double(require_field(c3, "c", "corollary3"), "corollary3.c");
        params.m = as_double(require_field(c3, "m", "corollary3"), "corollary3.m");
        params.n = as_double(require_field(c3, "n", "corollary3"), "corollary3.n");
        params.k = as_double(require_field(c3, "k", "corollary3"), "corollary3.k");
        if (params.c == 0.0) schema_fail("corollary3.c", "c must be non-zero");
        job.corollary3 = params;
    }

    return job;
}

JobSpec load_job_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open job file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError("job file '" + path + "' is not valid JSON: " + e.what());
    }
    // Golden example files wrap the job under a "job" key; accept them too.
    if (!doc.contains("curve") && doc.contains("job")) return parse_job(doc["job"]);
    return parse_job(doc);
}

json job_to_json(const JobSpec& job) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["curve"] = {{"components", job.curve_text},
                    {"domain", json::array({job.curve.t_min, job.curve.t_max})},
                    {"samples", job.curve.sample_count}};
    if (job.field) doc["field"] = job.field_text;
    doc["tolerances"] = {{"frame_tol", job.tolerances.frame_tol},
                         {"const_tol", job.tolerances.const_tol},
                         {"ode_tol", job.tolerances.ode_tol}};
    doc["gradient_convention"] = to_string(job.convention);
    json tasks = json::array();
    for (Task t : job.tasks) tasks.push_back(to_string(t));
    doc["tasks"] = tasks;
    if (job.synthesize) {
        const SynthesizeSpec& s = *job.synthesize;
        doc["synthesize"] = {{"sigma1", s.sigma1_text},
                             {"sigma2", s.sigma2_text},
                             {"domain", json::array({s.t_min, s.t_max})},
                             {"samples", s.sample_count},
                             {"init_frame",
                              {{"xi", vec4_to_json(s.init.frame.xi)},
                               {"N", vec4_to_json(s.init.frame.N)},
                               {"W1", vec4_to_json(s.init.frame.W1)},
                               {"W2", vec4_to_json(s.init.frame.W2)},
                               {"position", vec4_to_json(s.init.position)}}},
                             {"c", s.c},
                             {"phi_offset", s.phi_offset}};
    }
    if (job.corollary3)
        doc["corollary3"] = {{"c", job.corollary3->c},
                             {"m", job.corollary3->m},
                             {"n", job.corollary3->n},
                             {"k", job.corollary3->k}};
    return doc;
}

json run_job(const JobSpec& job) {
    json report;
    report["schema_version"] = kSchemaVersion;
    report["version"] = kVersion;
    report["job"] = job_to_json(job);

    json results = json::object();
    json warnings = json::array();
    std::vector<ProfileBuilder> profiles;

    auto run_task = [&](Task task, const std::function<json()>& fn) {
        if (std::find(job.tasks.begin(), job.tasks.end(), task) == job.tasks.end()) return;
        const std::string name = to_string(task);
        try {
            results[name] = fn();
        } catch (const Error& e) {
            results[name] = {
                {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }
    };

    run_task(Task::Verify, [&]() -> json {
        const CurveCheck check = verify_curve(job.curve, job.tolerances.frame_tol);
        return {{"is_null", check.is_null},
                {"is_pseudo_arc", check.is_pseudo_arc},
                {"is_cartan", check.is_cartan},
                {"max_null_deviation", check.max_null_deviation},
                {"max_pseudo_arc_deviation", check.max_pseudo_arc_deviation},
                {"min_cartan_gram", check.min_cartan_gram}};
    });

    run_task(Task::Frame, [&]() -> json {
        const FramePath path = frame_path(job.curve, job.tolerances.frame_tol);
        ProfileBuilder profile;
        profile.name = "frame";
        profile.columns = {"t",         "sigma1",   "sigma2", "sigma1_d", "sigma1_dd",
                           "sigma2_d",  "gram_dev", "res_xi", "res_N",    "res_W1",
                           "res_W2"};
        double max_residual = 0.0;
        for (const CartanFrameSample& s : path.samples) {
            const FrenetResiduals res =
                frenet_residuals(job.curve, s.t, job.tolerances.frame_tol);
            max_residual = std::max(max_residual, res.max());
            profile.rows.push_back({s.t, s.sigma1, s.sigma2, s.sigma1_d, s.sigma1_dd,
                                    s.sigma2_d, gram_deviation(s), res.xi_eq, res.N_eq,
                                    res.W1_eq, res.W2_eq});
        }
        profiles.push_back(std::move(profile));
        return {{"samples", static_cast<int>(path.samples.size())},
                {"max_gram_deviation", path.max_gram_deviation()},
                {"max_frenet_residual", max_residual}};
    });

    run_task(Task::Classify, [&]() -> json {
        const ClassificationReport rep =
            classify(job.curve, *job.field, job.tolerances, job.convention);
        for (const std::string& w : rep.warnings)
            warnings.push_back({{"task", "classify"}, {"message", w}});
        ProfileBuilder profile;
        profile.name = "classify";
        profile.columns = {"t", "grad_xi", "grad_N", "grad_norm", "sigma1", "sigma2"};
        for (std::size_t i = 0; i < rep.grid.size(); ++i)
            profile.rows.push_back({rep.grid[i], rep.grad_xi_profile[i], rep.grad_N_profile[i],
                                    rep.grad_norm_profile[i], rep.sigma1_profile[i],
                                    rep.sigma2_profile[i]});
        profiles.push_back(std::move(profile));
        return {{"convention", to_string(rep.convention)},
                {"is_null", rep.curve.is_null},
                {"is_pseudo_arc", rep.curve.is_pseudo_arc},
                {"is_cartan", rep.curve.is_cartan},
                {"eikonal",
                 {{"is_eikonal", rep.eikonal.is_eikonal},
                  {"gradient_is_null", rep.eikonal.gradient_is_null},
                  {"norm_value", rep.eikonal.norm_value},
                  {"max_deviation", rep.eikonal.max_deviation}}},
                {"hessian",
                 {{"holds", rep.hessian.holds},
                  {"max_entry", rep.hessian.max_entry},
                  {"transport_deviation", rep.hessian.transport_deviation}}},
                {"helix", verdict_to_json(rep.helix)},
                {"slant", verdict_to_json(rep.slant)},
                {"corollary2",
                 {{"applicable", rep.corollary2_applicable},
                  {"consistent", rep.corollary2_consistent}}}};
    });

    run_task(Task::Theorems, [&]() -> json {
        json out;

        try {
            const Theorem1Check t1 =
                theorem1_check(job.curve, *job.field, job.tolerances.const_tol);
            out["theorem1"] = {{"linear_along", t1.linear_along},
                               {"derivative_deviation", t1.derivative_deviation},
                               {"helix_constant", t1.helix_constant},
                               {"equivalence_holds", t1.equivalence_holds}};
        } catch (const Error& e) {
            out["theorem1"] = {
                {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }

        try {
            const Theorem2Check t2 = theorem2_condition(job.curve, job.tolerances.const_tol);
            out["theorem2"] = {{"holds", t2.holds},
                               {"max_residual", t2.max_residual},
                               {"sigma1_nonconstant", t2.sigma1_nonconstant}};
        } catch (const Error& e) {
            out["theorem2"] = {
                {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }

        try {
            ProfileBuilder profile;
            profile.name = "theorem3";
            profile.columns = {"t", "det_numeric", "det_formula"};
            bool all_match = true;
            double max_gap = 0.0;
            for (double t : job.curve.grid()) {
                const Theorem3Check t3 = theorem3_det(job.curve, t);
                all_match = all_match && t3.match;
                max_gap = std::max(max_gap,
                                   std::abs(std::abs(t3.det_numeric) - std::abs(t3.det_formula)));
                profile.rows.push_back({t, t3.det_numeric, t3.det_formula});
            }
            profiles.push_back(std::move(profile));
            out["theorem3"] = {{"all_match", all_match}, {"max_abs_gap", max_gap}};
        } catch (const Error& e) {
            out["theorem3"] = {
                {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }

        try {
            const Theorem4Check t4 =
                theorem4_residuals(job.curve, *job.field, job.tolerances.const_tol);
            ProfileBuilder profile;
            profile.name = "theorem4";
            profile.columns = {"t", "a1", "a2", "a3", "c", "r1", "r2", "r3", "r4"};
            for (std::size_t i = 0; i < t4.grid.size(); ++i)
                profile.rows.push_back({t4.grid[i], t4.a1[i], t4.a2[i], t4.a3[i], t4.c[i],
                                        t4.r1[i], t4.r2[i], t4.r3[i], t4.r4[i]});
            profiles.push_back(std::move(profile));
            if (!t4.c_nonzero)
                warnings.push_back(
                    {{"task", "theorems"},
                     {"message", "theorem4: g(grad f, N) is not a non-zero constant; "
                                 "residuals evaluated anyway"}});
            out["theorem4"] = {{"max_r1", t4.max_r1},
                               {"max_r2", t4.max_r2},
                               {"max_r3", t4.max_r3},
                               {"max_r4", t4.max_r4},
                               {"c_mean", t4.c_mean},
                               {"c_deviation", t4.c_deviation},
                               {"c_nonzero", t4.c_nonzero}};
        } catch (const Error& e) {
            out["theorem4"] = {
                {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }

        if (job.corollary3) {
            try {
                const FramePath path = frame_path(job.curve, job.tolerances.frame_tol);
                std::vector<Vec4> axes;
                for (const CartanFrameSample& s : path.samples)
                    axes.push_back(corollary3_axis(*job.corollary3, s));
                double spread = 0.0;
                for (const Vec4& v : axes)
                    spread = std::max(spread, euclidean_norm(v - axes.front()));
                out["corollary3"] = {{"axis", vec4_to_json(axes.front())},
                                     {"max_spread", spread}};
            } catch (const Error& e) {
                out["corollary3"] = {
                    {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
            }
        }
        return out;
    });

    run_task(Task::Synthesize, [&]() -> json {
        const SynthesizeSpec& spec = *job.synthesize;
        const FramePath path = integrate_frenet(spec.sigma1, spec.sigma2, spec.init,
                                                spec.t_min, spec.t_max, spec.sample_count);
        json out;
        out["max_gram_deviation"] = path.max_gram_deviation();
        // Integration quality: Gram drift per unit parameter length.
        out["gram_within_tolerance"] =
            path.max_gram_deviation() <= job.tolerances.ode_tol * (spec.t_max - spec.t_min);

        try {
            const Theorem2Check t2 = theorem2_condition(path, job.tolerances.const_tol);
            out["theorem2"] = {{"holds", t2.holds},
                               {"max_residual", t2.max_residual},
                               {"sigma1_nonconstant", t2.sigma1_nonconstant}};
        } catch (const Error& e) {
            out["theorem2"] = {
                {"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }

        try {
            const AxisCheck axis =
                helix_axis(path, spec.c, job.tolerances.const_tol, spec.phi_offset);
            ProfileBuilder profile;
            profile.name = "synthesize";
            profile.columns = {"t",  "sigma1", "sigma2", "v1", "v2",
                               "v3", "v4",     "g_v_xi"};
            for (std::size_t i = 0; i < path.samples.size(); ++i) {
                const CartanFrameSample& s = path.samples[i];
                const Vec4& v = axis.axis_samples[i];
                profile.rows.push_back({s.t, s.sigma1, s.sigma2, v.x1, v.x2, v.x3, v.x4,
                                        inner(v, s.xi)});
            }
            profiles.push_back(std::move(profile));
            out["axis"] = {{"drift", axis.drift},
                           {"constant_axis", axis.constant_axis},
                           {"g_axis_xi_mean", axis.g_axis_xi_mean},
                           {"g_axis_xi_deviation", axis.g_axis_xi_deviation},
                           {"phi_offset", spec.phi_offset}};
        } catch (const Error& e) {
            out["axis"] = {{"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        }
        return out;
    });

    report["results"] = results;
    report["warnings"] = warnings;
    json profiles_json = json::array();
    for (const ProfileBuilder& p : profiles) profiles_json.push_back(p.to_json());
    report["profiles"] = profiles_json;
    return report;
}

namespace {

std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::vector<std::string> export_profiles(const json& report, const std::string& out_dir) {
    std::vector<std::string> written;
    if (!report.contains("profiles") || report["profiles"].empty()) return written;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    for (const json& profile : report["profiles"]) {
        const std::string name = profile.at("name").get<std::string>();
        const std::string path = (std::filesystem::path(out_dir) / (name + ".csv")).string();
        std::ofstream out(path);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        const auto& columns = profile.at("columns");
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ',';
            out << csv_quote(columns[i].get<std::string>());
        }
        out << '\n';
        for (const json& row : profile.at("rows")) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                out << format_csv_number(row[i].get<double>());
            }
            out << '\n';
        }
        if (!out) throw IoError("write failed for '" + path + "'");
        written.push_back(path);
    }
    return written;
}

}  // namespace nullframe
