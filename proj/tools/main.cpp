#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nullframe/golden.hpp"
#include "nullframe/job.hpp"

#ifndef NULLFRAME_DATA_DIR
#define NULLFRAME_DATA_DIR "data/golden"
#endif

namespace {

int run_analyze(const std::string& job_path, const std::string& out_dir, bool csv,
                const std::optional<std::string>& convention,
                const std::optional<double>& tol) {
    nullframe::JobSpec job = nullframe::load_job_file(job_path);
    if (convention)
        job.convention = nullframe::gradient_convention_from_string(*convention);
    if (tol) job.tolerances.const_tol = *tol;

    const nlohmann::json report = nullframe::run_job(job);

    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw nullframe::IoError("cannot create output directory '" + out_dir +
                                     "': " + ec.message());
        const std::string path =
            (std::filesystem::path(out_dir) / "report.json").string();
        std::ofstream out(path);
        if (!out) throw nullframe::IoError("cannot open '" + path + "' for writing");
        out << report.dump(2) << '\n';
        if (!out) throw nullframe::IoError("write failed for '" + path + "'");
        std::cout << "wrote " << path << '\n';
        if (csv) {
            for (const std::string& file : nullframe::export_profiles(report, out_dir))
                std::cout << "wrote " << file << '\n';
        }
    } else {
        std::cout << report.dump(2) << '\n';
        if (csv) {
            for (const std::string& file : nullframe::export_profiles(report, "."))
                std::cerr << "wrote " << file << '\n';
        }
    }

    // Task-level errors are embedded in the report; reflect them in the
    // exit code so batch callers notice.
    for (const auto& [task, value] : report.at("results").items()) {
        (void)task;
        if (value.is_object() && value.contains("error")) return 1;
    }
    return 0;
}

int run_verify_paper(const std::string& data_dir, const std::optional<double>& tol) {
    const nullframe::GoldenSuiteResult result =
        nullframe::verify_reference_suite(data_dir, tol);
    std::cout << result.rendered;
    if (result.all_pass)
        std::cout << "all " << result.checks.size() << " checks passed\n";
    else
        std::cout << result.failures() << " of " << result.checks.size()
                  << " checks FAILED\n";
    return result.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cartan frames, curvatures and eikonal-helix classification for null "
                 "curves in flat Minkowski 4-space"};
    app.require_subcommand(1);

    std::string job_path;
    std::string out_dir;
    bool csv = false;
    std::optional<std::string> convention;
    std::optional<double> tol;

    CLI::App* analyze = app.add_subcommand("analyze", "run the tasks of a JSON job file");
    analyze->add_option("job", job_path, "job file (JSON)")->required();
    analyze->add_option("--out", out_dir, "output directory for report.json and CSV files");
    analyze->add_flag("--csv", csv, "export sampled profiles as CSV");
    analyze->add_option("--convention", convention,
                       "gradient convention: metric | partials-tuple")
        ->check(CLI::IsMember({"metric", "partials-tuple"}));
    analyze->add_option("--tol", tol, "override the constancy tolerance");

    std::string data_dir = NULLFRAME_DATA_DIR;
    CLI::App* verify = app.add_subcommand(
        "verify-paper", "re-run the bundled reference examples and identity checks");
    verify->add_option("--data", data_dir, "directory with the golden example files");
    verify->add_option("--tol", tol, "tighten every check tolerance to this value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(job_path, out_dir, csv, convention, tol);
        if (verify->parsed()) return run_verify_paper(data_dir, tol);
    } catch (const nullframe::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
