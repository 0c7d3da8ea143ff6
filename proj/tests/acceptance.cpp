// Runs the full-size presets and prints one PASS/FAIL line per acceptance criterion.
#include "sclaw/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <thread>

namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string id;
    std::string preset;
};

const std::vector<Criterion> kCriteria = {
    {"oracle-equivalence", "validate-oracle"},   {"positivity-anomaly", "validate-positivity"},
    {"cdf-convergence", "case1-convergence"},    {"sample-efficiency", "case1-convergence"},
    {"monte-carlo-rate", "case1-convergence"},   {"mise-rate", "case1-m-estimation"},
    {"structure-identities", "case1-m-estimation"}, {"case2-statics", "case2-analytic"},
    {"long-time-limit", "case1-pdf-evolution"},  {"error-bound", "validate-bound"},
    {"bandwidth-study", "case1-bandwidth"},
};

}  // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "sclaw_acceptance";
    const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::map<std::string, sclaw::RunSummary> runs;
    for (const auto& c : kCriteria) {
        if (runs.count(c.preset)) continue;
        sclaw::ExperimentConfig cfg = sclaw::preset_defaults(c.preset);
        cfg.out_dir = root / c.preset;
        cfg.jobs = jobs;
        try {
            runs[c.preset] = sclaw::run_preset(cfg);
            std::cerr << "ran " << c.preset << " in " << runs[c.preset].wall_seconds << " s\n";
        } catch (const std::exception& e) {
            std::cerr << c.preset << " failed: " << e.what() << '\n';
            runs[c.preset] = sclaw::RunSummary{c.preset, cfg.out_dir, {}, 0.0};
        }
    }

    int failed = 0;
    for (const auto& c : kCriteria) {
        const auto& run = runs[c.preset];
        bool pass = false;
        std::string detail;
        for (const auto& a : run.assertions) {
            if (a.id != c.id) continue;
            if (detail.empty()) pass = true;
            pass = pass && a.passed;
            if (!detail.empty()) detail += "; ";
            detail += a.detail;
        }
        if (detail.empty()) detail = "no result";
        if (!pass) ++failed;
        std::cout << (pass ? "PASS " : "FAIL ") << c.id << " [" << c.preset << "]: " << detail << '\n';
    }
    std::cout << (kCriteria.size() - failed) << "/" << kCriteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
