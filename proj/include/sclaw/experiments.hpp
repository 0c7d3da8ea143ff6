#ifndef SCLAW_EXPERIMENTS_HPP
#define SCLAW_EXPERIMENTS_HPP

#include "sclaw/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sclaw {

struct ExperimentConfig {
    std::string preset;
    CaseId case_id = CaseId::I;
    double epsilon = 0.1;
    double sigma = 0.5;
    double shape = 2.8;
    double scale = 0.18;
    std::vector<std::size_t> n_list;
    double h_v = 0.01;
    std::optional<double> hv_rule_c;  // h_v = C N^(-1/5) when set
    std::optional<double> dt;         // default_dt(t) when unset
    std::vector<double> t_list;
    std::vector<double> x_list;
    double v_min = -3.0;
    double v_max = 3.0;
    int v_points = 601;
    std::uint64_t seed = 20240917;
    int repeats = 20;
    int jobs = 1;
    std::filesystem::path out_dir;

    ModelParams params() const;
    double bandwidth(std::size_t n) const;
    double step(double t) const;
    void validate() const;
};

const std::vector<std::string>& preset_names();

/// Defaults of a preset; throws std::invalid_argument for unknown names.
ExperimentConfig preset_defaults(const std::string& name);

/// Whether the preset is tied to one initial-data family (case1-* / case2-*).
std::optional<CaseId> preset_case(const std::string& name);

struct Assertion {
    std::string id;           // criterion family, shared by related checks
    std::string description;
    bool passed = false;
    std::string detail;
};

struct RunSummary {
    std::string preset;
    std::filesystem::path out_dir;
    std::vector<Assertion> assertions;
    double wall_seconds = 0.0;

    bool passed() const;
};

/// Runs a preset and writes manifest.json, summary.json, SCHEMA.md and the data
/// files into cfg.out_dir (created if missing).
RunSummary run_preset(const ExperimentConfig& cfg);

}  // namespace sclaw

#endif  // SCLAW_EXPERIMENTS_HPP
