#ifndef SCLAW_RUN_CONTEXT_HPP
#define SCLAW_RUN_CONTEXT_HPP

// Internal plumbing shared by the preset implementations.

#include "sclaw/experiments.hpp"
#include "sclaw/metrics.hpp"
#include "sclaw/transport.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace sclaw::detail {

/// Shortest round-trip formatting, so identical numbers give identical bytes.
std::string format_number(double value);

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvFile& operator<<(double value);
    CsvFile& operator<<(int value) { return put(std::to_string(value)); }
    CsvFile& operator<<(std::size_t value) { return put(std::to_string(value)); }
    CsvFile& operator<<(const std::string& value) { return put(value); }
    CsvFile& operator<<(const char* value) { return put(value); }
    void end_row();

private:
    CsvFile& put(const std::string& s);

    std::ofstream os_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

class RunContext {
public:
    explicit RunContext(const ExperimentConfig& cfg);

    const ExperimentConfig& cfg;

    /// Path of an output file inside the run directory; registers it in the manifest.
    std::filesystem::path file(const std::string& name, const std::string& schema);

    void check(const std::string& id, const std::string& description, bool passed, const std::string& detail);

    /// Seed of ensemble (n, repeat); the same pair always gets the same seed.
    std::uint64_t ensemble_seed(std::size_t n, int repeat);

    nlohmann::json metrics = nlohmann::json::object();
    std::vector<Assertion> assertions;
    std::vector<ErrorReport> ledger;

    void finish(double wall_seconds);

private:
    std::map<std::string, std::string> files_;
    std::mutex seed_mutex_;
    std::map<std::pair<std::size_t, int>, std::uint64_t> seeds_;
};

Vector v_grid(const ExperimentConfig& cfg, int points = 0);

std::shared_ptr<const EnsembleSolutions> make_ensemble(RunContext& ctx, std::size_t n, int repeat);

/// Each helper evaluates one quantity over the v-grid, in parallel over grid points.
Vector approx_cdf_slice(double t, double x, const Vector& grid, const DriftFunction& drift, double dt,
                        const InitialCdf& G, int jobs);
Vector exact_cdf_slice(const SemiAnalytic& model, double t, double x, const Vector& grid, int jobs);
Vector exact_pdf_slice(const SemiAnalytic& model, double t, double x, const Vector& grid, int jobs);
Vector empirical_cdf_slice(const EnsembleSolutions& ens, double t, double x, const Vector& grid);

/// Drift for ensemble size n: zero drift for n == 0, otherwise the estimator of ensemble (n, repeat).
DriftFunction drift_for(RunContext& ctx, std::size_t n, int repeat);

std::string describe(double value);

// Preset bodies.
void run_case1_pdf_evolution(RunContext& ctx);
void run_case1_moments(RunContext& ctx);
void run_case1_convergence(RunContext& ctx);
void run_case1_m_estimation(RunContext& ctx);
void run_case1_characteristics(RunContext& ctx);
void run_case1_bandwidth(RunContext& ctx);
void run_case2_analytic(RunContext& ctx);
void run_case2_convergence(RunContext& ctx);
void run_validate_oracle(RunContext& ctx);
void run_validate_positivity(RunContext& ctx);
void run_validate_bound(RunContext& ctx);

}  // namespace sclaw::detail

#endif  // SCLAW_RUN_CONTEXT_HPP
