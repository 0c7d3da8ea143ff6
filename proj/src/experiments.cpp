#include "sclaw/experiments.hpp"
#include "sclaw/estimator.hpp"
#include "sclaw/random_models.hpp"
#include "sclaw/transport.hpp"

#include "run_context.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace sclaw {

namespace {

constexpr const char* kVersion = "1.0.0";

using PresetFn = void (*)(detail::RunContext&);

struct PresetEntry {
    const char* name;
    PresetFn run;
};

const std::vector<PresetEntry>& registry() {
    static const std::vector<PresetEntry> entries = {
        {"case1-pdf-evolution", detail::run_case1_pdf_evolution},
        {"case1-moments", detail::run_case1_moments},
        {"case1-convergence", detail::run_case1_convergence},
        {"case1-m-estimation", detail::run_case1_m_estimation},
        {"case1-characteristics", detail::run_case1_characteristics},
        {"case1-bandwidth", detail::run_case1_bandwidth},
        {"case2-analytic", detail::run_case2_analytic},
        {"case2-convergence", detail::run_case2_convergence},
        {"validate-oracle", detail::run_validate_oracle},
        {"validate-positivity", detail::run_validate_positivity},
        {"validate-bound", detail::run_validate_bound},
    };
    return entries;
}

const PresetEntry& find_preset(const std::string& name) {
    for (const auto& e : registry())
        if (name == e.name) return e;
    std::ostringstream os;
    os << "unknown preset '" << name << "'; available:";
    for (const auto& e : registry()) os << ' ' << e.name;
    throw std::invalid_argument(os.str());
}

nlohmann::json config_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["preset"] = c.preset;
    j["case"] = std::string(to_string(c.case_id));
    j["epsilon"] = c.epsilon;
    j["sigma"] = c.sigma;
    j["shape"] = c.shape;
    j["scale"] = c.scale;
    j["n"] = c.n_list;
    j["hv"] = c.h_v;
    j["hv_rule_c"] = c.hv_rule_c ? nlohmann::json(*c.hv_rule_c) : nlohmann::json(nullptr);
    j["dt"] = c.dt ? nlohmann::json(*c.dt) : nlohmann::json("default");
    j["t"] = c.t_list;
    j["x"] = c.x_list;
    j["v_min"] = c.v_min;
    j["v_max"] = c.v_max;
    j["v_points"] = c.v_points;
    j["seed"] = c.seed;
    j["repeats"] = c.repeats;
    j["jobs"] = c.jobs;
    j["out"] = c.out_dir.string();
    return j;
}

}  // namespace

ModelParams ExperimentConfig::params() const {
    ModelParams p = case_id == CaseId::I ? ModelParams::case_i(sigma) : ModelParams::case_ii(shape, scale);
    p.validate();
    return p;
}

double ExperimentConfig::bandwidth(std::size_t n) const {
    if (hv_rule_c) return bandwidth_rule(std::max<std::size_t>(n, 1), *hv_rule_c);
    return h_v;
}

double ExperimentConfig::step(double t) const { return dt ? *dt : default_dt(t); }

void ExperimentConfig::validate() const {
    find_preset(preset);
    params();
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(h_v > 0.0)) throw std::invalid_argument("hv must be positive");
    if (hv_rule_c && !(*hv_rule_c > 0.0)) throw std::invalid_argument("hv-rule-c must be positive");
    if (dt && !(*dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(v_max > v_min) || v_points < 16) throw std::invalid_argument("v-grid needs v_max > v_min and >= 16 points");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    for (double t : t_list)
        if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t values must be finite and >= 0");
    if (auto c = preset_case(preset); c && *c != case_id)
        throw std::invalid_argument("preset " + preset + " requires case " + std::string(to_string(*c)));
    if (case_id == CaseId::II)
        for (double x : x_list)
            if (!(x > 0.0 && x < kPi)) throw std::invalid_argument("Case II x values must lie in (0, pi)");
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) out.emplace_back(e.name);
        return out;
    }();
    return names;
}

std::optional<CaseId> preset_case(const std::string& name) {
    if (name.rfind("case1-", 0) == 0) return CaseId::I;
    if (name.rfind("case2-", 0) == 0) return CaseId::II;
    return std::nullopt;
}

ExperimentConfig preset_defaults(const std::string& name) {
    find_preset(name);
    ExperimentConfig c;
    c.preset = name;
    c.out_dir = std::filesystem::path("runs") / name;
    c.x_list = {kPi};
    const std::vector<double> evolution_times = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 100.0};
    if (name == "case1-pdf-evolution") {
        c.t_list = evolution_times;
    } else if (name == "case1-moments") {
        c.t_list = evolution_times;
        c.x_list.clear();  // full-period grid
    } else if (name == "case1-convergence") {
        c.t_list = {1.0, 2.0, 10.0, 20.0};
        c.n_list = {0, 100, 1000, 10000};
    } else if (name == "case1-m-estimation") {
        c.t_list = {2.0, 10.0};
        c.n_list = {10, 100, 1000, 10000};
    } else if (name == "case1-characteristics") {
        c.t_list = {1.0, 2.0, 10.0};
        c.n_list = {10, 1000};
        c.v_points = 200;
    } else if (name == "case1-bandwidth") {
        c.t_list = {2.0};
        c.n_list = {100, 1000, 10000};
        c.v_points = 301;
        c.repeats = 5;
    } else if (name == "case2-analytic") {
        c.case_id = CaseId::II;
        c.t_list = {1.0, 2.0};
        c.x_list = {0.1 * kPi, 0.3 * kPi, 0.5 * kPi, 0.7 * kPi, 0.9 * kPi, 0.95 * kPi};
        c.v_min = 0.0;
        c.v_max = 1.2;
    } else if (name == "case2-convergence") {
        c.case_id = CaseId::II;
        c.t_list = {1.0, 2.0};
        c.x_list = {0.95 * kPi};
        c.n_list = {0, 100, 1000, 10000};
        c.v_min = 0.0;
        c.v_max = 1.2;
    } else if (name == "validate-oracle") {
        c.t_list = {0.5, 1.0, 2.0};
    } else if (name == "validate-positivity") {
        c.t_list = {0.5, 0.99, 2.0};
    } else if (name == "validate-bound") {
        c.t_list = {0.5, 1.0, 2.0};
    }
    return c;
}

bool RunSummary::passed() const {
    for (const auto& a : assertions)
        if (!a.passed) return false;
    return true;
}

RunSummary run_preset(const ExperimentConfig& cfg) {
    cfg.validate();
    const PresetEntry& entry = find_preset(cfg.preset);
    std::filesystem::create_directories(cfg.out_dir);
    const auto start = std::chrono::steady_clock::now();
    detail::RunContext ctx(cfg);
    entry.run(ctx);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ctx.finish(wall);
    return {cfg.preset, cfg.out_dir, ctx.assertions, wall};
}

namespace detail {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CsvFile::CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header)
    : os_(path), columns_(header.size()) {
    if (!os_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
}

CsvFile& CsvFile::operator<<(double value) { return put(format_number(value)); }

CsvFile& CsvFile::put(const std::string& s) {
    if (in_row_ == columns_) throw std::logic_error("CsvFile: too many fields in row");
    if (in_row_++) os_ << ',';
    os_ << s;
    return *this;
}

void CsvFile::end_row() {
    if (in_row_ != columns_) throw std::logic_error("CsvFile: row has wrong number of fields");
    os_ << '\n';
    in_row_ = 0;
}

RunContext::RunContext(const ExperimentConfig& c) : cfg(c) {}

std::filesystem::path RunContext::file(const std::string& name, const std::string& schema) {
    files_[name] = schema;
    return cfg.out_dir / name;
}

void RunContext::check(const std::string& id, const std::string& description, bool passed,
                       const std::string& detail) {
    assertions.push_back({id, description, passed, detail});
}

std::uint64_t RunContext::ensemble_seed(std::size_t n, int repeat) {
    const std::uint64_t s = derive_seed(derive_seed(cfg.seed, n), static_cast<std::uint64_t>(repeat));
    std::lock_guard lock(seed_mutex_);
    seeds_[{n, repeat}] = s;
    return s;
}

void RunContext::finish(double wall_seconds) {
    if (!ledger.empty()) {
        write_ledger_csv(file("ledger.csv",
                              "t,x,variant,N,h_v,dt,l2v_error,linf_error,v_lo,v_hi,repeats,l2v_sd: one error "
                              "report per (variant, N, t, x); l2v_sd is the spread across repeats (0 for one run)"),
                         ledger);
    }

    nlohmann::json summary;
    summary["preset"] = cfg.preset;
    summary["passed"] = std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
    summary["assertions"] = nlohmann::json::array();
    for (const auto& a : assertions)
        summary["assertions"].push_back(
            {{"id", a.id}, {"description", a.description}, {"passed", a.passed}, {"detail", a.detail}});
    summary["metrics"] = metrics;
    std::ofstream(file("summary.json", "pass/fail assertions and headline metrics of the run")) << summary.dump(2)
                                                                                               << '\n';

    std::ofstream schema(file("SCHEMA.md", "column documentation of every data file"));
    schema << "# Output files of preset `" << cfg.preset << "`\n\n"
           << "All CSV files have a header row. Numbers use the shortest decimal form that\n"
           << "round-trips to the same double.\n\n";
    for (const auto& [name, text] : files_) schema << "- `" << name << "`: " << text << '\n';

    nlohmann::json manifest;
    manifest["program"] = "sclaw-run";
    manifest["version"] = kVersion;
    manifest["compiler"] = __VERSION__;
    manifest["config"] = config_json(cfg);
    manifest["seeds"] = nlohmann::json::array();
    for (const auto& [key, s] : seeds_) manifest["seeds"].push_back({{"n", key.first}, {"repeat", key.second}, {"seed", s}});
    manifest["wall_time_seconds"] = wall_seconds;
    manifest["files"] = nlohmann::json::array();
    for (const auto& [name, text] : files_) manifest["files"].push_back(name);
    manifest["files"].push_back("manifest.json");
    std::ofstream(cfg.out_dir / "manifest.json") << manifest.dump(2) << '\n';
}

Vector v_grid(const ExperimentConfig& cfg, int points) {
    return uniform_grid(cfg.v_min, cfg.v_max, points > 0 ? points : cfg.v_points);
}

}  // namespace detail
}  // namespace sclaw
