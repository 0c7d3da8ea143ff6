// Command-line driver for the experiment presets.

#include "sclaw/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

// Accepts plain numbers and multiples of pi such as "pi", "0.95pi" or "0.5*pi".
double parse_value(std::string s) {
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = sclaw::kPi;
        s.erase(s.size() - 2);
        if (!s.empty() && s.back() == '*') s.pop_back();
        if (s.empty()) return factor;
    }
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("cannot parse number '" + s + "'");
    return v * factor;
}

std::vector<double> parse_values(const std::vector<std::string>& tokens) {
    std::vector<double> out;
    for (const auto& t : tokens) out.push_back(parse_value(t));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistical conservation-law experiments for viscous Burgers with random initial data"};
    app.set_config("--config", "", "Key-value config file (TOML/INI); command-line flags take precedence");

    std::string preset, case_name, out_dir;
    std::vector<std::size_t> n_list;
    std::vector<std::string> t_tokens, x_tokens;
    double hv = 0.0, hv_rule_c = 0.0, dt = 0.0, epsilon = 0.0, sigma = 0.0, shape = 0.0, scale = 0.0;
    double v_min = 0.0, v_max = 0.0;
    int v_points = 0, repeats = 0, jobs = 1;
    std::uint64_t seed = 0;
    bool list = false;

    app.add_flag("--list", list, "List presets and exit");
    app.add_option("--preset", preset, "Experiment preset");
    app.add_option("--case", case_name, "Initial-data family (I or II)")->check(CLI::IsMember({"I", "II", "1", "2"}));
    app.add_option("--n", n_list, "Ensemble sizes, comma separated (0 = zero-sample)")->delimiter(',');
    auto* hv_opt = app.add_option("--hv", hv, "Fixed v-bandwidth");
    auto* rule_opt = app.add_option("--hv-rule-c", hv_rule_c, "Bandwidth rule h_v = C N^(-1/5)");
    hv_opt->excludes(rule_opt);
    rule_opt->excludes(hv_opt);
    app.add_option("--dt", dt, "Characteristic time step (default 1e-3 for t <= 2, 1e-2 beyond)");
    app.add_option("--t", t_tokens, "Times, comma separated")->delimiter(',');
    app.add_option("--x", x_tokens, "Positions, comma separated; accepts multiples of pi (0.95pi)")->delimiter(',');
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--out", out_dir, "Output directory")->envname("SCLAW_OUT_DIR");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--epsilon", epsilon, "Viscosity");
    app.add_option("--sigma", sigma, "Case I standard deviation");
    app.add_option("--shape", shape, "Case II Gamma shape");
    app.add_option("--scale", scale, "Case II Gamma scale");
    app.add_option("--v-min", v_min, "Lower end of the v-grid");
    app.add_option("--v-max", v_max, "Upper end of the v-grid");
    app.add_option("--v-points", v_points, "Points of the v-grid");
    app.add_option("--repeats", repeats, "Independent ensembles for repeat-averaged errors");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& name : sclaw::preset_names()) std::cout << name << '\n';
        return 0;
    }
    if (preset.empty()) {
        std::cerr << "--preset is required (see --list)\n";
        return 2;
    }

    try {
        sclaw::ExperimentConfig cfg = sclaw::preset_defaults(preset);
        if (app.count("--case")) cfg.case_id = (case_name == "I" || case_name == "1") ? sclaw::CaseId::I : sclaw::CaseId::II;
        if (app.count("--n")) cfg.n_list = n_list;
        if (app.count("--hv")) cfg.h_v = hv;
        if (app.count("--hv-rule-c")) cfg.hv_rule_c = hv_rule_c;
        if (app.count("--dt")) cfg.dt = dt;
        if (app.count("--t")) cfg.t_list = parse_values(t_tokens);
        if (app.count("--x")) cfg.x_list = parse_values(x_tokens);
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--out")) cfg.out_dir = out_dir;
        if (app.count("--epsilon")) cfg.epsilon = epsilon;
        if (app.count("--sigma")) cfg.sigma = sigma;
        if (app.count("--shape")) cfg.shape = shape;
        if (app.count("--scale")) cfg.scale = scale;
        if (app.count("--v-min")) cfg.v_min = v_min;
        if (app.count("--v-max")) cfg.v_max = v_max;
        if (app.count("--v-points")) cfg.v_points = v_points;
        if (app.count("--repeats")) cfg.repeats = repeats;
        cfg.jobs = jobs;

        const sclaw::RunSummary summary = sclaw::run_preset(cfg);
        for (const auto& a : summary.assertions)
            std::cout << (a.passed ? "PASS " : "FAIL ") << a.id << ": " << a.description << " (" << a.detail << ")\n";
        std::cout << "wrote " << summary.out_dir.string() << " in " << summary.wall_seconds << " s\n";
        return summary.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
