#include "run_context.hpp"
#include "sclaw/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace sclaw::detail {

namespace {

// "pi", "0.5pi", ... for multiples of pi, plain decimals otherwise.
std::string position_label(double x) {
    const double r = x / kPi;
    if (std::abs(r - std::round(r * 1e6) / 1e6) > 1e-12) return format_number(x);
    return r == 1.0 ? std::string("pi") : format_number(std::round(r * 1e6) / 1e6) + "pi";
}

}  // namespace

void run_validate_oracle(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto start = std::chrono::steady_clock::now();
    struct Run {
        CaseId case_id;
        double xi;
    };
    const std::vector<Run> runs = {{CaseId::I, 0.0}, {CaseId::II, 0.3}, {CaseId::II, 0.8}};

    std::vector<std::vector<FdSnapshot>> fd(runs.size());
    parallel_for(runs.size(), cfg.jobs, [&](std::size_t i) {
        fd[i] = fd_oracle(runs[i].case_id, cfg.epsilon, runs[i].xi, std::span<const double>(cfg.t_list));
    });

    CsvFile csv(ctx.file("oracle_u.csv",
                         "case,xi,t,x,u_cole_hopf,u_fd: series solution against the finite-difference oracle on its "
                         "2048-point grid"),
                {"case", "xi", "t", "x", "u_cole_hopf", "u_fd"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const ColeHopfSolution sol = build_solution(runs[i].case_id, cfg.epsilon, runs[i].xi);
        const std::string label = std::string(to_string(runs[i].case_id));
        double worst = 0.0;
        for (const auto& snap : fd[i]) {
            for (Eigen::Index j = 0; j < snap.x.size(); ++j) {
                const double u = u_eval(sol, snap.t, snap.x[j]);
                worst = std::max(worst, std::abs(u - snap.u[j]));
                csv << label << runs[i].xi << snap.t << snap.x[j] << u << snap.u[j];
                csv.end_row();
            }
        }
        ctx.metrics["oracle_max_error"][label + " xi=" + format_number(runs[i].xi)] = worst;
        ctx.check("oracle-equivalence",
                  "case " + label + ", xi=" + format_number(runs[i].xi) + ": max |u - u_fd| < 1e-3 over all t",
                  worst < 1e-3, "max error " + describe(worst));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ctx.check("oracle-equivalence", "oracle comparison runtime < 2 min", seconds < 120.0, describe(seconds) + " s");
}

void run_validate_positivity(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto params = cfg.params();
    const SemiAnalytic model(params, cfg.epsilon);
    const InitialCdf G = initial_cdf_function(params);
    const InitialCdfGradient grad = initial_cdf_gradient_function(params);
    const Vector grid = v_grid(cfg);

    CsvFile csv(ctx.file("positivity.csv",
                         "t,x,v,F_zero,f_zero,f_exact: zero-sample CDF/PDF against the exact PDF"),
                {"t", "x", "v", "F_zero", "f_zero", "f_exact"});
    double min_exact = std::numeric_limits<double>::infinity();
    for (double t : cfg.t_list) {
        std::string status = "monotone";
        for (double x : cfg.x_list) {
            const Vector f_ex = exact_pdf_slice(model, t, x, grid, cfg.jobs);
            double min_f0 = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < grid.size(); ++k) {
                const double f0 = zero_sample_pdf(t, x, grid[k], grad);
                min_f0 = std::min(min_f0, f0);
                csv << t << x << grid[k] << zero_sample_cdf(t, x, grid[k], G) << f0 << f_ex[k];
                csv.end_row();
            }
            min_exact = std::min(min_exact, f_ex.minCoeff());
            const PositivityResult scan =
                positivity_scan([&](double v) { return zero_sample_cdf(t, x, v, G); }, grid);
            auto& m = ctx.metrics["positivity"]["t=" + format_number(t)]["x=" + format_number(x)];
            m = {{"min_f_zero", min_f0}, {"min_slope", scan.min_slope}, {"argmin_v", scan.argmin_v}};
            if (min_f0 < 0.0 && status == "monotone") status = "violation at x=" + position_label(x);
            if (std::abs(x - kPi) < 1e-12 && t == 2.0)
                ctx.check("positivity-anomaly", "t=2, x=pi: zero-sample PDF takes negative values", min_f0 < 0.0,
                          "min f_S0 = " + describe(min_f0));
            if (std::abs(x - kPi) < 1e-12 && t == 0.99)
                ctx.check("positivity-anomaly", "t=0.99, x=pi: zero-sample PDF is non-negative", min_f0 >= 0.0,
                          "min f_S0 = " + describe(min_f0));
        }
        ctx.metrics["status"]["t=" + format_number(t)] = status;
    }
    ctx.check("positivity-anomaly", "exact PDF >= -1e-12 at the same points", min_exact >= -1e-12,
              "min f = " + describe(min_exact));

    // Sign test of g'' dG/dx over the initial data, and the predicted onset time.
    std::vector<std::pair<double, double>> points;
    const Vector cx = uniform_grid(0.0, kTwoPi, 65), cv = uniform_grid(cfg.v_min, cfg.v_max, 61);
    for (Eigen::Index i = 0; i + 1 < cx.size(); ++i)
        for (const double v : cv) points.emplace_back(cx[i], v);
    const CertificateResult burgers = theorem31_certificate(grad, [](double) { return 1.0; }, points);
    const CertificateResult linear = theorem31_certificate(grad, [](double) { return 0.0; }, points);
    ctx.metrics["certificate"] = {{"passed", burgers.passed},    {"t_star", burgers.t_star},
                                  {"x0", burgers.x0},            {"v0", burgers.v0},
                                  {"violations", burgers.violations}, {"linear_passed", linear.passed}};
    ctx.check("positivity-certificate", "Burgers flux fails the certificate with a finite onset time",
              !burgers.passed && std::isfinite(burgers.t_star), "t* = " + describe(burgers.t_star));
    if (!burgers.passed) {
        const double t = 1.1 * burgers.t_star;
        const double x = wrap_periodic(burgers.x0 + burgers.v0 * t);
        const PositivityResult scan = positivity_scan([&](double v) { return zero_sample_cdf(t, x, v, G); }, grid);
        ctx.check("positivity-certificate", "zero-sample CDF decreases in v at t = 1.1 t* above the witness",
                  !scan.monotone(), "min slope " + describe(scan.min_slope) + " at v = " + describe(scan.argmin_v));
    }
    ctx.check("positivity-certificate", "linear flux passes the certificate", linear.passed,
              std::to_string(linear.violations) + " violations");
}

void run_validate_bound(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto params = cfg.params();
    const auto model = std::make_shared<const SemiAnalytic>(params, cfg.epsilon);
    const InitialCdf G = initial_cdf_function(params);
    const InitialCdfGradient grad = initial_cdf_gradient_function(params);
    const double delta = 1e-3;
    const DriftFunction exact{ExactDrift{model}};
    const DriftFunction perturbed{PerturbedDrift{model, delta}};

    // sup |grad G| on a fine grid.
    const Vector gx = uniform_grid(0.0, kTwoPi, 201), gv = uniform_grid(cfg.v_min, cfg.v_max, 601);
    double grad_G = 0.0;
    for (double x : gx)
        for (double v : gv) {
            const CdfGradient g = grad(x, v);
            grad_G = std::max(grad_G, std::hypot(g.dx, g.dv));
        }
    const double g2_bound = 1.0;

    CsvFile csv(ctx.file("bound.csv",
                         "t,delta,sup_diff,sup_diff_exact,g2_bound,grad_m_inf,grad_G_inf,bound: sup over the "
                         "measurement grid of |F_hat(m) - F_hat(m + delta)| (same solver and dt) and of "
                         "|F_exact - F_hat(m + delta)|, against the stability bound"),
                {"t", "delta", "sup_diff", "sup_diff_exact", "g2_bound", "grad_m_inf", "grad_G_inf", "bound"});
    for (double t : cfg.t_list) {
        // sup |grad m| over tau in {0, t/4, t/2, 3t/4, t} by central differences.
        double grad_m = 0.0;
        for (int level = 0; level <= 4; ++level) {
            const double tau = t * level / 4.0;
            Eigen::MatrixXd m(gx.size(), gv.size());
            parallel_for(static_cast<std::size_t>(gx.size()), cfg.jobs, [&](std::size_t i) {
                const auto r = static_cast<Eigen::Index>(i);
                for (Eigen::Index k = 0; k < gv.size(); ++k) m(r, k) = model->exact_m(tau, gx[r], gv[k]);
            });
            const double hx = gx[1] - gx[0], hv = gv[1] - gv[0];
            for (Eigen::Index i = 1; i + 1 < gx.size(); ++i)
                for (Eigen::Index k = 1; k + 1 < gv.size(); ++k) {
                    const double mx = (m(i + 1, k) - m(i - 1, k)) / (2 * hx);
                    const double mv = (m(i, k + 1) - m(i, k - 1)) / (2 * hv);
                    grad_m = std::max(grad_m, std::hypot(mx, mv));
                }
        }

        const Vector mx = uniform_grid(0.0, kTwoPi, 42).head(41), mv = uniform_grid(cfg.v_min, cfg.v_max, 121);
        const double dt = cfg.step(t);
        std::vector<double> diff(static_cast<std::size_t>(mx.size() * mv.size())), diff_exact(diff.size());
        parallel_for(diff.size(), cfg.jobs, [&](std::size_t item) {
            const double x = mx[static_cast<Eigen::Index>(item / mv.size())];
            const double v = mv[static_cast<Eigen::Index>(item % mv.size())];
            const double F_pert = approx_cdf(t, x, v, perturbed, dt, G);
            diff[item] = std::abs(approx_cdf(t, x, v, exact, dt, G) - F_pert);
            diff_exact[item] = std::abs(model->exact_cdf(t, x, v) - F_pert);
        });
        const double sup_diff = *std::max_element(diff.begin(), diff.end());
        const double sup_exact = *std::max_element(diff_exact.begin(), diff_exact.end());
        const double bound = theorem43_bound(t, g2_bound, grad_m, grad_G, delta);
        csv << t << delta << sup_diff << sup_exact << g2_bound << grad_m << grad_G << bound;
        csv.end_row();
        ctx.metrics["bound"]["t=" + format_number(t)] = {
            {"sup_diff", sup_diff}, {"sup_diff_exact", sup_exact}, {"grad_m_inf", grad_m}, {"bound", bound}};
        ctx.check("error-bound", "t=" + format_number(t) + ": sup |F_exact - F_hat(m + delta)| below the stability bound",
                  sup_exact <= bound, "sup " + describe(sup_exact) + " vs bound " + describe(bound));
    }
}

}  // namespace sclaw::detail
