#include "run_context.hpp"
#include "sclaw/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace sclaw::detail {

namespace {

const std::vector<std::string> kTransportHeader = {"t", "x", "v", "F_hat", "f_hat", "variant", "N", "h_v", "dt"};
const char* kTransportSchema =
    "t,x,v,F_hat,f_hat,variant,N,h_v,dt: CDF and PDF slices; variant is exact (reference), zero-sample (N=0), "
    "estimated or exact-drift; f_hat of solver rows is the central v-difference of F_hat";

std::shared_ptr<const SemiAnalytic> reference(const RunContext& ctx) {
    return std::make_shared<const SemiAnalytic>(ctx.cfg.params(), ctx.cfg.epsilon);
}

bool contains(const std::vector<double>& values, double x) {
    return std::any_of(values.begin(), values.end(), [&](double v) { return std::abs(v - x) < 1e-12; });
}

bool contains(const std::vector<std::size_t>& values, std::size_t n) {
    return std::find(values.begin(), values.end(), n) != values.end();
}

double adaptive_integral(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-10);
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& values) {
    const Eigen::Map<const Vector> v(values.data(), static_cast<Eigen::Index>(values.size()));
    MeanSd out{v.mean(), 0.0};
    if (values.size() > 1) out.sd = std::sqrt((v.array() - out.mean).square().sum() / (values.size() - 1));
    return out;
}

void write_transport_rows(CsvFile& csv, double t, double x, const Vector& grid, const Vector& F, const Vector& f,
                          const std::string& variant, std::size_t n, double h_v, double dt) {
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        csv << t << x << grid[k] << F[k] << f[k] << variant << n << h_v << dt;
        csv.end_row();
    }
}

}  // namespace

void run_case1_pdf_evolution(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const Vector grid = v_grid(cfg);
    CsvFile csv(ctx.file("fig1_pdf_evolution.csv",
                         "t,x,v,F_exact,f_exact,m_exact: reference CDF, PDF and drift m = eps E[u_xx | u = v]"),
                {"t", "x", "v", "F_exact", "f_exact", "m_exact"});
    double min_pdf = std::numeric_limits<double>::infinity();
    for (double t : cfg.t_list) {
        for (double x : cfg.x_list) {
            const Vector F = exact_cdf_slice(*model, t, x, grid, cfg.jobs);
            const Vector f = exact_pdf_slice(*model, t, x, grid, cfg.jobs);
            Vector m(grid.size());
            parallel_for(static_cast<std::size_t>(grid.size()), cfg.jobs, [&](std::size_t k) {
                m[static_cast<Eigen::Index>(k)] = model->exact_m(t, x, grid[static_cast<Eigen::Index>(k)]);
            });
            min_pdf = std::min(min_pdf, f.minCoeff());
            for (Eigen::Index k = 0; k < grid.size(); ++k) {
                csv << t << x << grid[k] << F[k] << f[k] << m[k];
                csv.end_row();
            }
        }
    }
    ctx.metrics["min_pdf"] = min_pdf;
    ctx.check("pdf-nonnegative", "exact PDF >= -1e-12 on every evaluated slice", min_pdf >= -1e-12,
              "min f = " + describe(min_pdf));

    if (contains(cfg.t_list, 2.0) && contains(cfg.x_list, kPi)) {
        const double mass = adaptive_integral([&](double v) { return model->exact_pdf(2.0, kPi, v); }, -3.0, 3.0);
        ctx.metrics["mass_t2"] = mass;
        ctx.check("pdf-normalization", "integral of f(2, pi, v) over [-3, 3] is 1 +- 1e-3", std::abs(mass - 1.0) < 1e-3,
                  "mass = " + describe(mass));
    }
    if (contains(cfg.t_list, 100.0) && contains(cfg.x_list, kPi)) {
        const double sigma = cfg.sigma;
        const double l1 = adaptive_integral(
            [&](double v) { return std::abs(model->exact_pdf(100.0, kPi, v) - normal_pdf(v / sigma) / sigma); }, -3.0,
            3.0);
        ctx.metrics["long_time_l1"] = l1;
        ctx.check("long-time-limit", "L1 distance on [-3,3] between f(100, pi, .) and the xi density < 0.02",
                  l1 < 0.02, "L1 = " + describe(l1));
    }
}

void run_case1_moments(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    Vector xs;
    if (cfg.x_list.empty()) {
        xs = uniform_grid(0.0, kTwoPi, 129);
    } else {
        xs = Eigen::Map<const Vector>(cfg.x_list.data(), static_cast<Eigen::Index>(cfg.x_list.size()));
    }
    CsvFile csv(ctx.file("fig2_moments.csv", "t,x,mean,sd: E[u] and SD[u] by Gauss-Legendre quadrature in xi"),
                {"t", "x", "mean", "sd"});
    for (double t : cfg.t_list) {
        std::vector<Moments> mom(static_cast<std::size_t>(xs.size()));
        parallel_for(mom.size(), cfg.jobs,
                     [&](std::size_t j) { mom[j] = model->moments(t, xs[static_cast<Eigen::Index>(j)]); });
        double dev = 0.0;
        for (Eigen::Index j = 0; j < xs.size(); ++j) {
            const auto& m = mom[static_cast<std::size_t>(j)];
            csv << t << xs[j] << m.mean << m.sd;
            csv.end_row();
            dev = std::max(dev, t == 0.0 ? std::abs(m.mean - std::sin(xs[j])) : std::abs(m.mean));
        }
        if (t == 0.0)
            ctx.check("moments-initial", "E[u](0, x) = sin x", dev < 1e-10, "max deviation " + describe(dev));
        if (t == 100.0)
            ctx.check("long-time-mean", "|E[u](100, x)| < 0.01 for all x", dev < 0.01, "max |E[u]| = " + describe(dev));
    }
}

void run_case1_convergence(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const InitialCdf G = initial_cdf_function(cfg.params());
    const std::vector<std::size_t> mc_sizes = {100, 1000, 10000, 100000};

    CsvFile slices(ctx.file("fig3_pdf_cdf.csv", kTransportSchema), kTransportHeader);
    CsvFile mc_csv(ctx.file("fig5_mc_errors.csv",
                            "t,x,N,repeats,l2v_mean,l2v_sd: L2_v error of the empirical CDF of the samples u_i, "
                            "mean and standard deviation over repeats"),
                   {"t", "x", "N", "repeats", "l2v_mean", "l2v_sd"});

    std::map<std::pair<double, std::size_t>, double> solver_err;
    std::map<std::pair<double, std::size_t>, double> mc_mean;
    double large_n_seconds = 0.0;

    for (double t : cfg.t_list) {
        const double x = cfg.x_list.front();
        const Vector grid = v_grid(cfg, t >= 20.0 ? std::min(cfg.v_points, 201) : cfg.v_points);
        const Vector F_ex = exact_cdf_slice(*model, t, x, grid, cfg.jobs);
        const Vector f_ex = exact_pdf_slice(*model, t, x, grid, cfg.jobs);
        write_transport_rows(slices, t, x, grid, F_ex, f_ex, "exact", 0, 0.0, 0.0);
        const DistributionSlice ref{t, x, grid, F_ex, Provenance::Exact};
        const double dt = cfg.step(t);

        for (std::size_t n : cfg.n_list) {
            const auto start = std::chrono::steady_clock::now();
            const DriftFunction drift = drift_for(ctx, n, 0);
            const Vector F = approx_cdf_slice(t, x, grid, drift, dt, G, cfg.jobs);
            if (n >= 10000)
                large_n_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const double h = n == 0 ? 0.0 : cfg.bandwidth(n);
            write_transport_rows(slices, t, x, grid, F, differentiate_on_grid(F, grid), drift.label(), n, h, dt);
            const DistributionSlice approx{t, x, grid, F, n == 0 ? Provenance::ZeroSample : Provenance::Estimated};
            ctx.ledger.push_back(make_report(approx, ref, drift.label(), n, h, dt));
            solver_err[{t, n}] = ctx.ledger.back().l2v_error;
        }

        for (std::size_t n : mc_sizes) {
            std::vector<double> errs(static_cast<std::size_t>(cfg.repeats));
            for (int r = 0; r < cfg.repeats; ++r) ctx.ensemble_seed(n, r);
            parallel_for(errs.size(), cfg.jobs, [&](std::size_t r) {
                const auto ens = make_ensemble(ctx, n, static_cast<int>(r));
                errs[r] = l2v_error(empirical_cdf_slice(*ens, t, x, grid), F_ex, grid);
            });
            const MeanSd s = mean_sd(errs);
            mc_csv << t << x << n << cfg.repeats << s.mean << s.sd;
            mc_csv.end_row();
            mc_mean[{t, n}] = s.mean;
        }
    }

    // Solver against empirical CDF on the same ensembles, repeat-averaged.
    if (contains(cfg.t_list, 1.0)) {
        CsvFile eff(ctx.file("fig5_efficiency.csv",
                             "t,x,N,repeats,solver_mean,solver_sd,empirical_mean,empirical_sd: L2_v errors of the "
                             "transport solution and of the empirical CDF from the same ensembles"),
                    {"t", "x", "N", "repeats", "solver_mean", "solver_sd", "empirical_mean", "empirical_sd"});
        const double t = 1.0, x = cfg.x_list.front();
        const Vector grid = v_grid(cfg);
        const Vector F_ex = exact_cdf_slice(*model, t, x, grid, cfg.jobs);
        for (std::size_t n : {std::size_t{100}, std::size_t{1000}}) {
            if (!contains(cfg.n_list, n)) continue;
            std::vector<double> solver(static_cast<std::size_t>(cfg.repeats)), emp(solver.size());
            for (int r = 0; r < cfg.repeats; ++r) ctx.ensemble_seed(n, r);
            parallel_for(solver.size(), cfg.jobs, [&](std::size_t r) {
                const auto ens = make_ensemble(ctx, n, static_cast<int>(r));
                const DriftFunction drift{EstimatedDrift{std::make_shared<const EnsembleDrift>(ens, cfg.bandwidth(n))}};
                solver[r] = l2v_error(approx_cdf_slice(t, x, grid, drift, cfg.step(t), G, 1), F_ex, grid);
                emp[r] = l2v_error(empirical_cdf_slice(*ens, t, x, grid), F_ex, grid);
            });
            const MeanSd a = mean_sd(solver), b = mean_sd(emp);
            eff << t << x << n << cfg.repeats << a.mean << a.sd << b.mean << b.sd;
            eff.end_row();
            ctx.metrics["efficiency"][std::to_string(n)] = {{"solver", a.mean}, {"empirical", b.mean}};
            ctx.check("sample-efficiency",
                      "N=" + std::to_string(n) + ": mean L2_v error of the transport solution below the empirical CDF",
                      a.mean < b.mean, "solver " + describe(a.mean) + " vs empirical " + describe(b.mean));
        }
    }

    for (const auto& [key, err] : solver_err)
        ctx.metrics["solver_l2v"]["t=" + format_number(key.first)]["N=" + std::to_string(key.second)] = err;
    ctx.metrics["large_n_seconds"] = large_n_seconds;

    if (solver_err.count({1.0, 10000})) {
        const double e = solver_err.at({1.0, 10000});
        ctx.check("cdf-convergence", "t=1, N=1e4: L2_v error in (5e-5, 1e-3)", e > 5e-5 && e < 1e-3,
                  "error " + describe(e));
    }
    if (solver_err.count({20.0, 10000})) {
        const double e = solver_err.at({20.0, 10000});
        ctx.check("cdf-convergence", "t=20, N=1e4: L2_v error < 1e-2", e < 1e-2, "error " + describe(e));
    }
    for (double t : cfg.t_list) {
        const std::size_t ns[] = {100, 1000, 10000};
        if (!std::all_of(std::begin(ns), std::end(ns), [&](std::size_t n) { return solver_err.count({t, n}); }))
            continue;
        int inversions = 0;
        for (int i = 0; i + 1 < 3; ++i)
            if (solver_err.at({t, ns[i + 1]}) >= solver_err.at({t, ns[i]})) ++inversions;
        ctx.check("cdf-convergence", "t=" + format_number(t) + ": error decreases over N = 1e2, 1e3, 1e4 (<= 1 inversion)",
                  inversions <= 1, std::to_string(inversions) + " inversions");
    }
    if (contains(cfg.n_list, 10000))
        ctx.check("cdf-convergence", "N=1e4 solver runtime < 15 min", large_n_seconds < 900.0,
                  describe(large_n_seconds) + " s");

    if (contains(cfg.t_list, 1.0)) {
        std::vector<double> ns, es;
        for (std::size_t n : mc_sizes) {
            ns.push_back(static_cast<double>(n));
            es.push_back(mc_mean.at({1.0, n}));
        }
        const RateFit fit = rate_fit(ns, es);
        ctx.metrics["mc_rate"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
        ctx.check("monte-carlo-rate", "empirical CDF error slope in [-0.6, -0.4] over N = 1e2..1e5",
                  fit.slope >= -0.6 && fit.slope <= -0.4, "slope " + describe(fit.slope));
    }
}

void run_case1_m_estimation(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const Vector grid = v_grid(cfg);

    CsvFile est_csv(ctx.file("fig6_m_estimates.csv",
                             "t,x,v,N,h_v,m_hat,n_in_window,m_exact: estimator sweeps against the exact drift"),
                    {"t", "x", "v", "N", "h_v", "m_hat", "n_in_window", "m_exact"});
    for (double t : cfg.t_list) {
        for (double x : cfg.x_list) {
            Vector m_ex(grid.size());
            parallel_for(static_cast<std::size_t>(grid.size()), cfg.jobs, [&](std::size_t k) {
                m_ex[static_cast<Eigen::Index>(k)] = model->exact_m(t, x, grid[static_cast<Eigen::Index>(k)]);
            });
            for (std::size_t n : cfg.n_list) {
                const double h = cfg.bandwidth(n);
                const ConditionalEstimator est(build_slice(*make_ensemble(ctx, n, 0), t, x), h);
                for (Eigen::Index k = 0; k < grid.size(); ++k) {
                    const Estimate e = est.estimate(grid[k]);
                    est_csv << t << x << grid[k] << n << h << e.m_hat << e.n_in_window << m_ex[k];
                    est_csv.end_row();
                }
            }
        }
    }

    CsvFile rel_csv(ctx.file("fig6_relative_errors.csv",
                             "t,x,v,N,h_v,repeats,rel_error_mean,rel_error_sd,m_exact: |m_hat - m| / |m| at probe "
                             "points, over repeats"),
                    {"t", "x", "v", "N", "h_v", "repeats", "rel_error_mean", "rel_error_sd", "m_exact"});
    const std::vector<double> probes = {0.0, 0.25, 0.5};
    const std::vector<std::size_t> rel_sizes = {10, 100, 1000, 10000, 100000};
    for (double t : cfg.t_list) {
        const double x = cfg.x_list.front();
        std::vector<double> m_probe;
        for (double v : probes) m_probe.push_back(model->exact_m(t, x, v));
        for (std::size_t n : rel_sizes) {
            const double h = cfg.bandwidth(n);
            std::vector<std::vector<double>> rel(probes.size(), std::vector<double>(static_cast<std::size_t>(cfg.repeats)));
            for (int r = 0; r < cfg.repeats; ++r) ctx.ensemble_seed(n, r);
            parallel_for(static_cast<std::size_t>(cfg.repeats), cfg.jobs, [&](std::size_t r) {
                const ConditionalEstimator est(build_slice(*make_ensemble(ctx, n, static_cast<int>(r)), t, x), h);
                for (std::size_t p = 0; p < probes.size(); ++p)
                    rel[p][r] = std::abs(est(probes[p]) - m_probe[p]) / std::abs(m_probe[p]);
            });
            for (std::size_t p = 0; p < probes.size(); ++p) {
                const MeanSd s = mean_sd(rel[p]);
                rel_csv << t << x << probes[p] << n << h << cfg.repeats << s.mean << s.sd << m_probe[p];
                rel_csv.end_row();
            }
        }
    }

    // MISE with the bandwidth rule at t = 1, x = pi.
    const double c_rule = cfg.hv_rule_c.value_or(2.0);
    const double t_mise = 1.0, x_mise = kPi, v_lo = -1.5, v_hi = 1.5;
    CsvFile mise_csv(ctx.file("mise_rate.csv",
                              "N,h_v,C,repeats,mise_mean,mise_sd: MISE of m_hat on [-1.5, 1.5] at t=1, x=pi with "
                              "h_v = C N^(-1/5)"),
                     {"N", "h_v", "C", "repeats", "mise_mean", "mise_sd"});
    std::vector<double> ns, mises;
    for (std::size_t n : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
        const double h = bandwidth_rule(n, c_rule);
        const auto params = cfg.params();
        const MiseResult res = mise(
            [&](std::uint64_t seed) {
                const EnsembleSolutions ens(draw_samples(params, n, seed), cfg.epsilon);
                return ConditionalEstimator(build_slice(ens, t_mise, x_mise), h);
            },
            [&](double v) { return model->exact_m(t_mise, x_mise, v); }, v_lo, v_hi, cfg.repeats,
            ctx.ensemble_seed(n, 0), 512, cfg.jobs);
        mise_csv << n << h << c_rule << cfg.repeats << res.mean << res.sd;
        mise_csv.end_row();
        ns.push_back(static_cast<double>(n));
        mises.push_back(res.mean);
    }
    const RateFit fit = rate_fit(ns, mises);
    ctx.metrics["mise_rate"] = {{"C", c_rule}, {"slope", fit.slope}, {"r2", fit.r2}};
    ctx.check("mise-rate", "MISE slope in [-1.0, -0.6] over N = 1e3, 1e4, 1e5 with h_v = C N^(-1/5)",
              fit.slope >= -1.0 && fit.slope <= -0.6, "slope " + describe(fit.slope) + " (C = " + describe(c_rule) + ")");

    // Periodicity in v and the shift to x = 0.
    CsvFile id_csv(ctx.file("structure_identities.csv",
                            "t,x,v,m,m_v_plus_period,m_origin: m(t,x,v), m(t,x,v+2pi/t) and m(t,0,v-x/t)"),
                   {"t", "x", "v", "m", "m_v_plus_period", "m_origin"});
    SampleStream stream(cfg.seed, 0x5f1d);
    double dev_period = 0.0, dev_shift = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = stream.uniform() < 0.5 ? 1.0 : 2.0;
        const double x = kTwoPi * stream.uniform();
        const double v = -3.0 + 6.0 * stream.uniform();
        const double m = model->exact_m(t, x, v);
        const double mp = model->exact_m(t, x, v + kTwoPi / t);
        const double m0 = model->exact_m(t, 0.0, v - x / t);
        dev_period = std::max(dev_period, std::abs(mp - m));
        dev_shift = std::max(dev_shift, std::abs(m0 - m));
        id_csv << t << x << v << m << mp << m0;
        id_csv.end_row();
    }
    ctx.check("structure-identities", "|m(t,x,v+2pi/t) - m(t,x,v)| < 1e-6 at 50 random points", dev_period < 1e-6,
              "max " + describe(dev_period));
    ctx.check("structure-identities", "|m(t,x,v) - m(t,0,v-x/t)| < 1e-6 at 50 random points", dev_shift < 1e-6,
              "max " + describe(dev_shift));
}

void run_case1_characteristics(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const auto params = cfg.params();
    const InitialCdf G = initial_cdf_function(params);

    {
        CsvFile land(ctx.file("fig7_G_landscape.csv", "x,v,G: initial joint CDF G(x, v)"), {"x", "v", "G"});
        const Vector xs = uniform_grid(0.0, kTwoPi, 129), vs = uniform_grid(-3.0, 3.0, 121);
        for (Eigen::Index i = 0; i < xs.size(); ++i)
            for (Eigen::Index k = 0; k < vs.size(); ++k) {
                land << xs[i] << vs[k] << G(xs[i], vs[k]);
                land.end_row();
            }
    }

    CsvFile csv(ctx.file("fig7_characteristics.csv",
                         "t,x,v,variant,N,X0,V0,G0: start points (X, V) at tau = 0 of characteristics ending at "
                         "(x, v) at tau = t; variant particle integrates the realization path dX/dtau = u with RK4"),
                {"t", "x", "v", "variant", "N", "X0", "V0", "G0"});
    for (double t : cfg.t_list) {
        const double x = cfg.x_list.front();
        const Vector grid = v_grid(cfg);
        const auto nv = static_cast<std::size_t>(grid.size());
        const double dt = cfg.step(t);

        // Particle paths of the realization selected by the inverse map.
        std::vector<CharacteristicState> particle(nv);
        parallel_for(nv, cfg.jobs, [&](std::size_t k) {
            const double v = grid[static_cast<Eigen::Index>(k)];
            const double xi = model->inverse_map(t, x, v).xi;
            const long steps = std::max(1000L, static_cast<long>(std::ceil(t / 1e-3)));
            const double h = t / static_cast<double>(steps);
            double X = x;
            for (long s = 0; s < steps; ++s) {
                const double tau = t - static_cast<double>(s) * h;
                const double k1 = model->u(tau, X, xi);
                const double k2 = model->u(tau - 0.5 * h, X - 0.5 * h * k1, xi);
                const double k3 = model->u(tau - 0.5 * h, X - 0.5 * h * k2, xi);
                const double k4 = model->u(std::max(0.0, tau - h), X - h * k3, xi);
                X -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            X = wrap_periodic(X);
            particle[k] = {X, std::sin(X) + xi, 0.0};
        });
        for (std::size_t k = 0; k < nv; ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            csv << t << x << grid[i] << "particle" << std::size_t{0} << particle[k].X << particle[k].V
                << G(particle[k].X, particle[k].V);
            csv.end_row();
        }

        auto traced = [&](const DriftFunction& drift, std::size_t n) {
            std::vector<CharacteristicState> ends(nv);
            parallel_for(nv, cfg.jobs, [&](std::size_t k) {
                ends[k] = trace_back(t, x, grid[static_cast<Eigen::Index>(k)], drift, dt);
            });
            std::vector<double> g0(nv);
            for (std::size_t k = 0; k < nv; ++k) {
                g0[k] = G(ends[k].X, ends[k].V);
                csv << t << x << grid[static_cast<Eigen::Index>(k)] << drift.label() << n << ends[k].X << ends[k].V
                    << g0[k];
                csv.end_row();
            }
            return std::make_pair(ends, g0);
        };
        const auto [ends_exact, g_exact] = traced(DriftFunction{ExactDrift{model}}, 0);
        double gap = 0.0;
        for (std::size_t k = 0; k < nv; ++k) {
            const double dx = std::abs(ends_exact[k].X - particle[k].X);
            gap = std::max({gap, std::min(dx, kTwoPi - dx), std::abs(ends_exact[k].V - particle[k].V)});
        }
        ctx.metrics["path_gap"]["t=" + format_number(t)] = gap;
        ctx.check("path-agreement",
                  "t=" + format_number(t) + ": exact-drift characteristics end within 1e-2 of the particle paths",
                  gap < 1e-2, "max gap " + describe(gap));
        double worst_drop = 0.0;
        for (std::size_t k = 0; k + 1 < nv; ++k) worst_drop = std::min(worst_drop, g_exact[k + 1] - g_exact[k]);
        ctx.check("characteristic-monotone",
                  "t=" + format_number(t) + ": G is non-decreasing along the exact-drift start points",
                  worst_drop >= 0.0, "largest decrease " + describe(0.0 - worst_drop));
        for (std::size_t n : cfg.n_list) traced(drift_for(ctx, n, 0), n);
    }
}

void run_case1_bandwidth(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const InitialCdf G = initial_cdf_function(cfg.params());
    const std::vector<double> h_grid = {0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    // Cost of one drift query grows like N h; the largest ensembles get the narrow part of the sweep.
    auto h_cap = [](std::size_t n) { return n <= 100 ? 1.0 : n <= 1000 ? 0.2 : 0.05; };

    CsvFile csv(ctx.file("fig8_bandwidth.csv",
                         "t,x,variant,N,h_v,repeats,l2v_mean,l2v_sd: L2_v error of the transport solution against "
                         "h_v; variant exact-drift is the time-discretization floor"),
                {"t", "x", "variant", "N", "h_v", "repeats", "l2v_mean", "l2v_sd"});

    for (double t : cfg.t_list) {
        const double x = cfg.x_list.front();
        const double dt = cfg.step(t);
        const Vector grid = v_grid(cfg);
        const Vector F_ex = exact_cdf_slice(*model, t, x, grid, cfg.jobs);

        const Vector F_drift = approx_cdf_slice(t, x, grid, DriftFunction{ExactDrift{model}}, dt, G, cfg.jobs);
        const double floor_err = l2v_error(F_drift, F_ex, grid);
        csv << t << x << "exact-drift" << std::size_t{0} << 0.0 << 1 << floor_err << 0.0;
        csv.end_row();
        ctx.metrics["exact_drift_l2v"]["t=" + format_number(t)] = floor_err;

        for (std::size_t n : cfg.n_list) {
            const int reps = n <= 1000 ? cfg.repeats : 1;
            std::vector<double> hs;
            for (double h : h_grid)
                if (h <= h_cap(n) + 1e-12) hs.push_back(h);
            for (int r = 0; r < reps; ++r) ctx.ensemble_seed(n, r);
            std::vector<std::shared_ptr<const EnsembleSolutions>> ens(static_cast<std::size_t>(reps));
            for (int r = 0; r < reps; ++r) ens[static_cast<std::size_t>(r)] = make_ensemble(ctx, n, r);

            std::vector<double> errs(hs.size() * static_cast<std::size_t>(reps));
            parallel_for(errs.size(), cfg.jobs, [&](std::size_t item) {
                const std::size_t hi = item / static_cast<std::size_t>(reps), r = item % static_cast<std::size_t>(reps);
                const DriftFunction drift{EstimatedDrift{std::make_shared<const EnsembleDrift>(ens[r], hs[hi])}};
                errs[item] = l2v_error(approx_cdf_slice(t, x, grid, drift, dt, G, 1), F_ex, grid);
            });
            std::vector<double> means;
            for (std::size_t hi = 0; hi < hs.size(); ++hi) {
                const std::vector<double> slice(errs.begin() + static_cast<long>(hi * reps),
                                                errs.begin() + static_cast<long>((hi + 1) * reps));
                const MeanSd s = mean_sd(slice);
                means.push_back(s.mean);
                csv << t << x << "estimated" << n << hs[hi] << reps << s.mean << s.sd;
                csv.end_row();
            }

            if (n == 10000) {
                double lo = std::numeric_limits<double>::infinity(), hi_err = 0.0;
                for (std::size_t i = 0; i < hs.size(); ++i)
                    if (hs[i] >= 0.005 - 1e-12 && hs[i] <= 0.05 + 1e-12) {
                        lo = std::min(lo, means[i]);
                        hi_err = std::max(hi_err, means[i]);
                    }
                ctx.metrics["bandwidth_ratio_n1e4"] = hi_err / lo;
                ctx.check("bandwidth-study", "N=1e4: error varies by < 2x over h_v in [0.005, 0.05]", hi_err < 2.0 * lo,
                          "max/min = " + describe(hi_err / lo));
            }
            if (n == 100) {
                const auto best = std::min_element(means.begin(), means.end());
                const bool interior = means.front() > *best && means.back() > *best;
                ctx.metrics["bandwidth_best_h_n100"] = hs[static_cast<std::size_t>(best - means.begin())];
                ctx.check("bandwidth-study", "N=1e2: the error minimum over h_v is interior", interior,
                          "best h_v = " + describe(hs[static_cast<std::size_t>(best - means.begin())]) + ", error " +
                              describe(*best) + "; endpoints " + describe(means.front()) + ", " +
                              describe(means.back()));
            }
        }
    }
}

}  // namespace sclaw::detail
