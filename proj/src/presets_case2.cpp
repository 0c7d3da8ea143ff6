#include "run_context.hpp"
#include "sclaw/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sclaw::detail {

namespace {

std::shared_ptr<const SemiAnalytic> reference(const RunContext& ctx) {
    return std::make_shared<const SemiAnalytic>(ctx.cfg.params(), ctx.cfg.epsilon);
}

// Grid points where the zero-sample solution is defined (v < x / t).
Vector admissible(const Vector& grid, double t, double x) {
    std::vector<double> keep;
    for (double v : grid)
        if (t == 0.0 || v < x / t) keep.push_back(v);
    return Eigen::Map<const Vector>(keep.data(), static_cast<Eigen::Index>(keep.size()));
}

}  // namespace

void run_case2_analytic(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const auto params = cfg.params();
    const InitialCdf G = initial_cdf_function(params);
    const InitialCdfGradient grad = initial_cdf_gradient_function(params);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Vector grid = v_grid(cfg);

    CsvFile csv(ctx.file("fig9_cdf_pdf.csv",
                         "t,x,v,F_exact,f_exact,F_zero,f_zero: reference CDF/PDF and the zero-sample solution; "
                         "F_zero and f_zero are nan for v >= x/t where the zero-sample form is undefined"),
                {"t", "x", "v", "F_exact", "f_exact", "F_zero", "f_zero"});
    CsvFile mom(ctx.file("fig10_moments.csv",
                         "t,x,mean_exact,mean_zero,abs_dev: E[u] from the reference and the first moment of the "
                         "zero-sample PDF over (0, x/t)"),
                {"t", "x", "mean_exact", "mean_zero", "abs_dev"});

    for (double t : cfg.t_list) {
        for (double x : cfg.x_list) {
            const Vector F = exact_cdf_slice(*model, t, x, grid, cfg.jobs);
            const Vector f = exact_pdf_slice(*model, t, x, grid, cfg.jobs);
            for (Eigen::Index k = 0; k < grid.size(); ++k) {
                const double v = grid[k];
                const bool ok = t == 0.0 || v < x / t;
                csv << t << x << v << F[k] << f[k] << (ok ? zero_sample_cdf(t, x, v, G) : nan)
                    << (ok ? zero_sample_pdf(t, x, v, grad) : nan);
                csv.end_row();
            }

            const Vector sub = admissible(grid, t, x);
            if (sub.size() >= 2) {
                Vector F_ex(sub.size()), F0(sub.size()), f_ex(sub.size()), f0(sub.size());
                for (Eigen::Index k = 0; k < sub.size(); ++k) {
                    F_ex[k] = model->exact_cdf(t, x, sub[k]);
                    f_ex[k] = model->exact_pdf(t, x, sub[k]);
                    F0[k] = zero_sample_cdf(t, x, sub[k], G);
                    f0[k] = zero_sample_pdf(t, x, sub[k], grad);
                }
                ctx.ledger.push_back(make_report(DistributionSlice{t, x, sub, F0, Provenance::ZeroSample},
                                                 DistributionSlice{t, x, sub, F_ex, Provenance::Exact}, "zero-sample",
                                                 0, 0.0, 0.0));
                ctx.metrics["pdf_l2v"]["t=" + format_number(t)]["x=" + format_number(x)] = l2v_error(f0, f_ex, sub);
            }

            const double upper = t > 0.0 ? x / t : xi_upper_quantile(params, 1e-12);
            const double mean_zero = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                [&](double v) { return v * zero_sample_pdf(t, x, v, grad); }, 0.0, upper, 15, 1e-10);
            const double mean_exact = model->moments(t, x).mean;
            mom << t << x << mean_exact << mean_zero << std::abs(mean_exact - mean_zero);
            mom.end_row();
        }
    }

    // m(0, x, v) = -eps v, and the support of f bounded by 0 < v < x / t.
    SampleStream stream(cfg.seed, 0xc2);
    double dev_m = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = kPi * (0.01 + 0.98 * stream.uniform());
        const double v = 0.01 + 1.19 * stream.uniform();
        dev_m = std::max(dev_m, std::abs(model->exact_m(0.0, x, v) + cfg.epsilon * v));
    }
    ctx.check("case2-statics", "exact m(0, x, v) = -eps v to 1e-8 at 20 random points", dev_m < 1e-8,
              "max deviation " + describe(dev_m));
    double outside = 0.0;
    for (double t : {1.0, 2.0})
        for (double x : cfg.x_list)
            for (double v : {-1.0, -0.1, 0.0, x / t, x / t + 0.1, x / t + 1.0})
                outside = std::max(outside, std::abs(model->exact_pdf(t, x, v)));
    ctx.check("case2-statics", "exact PDF vanishes for v <= 0 and v >= x/t", outside == 0.0,
              "max |f| outside support " + describe(outside));

    if (std::any_of(cfg.x_list.begin(), cfg.x_list.end(), [](double x) { return std::abs(x - 0.95 * kPi) < 1e-12; })) {
        const double x = 0.95 * kPi;
        const Vector sub = admissible(grid, 1.0, x);
        double min_f0 = std::numeric_limits<double>::infinity();
        for (double v : sub) min_f0 = std::min(min_f0, zero_sample_pdf(1.0, x, v, grad));
        ctx.check("case2-zero-sample-positive", "zero-sample PDF >= 0 at t=1, x=0.95 pi on the admissible v-range",
                  min_f0 >= 0.0, "min f_S0 = " + describe(min_f0));
    }
}

void run_case2_convergence(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = reference(ctx);
    const InitialCdf G = initial_cdf_function(cfg.params());
    const Vector grid = v_grid(cfg);

    CsvFile slices(ctx.file("fig11_pdf_cdf.csv",
                            "t,x,v,F_hat,f_hat,variant,N,h_v,dt: CDF and PDF slices; variant is exact (reference), "
                            "zero-sample (N=0) or estimated; f_hat of solver rows is the central v-difference of F_hat"),
                   {"t", "x", "v", "F_hat", "f_hat", "variant", "N", "h_v", "dt"});
    CsvFile errs(ctx.file("fig12_errors.csv", "t,x,N,l2v_cdf,l2v_pdf: L2_v errors of F_hat and f_hat"),
                 {"t", "x", "N", "l2v_cdf", "l2v_pdf"});

    for (double t : cfg.t_list) {
        for (double x : cfg.x_list) {
            const Vector F_ex = exact_cdf_slice(*model, t, x, grid, cfg.jobs);
            const Vector f_ex = exact_pdf_slice(*model, t, x, grid, cfg.jobs);
            for (Eigen::Index k = 0; k < grid.size(); ++k) {
                slices << t << x << grid[k] << F_ex[k] << f_ex[k] << "exact" << std::size_t{0} << 0.0 << 0.0;
                slices.end_row();
            }
            const DistributionSlice ref{t, x, grid, F_ex, Provenance::Exact};
            const double dt = cfg.step(t);
            for (std::size_t n : cfg.n_list) {
                const DriftFunction drift = drift_for(ctx, n, 0);
                const double h = n == 0 ? 0.0 : cfg.bandwidth(n);
                const Vector F = approx_cdf_slice(t, x, grid, drift, dt, G, cfg.jobs);
                const Vector f = differentiate_on_grid(F, grid);
                for (Eigen::Index k = 0; k < grid.size(); ++k) {
                    slices << t << x << grid[k] << F[k] << f[k] << drift.label() << n << h << dt;
                    slices.end_row();
                }
                ctx.ledger.push_back(make_report(
                    DistributionSlice{t, x, grid, F, n == 0 ? Provenance::ZeroSample : Provenance::Estimated}, ref,
                    drift.label(), n, h, dt));
                errs << t << x << n << ctx.ledger.back().l2v_error << l2v_error(f, f_ex, grid);
                errs.end_row();
            }
        }
    }
}

}  // namespace sclaw::detail
