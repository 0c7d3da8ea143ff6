#include "run_context.hpp"
#include "sclaw/parallel.hpp"

#include <sstream>

namespace sclaw::detail {

std::shared_ptr<const EnsembleSolutions> make_ensemble(RunContext& ctx, std::size_t n, int repeat) {
    const std::uint64_t seed = ctx.ensemble_seed(n, repeat);
    return std::make_shared<const EnsembleSolutions>(draw_samples(ctx.cfg.params(), n, seed), ctx.cfg.epsilon);
}

DriftFunction drift_for(RunContext& ctx, std::size_t n, int repeat) {
    if (n == 0) return DriftFunction{ZeroDrift{}};
    auto drift = std::make_shared<const EnsembleDrift>(make_ensemble(ctx, n, repeat), ctx.cfg.bandwidth(n));
    return DriftFunction{EstimatedDrift{drift}};
}

Vector approx_cdf_slice(double t, double x, const Vector& grid, const DriftFunction& drift, double dt,
                        const InitialCdf& G, int jobs) {
    Vector out(grid.size());
    parallel_for(static_cast<std::size_t>(grid.size()), jobs, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k);
        out[i] = approx_cdf(t, x, grid[i], drift, dt, G);
    });
    return out;
}

Vector exact_cdf_slice(const SemiAnalytic& model, double t, double x, const Vector& grid, int jobs) {
    Vector out(grid.size());
    parallel_for(static_cast<std::size_t>(grid.size()), jobs, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k);
        out[i] = model.exact_cdf(t, x, grid[i]);
    });
    return out;
}

Vector exact_pdf_slice(const SemiAnalytic& model, double t, double x, const Vector& grid, int jobs) {
    Vector out(grid.size());
    parallel_for(static_cast<std::size_t>(grid.size()), jobs, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k);
        out[i] = model.exact_pdf(t, x, grid[i]);
    });
    return out;
}

Vector empirical_cdf_slice(const EnsembleSolutions& ens, double t, double x, const Vector& grid) {
    const EmpiricalCdf ecdf(build_slice(ens, t, x).u);
    Vector out(grid.size());
    for (Eigen::Index k = 0; k < grid.size(); ++k) out[k] = ecdf(grid[k]);
    return out;
}

std::string describe(double value) {
    std::ostringstream os;
    os.precision(4);
    os << value;
    return os.str();
}

}  // namespace sclaw::detail
