#include "sclaw/semi_analytic.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace sclaw {

namespace {

constexpr std::size_t kCacheLimit = 1u << 18;
constexpr int kPanels = 100;

// 4-point Gauss-Legendre rule on [-1, 1]
constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                               0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                 0.3478548451374538};

bool interval_collapsed(double lo, double hi) {
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    return hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

}  // namespace

SemiAnalytic::SemiAnalytic(ModelParams params, double epsilon, SemiAnalyticOptions opts)
    : params_(params), epsilon_(epsilon), opts_(opts) {
    params_.validate();
    if (!(epsilon_ > 0.0)) throw std::invalid_argument("SemiAnalytic: epsilon must be positive");
    if (params_.case_id == CaseId::I) {
        base_ = std::make_shared<const ColeHopfSolution>(build_solution(CaseId::I, epsilon_, 0.0, opts_.build));
    } else {
        xi_cap_ = xi_upper_quantile(params_, opts_.case_ii_tail);
    }
}

std::shared_ptr<const ColeHopfSolution> SemiAnalytic::solution(double xi) const {
    if (params_.case_id == CaseId::I) return base_;
    const auto key = static_cast<std::int64_t>(std::llround(xi * 1e12));
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    // Built from the rounded value so the cached solution depends on the key only.
    auto sol = std::make_shared<const ColeHopfSolution>(
        build_solution(CaseId::II, epsilon_, static_cast<double>(key) * 1e-12, opts_.build));
    std::lock_guard lock(mutex_);
    if (cache_.size() >= kCacheLimit) cache_.clear();
    return cache_.try_emplace(key, std::move(sol)).first->second;
}

Fields SemiAnalytic::fields(double t, double x, double xi) const {
    if (t < 0.0) throw std::invalid_argument("SemiAnalytic: t must be non-negative");
    if (params_.case_id == CaseId::I) return shifted_eval(*base_, t, x, xi);
    if (t == 0.0) return initial_fields(CaseId::II, xi, x);
    return fields_eval(*solution(xi), t, x);
}

double SemiAnalytic::dxi_u(double t, double x, double xi) const {
    if (params_.case_id == CaseId::I) return t == 0.0 ? 1.0 : 1.0 - t * fields(t, x, xi).ux;
    if (t == 0.0) return std::sin(x);
    const double h = std::max(1e-5, 1e-5 * xi);
    if (xi - h >= 0.0) return (u(t, x, xi + h) - u(t, x, xi - h)) / (2.0 * h);
    return (-3.0 * u(t, x, xi) + 4.0 * u(t, x, xi + h) - u(t, x, xi + 2.0 * h)) / (2.0 * h);
}

void SemiAnalytic::check_domain(double x) const {
    if (params_.case_id == CaseId::II && !(x >= 0.0 && x <= kPi + 1e-12))
        throw std::invalid_argument("SemiAnalytic: Case II statistics are defined for x in [0, pi]");
}

bool SemiAnalytic::degenerate(double x) const {
    return params_.case_id == CaseId::II && std::abs(std::sin(x)) < 1e-14;
}

InverseResult SemiAnalytic::inverse_map(double t, double x, double v) const {
    if (t < 0.0) throw std::invalid_argument("inverse_map: t must be non-negative");
    check_domain(x);

    if (params_.case_id == CaseId::I) {
        if (t == 0.0) return {MapStatus::Found, v - std::sin(x)};

        double lo = v - 1.5, hi = v + 1.5;
        double step = 1.5;
        for (int d = 0; u(t, x, lo) > v; ++d) {
            if (d >= opts_.max_doublings) throw ContractViolation("inverse_map: lower bracket expansion failed");
            lo -= step;
            step *= 2.0;
        }
        step = 1.5;
        for (int d = 0; u(t, x, hi) < v; ++d) {
            if (d >= opts_.max_doublings) throw ContractViolation("inverse_map: upper bracket expansion failed");
            hi += step;
            step *= 2.0;
        }

        // Bisection safeguarding Newton steps; d_xi u = 1 - t u_x is available in closed form.
        double xi = 0.5 * (lo + hi);
        for (int it = 0; it < opts_.max_iterations; ++it) {
            const Fields f = fields(t, x, xi);
            const double r = f.u - v;
            if (std::abs(r) < opts_.tol_v) break;
            if (r < 0.0) lo = xi; else hi = xi;
            if (interval_collapsed(lo, hi)) break;
            const double slope = 1.0 - t * f.ux;
            double next = slope > 0.0 ? xi - r / slope : lo;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            xi = next;
        }
        return {MapStatus::Found, xi};
    }

    if (degenerate(x)) return {v >= 0.0 ? MapStatus::AboveRange : MapStatus::BelowRange, 0.0};
    if (v <= 0.0) return {MapStatus::BelowRange, 0.0};
    if (t > 0.0 && v >= x / t) return {MapStatus::AboveRange, xi_cap_};
    if (t == 0.0) return {MapStatus::Found, v / std::sin(x)};

    double lo = 0.0, hi = std::min(4.0, xi_cap_);
    for (int d = 0; u(t, x, hi) < v; ++d) {
        if (hi >= xi_cap_) return {MapStatus::AboveRange, xi_cap_};
        if (d >= opts_.max_doublings) throw ContractViolation("inverse_map: upper bracket expansion failed");
        lo = hi;
        hi = std::min(2.0 * hi, xi_cap_);
    }
    // Each iterate costs a Cole-Hopf build, so use a bracketed superlinear solver.
    // Residuals below tol_v are reported as exact roots, which ends the search.
    auto residual = [&](double xi) {
        const double r = u(t, x, xi) - v;
        return std::abs(r) < opts_.tol_v ? 0.0 : r;
    };
    const double f_lo = residual(lo), f_hi = residual(hi);
    if (f_lo == 0.0) return {MapStatus::Found, lo};
    if (f_hi == 0.0) return {MapStatus::Found, hi};
    auto max_iter = static_cast<std::uintmax_t>(opts_.max_iterations);
    const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi,
                                                          boost::math::tools::eps_tolerance<double>(52), max_iter);
    return {MapStatus::Found, 0.5 * (a + b)};
}

double SemiAnalytic::exact_cdf(double t, double x, double v) const {
    const InverseResult r = inverse_map(t, x, v);
    switch (r.status) {
        case MapStatus::BelowRange: return 0.0;
        case MapStatus::AboveRange: return 1.0;
        case MapStatus::Found: break;
    }
    return xi_cdf(params_, r.xi);
}

double SemiAnalytic::exact_pdf(double t, double x, double v) const {
    const InverseResult r = inverse_map(t, x, v);
    if (r.status != MapStatus::Found) return 0.0;
    const double density = xi_pdf(params_, r.xi);
    if (density == 0.0) return 0.0;
    const double slope = dxi_u(t, x, r.xi);
    if (!(slope > 0.0)) {
        std::ostringstream os;
        os << "exact_pdf: d_xi u = " << slope << " <= 0 at t=" << t << " x=" << x << " xi=" << r.xi;
        throw ContractViolation(os.str());
    }
    return density / slope;
}

double SemiAnalytic::exact_m(double t, double x, double v) const {
    const InverseResult r = inverse_map(t, x, v);
    if (r.status != MapStatus::Found) return 0.0;
    return epsilon_ * fields(t, x, r.xi).uxx;
}

Moments SemiAnalytic::moments(double t, double x) const {
    Vector grid(1);
    grid[0] = x;
    return moments(t, grid).front();
}

std::vector<Moments> SemiAnalytic::moments(double t, const Vector& x_grid) const {
    double a, b;
    if (params_.case_id == CaseId::I) {
        a = -6.0 * params_.sigma;
        b = 6.0 * params_.sigma;
    } else {
        a = 0.0;
        b = xi_upper_quantile(params_, 1e-8);
    }
    const Eigen::Index n = x_grid.size();
    Vector s0 = Vector::Zero(n), s1 = Vector::Zero(n), s2 = Vector::Zero(n);
    double mass = 0.0;
    const double h = (b - a) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double xi = mid + 0.5 * h * kGaussNodes[q];
            const double w = 0.5 * h * kGaussWeights[q] * xi_pdf(params_, xi);
            mass += w;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double val = u(t, x_grid[j], xi);
                s1[j] += w * val;
                s2[j] += w * val * val;
            }
        }
    }
    std::vector<Moments> out(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        const double mean = s1[j] / mass;
        const double var = std::max(0.0, s2[j] / mass - mean * mean);
        out[static_cast<std::size_t>(j)] = {mean, std::sqrt(var)};
    }
    return out;
}

}  // namespace sclaw
