#ifndef SCLAW_SEMI_ANALYTIC_HPP
#define SCLAW_SEMI_ANALYTIC_HPP

// Reference statistics of u(t, x, xi) for the two monotone initial-data families.
//
// Both families have xi -> u(t, x, xi) strictly increasing (Case II on (0, pi)),
// so with xi* = inverse of that map at level v:
//
//   F(t,x,v) = P(xi <= xi*),   f(t,x,v) = p(xi*) / d_xi u(t,x,xi*),
//   m(t,x,v) = eps * u_xx(t,x,xi*).
//
// m is always reported with the viscosity factor included, i.e. as the drift
// coefficient of the CDF transport equation F_t + u F_x + m F_v = 0.

#include "sclaw/burgers_exact.hpp"
#include "sclaw/random_models.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace sclaw {

enum class MapStatus { Found, BelowRange, AboveRange };

struct InverseResult {
    MapStatus status = MapStatus::Found;
    double xi = 0.0;
};

struct SemiAnalyticOptions {
    double tol_v = 1e-10;        // bisection stops once |u(xi) - v| < tol_v
    int max_iterations = 200;
    int max_doublings = 60;
    double case_ii_tail = 1e-14;  // Case II bracket never grows past this upper-tail quantile
    BuildOptions build{};
};

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

class SemiAnalytic {
public:
    SemiAnalytic(ModelParams params, double epsilon, SemiAnalyticOptions opts = {});

    const ModelParams& params() const { return params_; }
    double epsilon() const { return epsilon_; }
    const SemiAnalyticOptions& options() const { return opts_; }

    /// u, u_x, u_xx of the realization with parameter xi.
    Fields fields(double t, double x, double xi) const;
    double u(double t, double x, double xi) const { return fields(t, x, xi).u; }

    /// d u / d xi at fixed (t, x).
    double dxi_u(double t, double x, double xi) const;

    InverseResult inverse_map(double t, double x, double v) const;

    double exact_cdf(double t, double x, double v) const;
    double exact_pdf(double t, double x, double v) const;
    double exact_m(double t, double x, double v) const;

    /// E[u](t,x) and SD[u](t,x) by composite 4-point Gauss-Legendre quadrature in xi.
    Moments moments(double t, double x) const;
    std::vector<Moments> moments(double t, const Vector& x_grid) const;

    /// Case I: the single xi = 0 solution. Case II: cached build at xi rounded to 1e-12.
    std::shared_ptr<const ColeHopfSolution> solution(double xi) const;

private:
    void check_domain(double x) const;
    bool degenerate(double x) const;
    double xi_cap() const { return xi_cap_; }

    ModelParams params_;
    double epsilon_;
    SemiAnalyticOptions opts_;
    std::shared_ptr<const ColeHopfSolution> base_;
    double xi_cap_ = 0.0;

    mutable std::mutex mutex_;
    mutable std::unordered_map<std::int64_t, std::shared_ptr<const ColeHopfSolution>> cache_;
};

}  // namespace sclaw

#endif  // SCLAW_SEMI_ANALYTIC_HPP
