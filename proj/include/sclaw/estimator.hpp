#ifndef SCLAW_ESTIMATOR_HPP
#define SCLAW_ESTIMATOR_HPP

// Nadaraya-Watson estimate of the drift m(t,x,v) = eps * E[u_xx | u = v] from an
// ensemble of exact sample solutions, with the uniform kernel
//
//   m_hat(v) = eps * sum_i uxx_i 1{|u_i - v| <= h/2} / sum_i 1{|u_i - v| <= h/2}
//
// and m_hat = 0 when the window is empty.

#include "sclaw/burgers_exact.hpp"
#include "sclaw/random_models.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

namespace sclaw {

/// Sample solutions of one ensemble. Case I shares the xi = 0 solution through
/// the Galilean shift; Case II holds one Cole-Hopf build per distinct sample.
class EnsembleSolutions {
public:
    EnsembleSolutions(InitialEnsemble ensemble, double epsilon, BuildOptions build = {});

    const InitialEnsemble& ensemble() const { return ensemble_; }
    const ModelParams& params() const { return ensemble_.params; }
    double epsilon() const { return epsilon_; }
    std::size_t size() const { return ensemble_.size(); }

    Fields fields(std::size_t i, double t, double x) const;

    /// Sample indices ordered by increasing xi (ties by index).
    const std::vector<std::size_t>& order_by_xi() const { return order_; }

private:
    InitialEnsemble ensemble_;
    double epsilon_;
    std::shared_ptr<const ColeHopfSolution> base_;
    std::vector<std::shared_ptr<const ColeHopfSolution>> per_sample_;
    std::vector<std::size_t> order_;
};

struct SampleSlice {
    double t = 0.0;
    double x = 0.0;
    double epsilon = 0.1;
    Vector u;
    Vector uxx;

    std::size_t size() const { return static_cast<std::size_t>(u.size()); }
};

SampleSlice build_slice(const EnsembleSolutions& solutions, double t, double x);

struct Estimate {
    double m_hat = 0.0;
    std::size_t n_in_window = 0;
};

/// O(N) scan over the slice in sample order.
Estimate estimate_m_bruteforce(const SampleSlice& slice, double h_v, double v);

/// Slice with u sorted once; each query is a binary range search. The window
/// sum runs in sample order, so results equal estimate_m_bruteforce exactly.
class ConditionalEstimator {
public:
    ConditionalEstimator(SampleSlice slice, double h_v);

    Estimate estimate(double v) const;
    double operator()(double v) const { return estimate(v).m_hat; }

    const SampleSlice& slice() const { return slice_; }
    double bandwidth() const { return h_v_; }

private:
    SampleSlice slice_;
    double h_v_;
    std::vector<double> sorted_u_;
    std::vector<std::size_t> sorted_index_;
};

/// h_v = c N^(-1/5)
double bandwidth_rule(std::size_t n, double c_const);

/// Drift m_hat(t, x, v) evaluated directly from the ensemble. Uses the monotonicity
/// of xi -> u(t,x,xi) to locate the window by bisection over the xi-sorted samples,
/// then evaluates u_xx only inside the window. Falls back to a full scan where
/// monotonicity is degenerate (Case II at sin x = 0).
class EnsembleDrift {
public:
    EnsembleDrift(std::shared_ptr<const EnsembleSolutions> solutions, double h_v);

    Estimate estimate(double t, double x, double v) const;
    double operator()(double t, double x, double v) const { return estimate(t, x, v).m_hat; }

    const EnsembleSolutions& solutions() const { return *solutions_; }
    double bandwidth() const { return h_v_; }

private:
    std::shared_ptr<const EnsembleSolutions> solutions_;
    double h_v_;
};

/// Integral of |m_hat - m|^2 over [v_lo, v_hi] by the trapezoid rule on n_points.
double integrated_squared_error(const std::function<double(double)>& m_hat, const std::function<double(double)>& m,
                                double v_lo, double v_hi, int n_points = 512);

struct MiseResult {
    double mean = 0.0;
    double sd = 0.0;
    std::vector<double> per_repeat;
};

/// Monte Carlo MISE over n_repeats ensembles. Repeat r receives seed
/// derive_seed(master_seed, r); repeats run on up to `jobs` threads and the
/// result does not depend on `jobs`.
MiseResult mise(const std::function<ConditionalEstimator(std::uint64_t seed)>& builder,
                const std::function<double(double)>& exact_m, double v_lo, double v_hi, int n_repeats,
                std::uint64_t master_seed, int n_points = 512, int jobs = 1);

/// Columns t,x,v,m_hat,n_in_window.
void write_estimate_csv(const std::filesystem::path& path, const ConditionalEstimator& est, const Vector& v_grid);

}  // namespace sclaw

#endif  // SCLAW_ESTIMATOR_HPP
