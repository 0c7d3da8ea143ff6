#include "sclaw/estimator.hpp"
#include "sclaw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>

namespace sclaw {

namespace {

// Sum of uxx over the given sample indices, taken in increasing index order.
template <class Uxx>
Estimate window_average(std::vector<std::size_t>& members, double epsilon, Uxx&& uxx) {
    if (members.empty()) return {0.0, 0};
    std::sort(members.begin(), members.end());
    double sum = 0.0;
    for (std::size_t i : members) sum += uxx(i);
    return {epsilon * sum / static_cast<double>(members.size()), members.size()};
}

}  // namespace

EnsembleSolutions::EnsembleSolutions(InitialEnsemble ensemble, double epsilon, BuildOptions build)
    : ensemble_(std::move(ensemble)), epsilon_(epsilon) {
    ensemble_.params.validate();
    if (!(epsilon_ > 0.0)) throw std::invalid_argument("EnsembleSolutions: epsilon must be positive");
    const std::size_t n = ensemble_.size();
    if (ensemble_.params.case_id == CaseId::I) {
        base_ = std::make_shared<const ColeHopfSolution>(build_solution(CaseId::I, epsilon_, 0.0, build));
    } else {
        per_sample_.resize(n);
        std::map<double, std::shared_ptr<const ColeHopfSolution>> built;
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = ensemble_.samples[static_cast<Eigen::Index>(i)];
            auto& slot = built[xi];
            if (!slot) slot = std::make_shared<const ColeHopfSolution>(build_solution(CaseId::II, epsilon_, xi, build));
            per_sample_[i] = slot;
        }
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        return ensemble_.samples[static_cast<Eigen::Index>(a)] < ensemble_.samples[static_cast<Eigen::Index>(b)];
    });
}

Fields EnsembleSolutions::fields(std::size_t i, double t, double x) const {
    const double xi = ensemble_.samples[static_cast<Eigen::Index>(i)];
    if (base_) return shifted_eval(*base_, t, x, xi);
    if (t == 0.0) return initial_fields(CaseId::II, xi, x);
    return fields_eval(*per_sample_[i], t, x);
}

SampleSlice build_slice(const EnsembleSolutions& solutions, double t, double x) {
    if (solutions.size() == 0) throw std::invalid_argument("build_slice: empty ensemble");
    const auto n = static_cast<Eigen::Index>(solutions.size());
    SampleSlice slice{t, x, solutions.epsilon(), Vector(n), Vector(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Fields f = solutions.fields(static_cast<std::size_t>(i), t, x);
        slice.u[i] = f.u;
        slice.uxx[i] = f.uxx;
    }
    return slice;
}

Estimate estimate_m_bruteforce(const SampleSlice& slice, double h_v, double v) {
    if (!(h_v > 0.0)) throw std::invalid_argument("estimate_m: bandwidth must be positive");
    const double half = 0.5 * h_v;
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < slice.u.size(); ++i) {
        if (std::abs(slice.u[i] - v) <= half) {
            sum += slice.uxx[i];
            ++count;
        }
    }
    if (count == 0) return {0.0, 0};
    return {slice.epsilon * sum / static_cast<double>(count), count};
}

ConditionalEstimator::ConditionalEstimator(SampleSlice slice, double h_v) : slice_(std::move(slice)), h_v_(h_v) {
    if (!(h_v_ > 0.0)) throw std::invalid_argument("ConditionalEstimator: bandwidth must be positive");
    if (slice_.u.size() != slice_.uxx.size())
        throw std::invalid_argument("ConditionalEstimator: u and uxx lengths differ");
    const std::size_t n = slice_.size();
    sorted_index_.resize(n);
    std::iota(sorted_index_.begin(), sorted_index_.end(), std::size_t{0});
    std::stable_sort(sorted_index_.begin(), sorted_index_.end(), [&](std::size_t a, std::size_t b) {
        return slice_.u[static_cast<Eigen::Index>(a)] < slice_.u[static_cast<Eigen::Index>(b)];
    });
    sorted_u_.resize(n);
    for (std::size_t k = 0; k < n; ++k) sorted_u_[k] = slice_.u[static_cast<Eigen::Index>(sorted_index_[k])];
}

Estimate ConditionalEstimator::estimate(double v) const {
    const double half = 0.5 * h_v_;
    // |u - v| <= h/2 evaluated exactly as in the scan, so boundary ties agree.
    auto first = std::partition_point(sorted_u_.begin(), sorted_u_.end(),
                                      [&](double u) { return u < v && !(std::abs(u - v) <= half); });
    auto last = std::partition_point(first, sorted_u_.end(), [&](double u) { return std::abs(u - v) <= half || u < v; });
    std::vector<std::size_t> members(sorted_index_.begin() + (first - sorted_u_.begin()),
                                     sorted_index_.begin() + (last - sorted_u_.begin()));
    return window_average(members, slice_.epsilon,
                          [&](std::size_t i) { return slice_.uxx[static_cast<Eigen::Index>(i)]; });
}

double bandwidth_rule(std::size_t n, double c_const) {
    if (n < 1) throw std::invalid_argument("bandwidth_rule: n must be >= 1");
    if (!(c_const > 0.0)) throw std::invalid_argument("bandwidth_rule: constant must be positive");
    return c_const * std::pow(static_cast<double>(n), -0.2);
}

EnsembleDrift::EnsembleDrift(std::shared_ptr<const EnsembleSolutions> solutions, double h_v)
    : solutions_(std::move(solutions)), h_v_(h_v) {
    if (!solutions_) throw std::invalid_argument("EnsembleDrift: null ensemble");
    if (!(h_v_ > 0.0)) throw std::invalid_argument("EnsembleDrift: bandwidth must be positive");
}

Estimate EnsembleDrift::estimate(double t, double x, double v) const {
    const EnsembleSolutions& sols = *solutions_;
    const double half = 0.5 * h_v_;
    const double eps = sols.epsilon();
    auto uxx_of = [&](std::size_t i) { return sols.fields(i, t, x).uxx; };

    int direction = 1;
    if (sols.params().case_id == CaseId::II) {
        const double s = std::sin(x);
        if (std::abs(s) < 1e-12) direction = 0;
        else if (s < 0.0) direction = -1;
    }
    if (direction == 0) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < sols.size(); ++i)
            if (std::abs(sols.fields(i, t, x).u - v) <= half) members.push_back(i);
        return window_average(members, eps, uxx_of);
    }

    // Samples ordered so that u increases along the sequence.
    const auto& order = sols.order_by_xi();
    const std::size_t n = order.size();
    auto at = [&](std::size_t k) { return order[direction > 0 ? k : n - 1 - k]; };
    auto u_at = [&](std::size_t k) { return sols.fields(at(k), t, x).u; };

    auto bisect = [&](std::size_t lo, auto&& pred) {
        std::size_t hi = n;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (pred(u_at(mid))) lo = mid + 1;
            else hi = mid;
        }
        return lo;
    };
    const std::size_t first = bisect(0, [&](double u) { return u < v && !(std::abs(u - v) <= half); });
    const std::size_t last = bisect(first, [&](double u) { return std::abs(u - v) <= half || u < v; });

    std::vector<std::size_t> members;
    members.reserve(last - first);
    for (std::size_t k = first; k < last; ++k) members.push_back(at(k));
    return window_average(members, eps, uxx_of);
}

double integrated_squared_error(const std::function<double(double)>& m_hat, const std::function<double(double)>& m,
                                double v_lo, double v_hi, int n_points) {
    if (!(v_hi > v_lo) || !std::isfinite(v_lo) || !std::isfinite(v_hi))
        throw std::invalid_argument("integrated_squared_error: invalid v-range");
    if (n_points < 2) throw std::invalid_argument("integrated_squared_error: need at least 2 points");
    const double dv = (v_hi - v_lo) / (n_points - 1);
    double sum = 0.0;
    for (int k = 0; k < n_points; ++k) {
        const double v = v_lo + k * dv;
        const double d = m_hat(v) - m(v);
        sum += (k == 0 || k == n_points - 1 ? 0.5 : 1.0) * d * d;
    }
    return sum * dv;
}

MiseResult mise(const std::function<ConditionalEstimator(std::uint64_t seed)>& builder,
                const std::function<double(double)>& exact_m, double v_lo, double v_hi, int n_repeats,
                std::uint64_t master_seed, int n_points, int jobs) {
    if (n_repeats < 1) throw std::invalid_argument("mise: n_repeats must be >= 1");
    MiseResult out;
    out.per_repeat.assign(static_cast<std::size_t>(n_repeats), 0.0);
    parallel_for(out.per_repeat.size(), jobs, [&](std::size_t r) {
        const ConditionalEstimator est = builder(derive_seed(master_seed, r));
        out.per_repeat[r] = integrated_squared_error([&](double v) { return est(v); }, exact_m, v_lo, v_hi, n_points);
    });
    const Eigen::Map<const Vector> values(out.per_repeat.data(), n_repeats);
    out.mean = values.mean();
    out.sd = n_repeats > 1 ? std::sqrt((values.array() - out.mean).square().sum() / (n_repeats - 1)) : 0.0;
    return out;
}

void write_estimate_csv(const std::filesystem::path& path, const ConditionalEstimator& est, const Vector& v_grid) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "t,x,v,m_hat,n_in_window\n" << std::setprecision(17);
    for (Eigen::Index k = 0; k < v_grid.size(); ++k) {
        const Estimate e = est.estimate(v_grid[k]);
        os << est.slice().t << ',' << est.slice().x << ',' << v_grid[k] << ',' << e.m_hat << ',' << e.n_in_window
           << '\n';
    }
}

}  // namespace sclaw
