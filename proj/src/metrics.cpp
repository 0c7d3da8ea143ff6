#include "sclaw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace sclaw {

namespace {

void check_same_grid(const DistributionSlice& a, const DistributionSlice& b) {
    if (a.v.size() != b.v.size() || a.v != b.v) throw std::invalid_argument("slices are on different v-grids");
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << std::setprecision(17);
    return os;
}

}  // namespace

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Exact: return "exact";
        case Provenance::ZeroSample: return "zero-sample";
        case Provenance::Estimated: return "estimated";
        case Provenance::Empirical: return "empirical";
    }
    return "unknown";
}

Vector uniform_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("uniform_grid: need n >= 2 and hi > lo");
    Vector g(n);
    const double h = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k) g[k] = lo + k * h;
    g[n - 1] = hi;
    return g;
}

double l2v_error(const Vector& a, const Vector& b, const Vector& v_grid) {
    const Eigen::Index n = v_grid.size();
    if (a.size() != n || b.size() != n) throw std::invalid_argument("l2v_error: size mismatch with v-grid");
    if (n < 2) throw std::invalid_argument("l2v_error: need at least 2 grid points");
    const Array d2 = (a - b).array().square();
    const Array dv = v_grid.tail(n - 1).array() - v_grid.head(n - 1).array();
    const double integral = 0.5 * (dv * (d2.head(n - 1) + d2.tail(n - 1))).sum();
    return std::sqrt(integral);
}

double l2v_error(const DistributionSlice& a, const DistributionSlice& b) {
    check_same_grid(a, b);
    return l2v_error(a.values, b.values, a.v);
}

double linf_error(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("linf_error: size mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

double linf_error(const DistributionSlice& a, const DistributionSlice& b) {
    check_same_grid(a, b);
    return linf_error(a.values, b.values);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: no samples");
    std::sort(sorted_.begin(), sorted_.end());
}

EmpiricalCdf::EmpiricalCdf(const Vector& samples)
    : EmpiricalCdf(std::vector<double>(samples.data(), samples.data() + samples.size())) {}

double EmpiricalCdf::operator()(double v) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), v);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double empirical_cdf(const Vector& samples, double v) {
    if (samples.size() == 0) throw std::invalid_argument("empirical_cdf: no samples");
    return static_cast<double>((samples.array() <= v).count()) / static_cast<double>(samples.size());
}

RateFit rate_fit(const std::vector<double>& n_values, const std::vector<double>& error_values) {
    const std::size_t m = n_values.size();
    if (m != error_values.size()) throw std::invalid_argument("rate_fit: size mismatch");
    if (m < 3) throw std::invalid_argument("rate_fit: need at least 3 points");
    Eigen::MatrixXd A(m, 2);
    Vector y(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(n_values[i] > 0.0) || !(error_values[i] > 0.0))
            throw std::invalid_argument("rate_fit: inputs must be positive");
        A(i, 0) = 1.0;
        A(i, 1) = std::log(n_values[i]);
        y[i] = std::log(error_values[i]);
    }
    const Vector coef = A.colPivHouseholderQr().solve(y);
    const Vector resid = y - A * coef;
    const double ss_tot = (y.array() - y.mean()).square().sum();
    const double ss_res = resid.squaredNorm();
    return {coef[1], coef[0], ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

double theorem43_bound(double t, double g2_bound, double grad_m_inf, double grad_G_inf, double m_error_inf) {
    if (!(t >= 0.0 && g2_bound >= 0.0 && grad_m_inf >= 0.0 && grad_G_inf >= 0.0 && m_error_inf >= 0.0))
        throw std::invalid_argument("theorem43_bound: arguments must be non-negative");
    if (t == 0.0 || m_error_inf == 0.0 || grad_G_inf == 0.0) return 0.0;
    return std::exp((g2_bound + grad_m_inf) * t) * grad_G_inf * m_error_inf * t;
}

ErrorReport make_report(const DistributionSlice& approx, const DistributionSlice& reference, std::string variant,
                        std::size_t n, double h_v, double dt) {
    ErrorReport r;
    r.t = approx.t;
    r.x = approx.x;
    r.variant = std::move(variant);
    r.n = n;
    r.h_v = h_v;
    r.dt = dt;
    r.l2v_error = l2v_error(approx, reference);
    r.linf_error = linf_error(approx, reference);
    r.v_lo = approx.v[0];
    r.v_hi = approx.v[approx.v.size() - 1];
    return r;
}

void write_ledger_csv(const std::filesystem::path& path, const std::vector<ErrorReport>& rows) {
    auto os = open_csv(path);
    os << "t,x,variant,N,h_v,dt,l2v_error,linf_error,v_lo,v_hi,repeats,l2v_sd\n";
    for (const auto& r : rows)
        os << r.t << ',' << r.x << ',' << r.variant << ',' << r.n << ',' << r.h_v << ',' << r.dt << ',' << r.l2v_error
           << ',' << r.linf_error << ',' << r.v_lo << ',' << r.v_hi << ',' << r.repeats << ',' << r.l2v_sd << '\n';
}

void write_slice_csv(const std::filesystem::path& path, const std::vector<DistributionSlice>& slices,
                     const std::string& value_name) {
    auto os = open_csv(path);
    os << "t,x,v," << value_name << ",provenance\n";
    for (const auto& s : slices)
        for (Eigen::Index k = 0; k < s.v.size(); ++k)
            os << s.t << ',' << s.x << ',' << s.v[k] << ',' << s.values[k] << ',' << to_string(s.provenance) << '\n';
}

}  // namespace sclaw
