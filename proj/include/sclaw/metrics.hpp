#ifndef SCLAW_METRICS_HPP
#define SCLAW_METRICS_HPP

#include "sclaw/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sclaw {

enum class Provenance { Exact, ZeroSample, Estimated, Empirical };

std::string_view to_string(Provenance p);

/// F or f sampled on a v-grid at fixed (t, x).
struct DistributionSlice {
    double t = 0.0;
    double x = 0.0;
    Vector v;
    Vector values;
    Provenance provenance = Provenance::Exact;
};

Vector uniform_grid(double lo, double hi, int n);

/// sqrt of the trapezoid integral of |a - b|^2 over the grid.
double l2v_error(const Vector& a, const Vector& b, const Vector& v_grid);
double l2v_error(const DistributionSlice& a, const DistributionSlice& b);

double linf_error(const Vector& a, const Vector& b);
double linf_error(const DistributionSlice& a, const DistributionSlice& b);

/// Right-continuous step function (1/N) #{u_i <= v}.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);
    explicit EmpiricalCdf(const Vector& samples);

    double operator()(double v) const;
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

double empirical_cdf(const Vector& samples, double v);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least squares fit of log(error) = intercept + slope log(n).
RateFit rate_fit(const std::vector<double>& n_values, const std::vector<double>& error_values);

/// exp((C + |grad m|) t) |grad G| |m - m_hat| t
double theorem43_bound(double t, double g2_bound, double grad_m_inf, double grad_G_inf, double m_error_inf);

struct ErrorReport {
    double t = 0.0;
    double x = 0.0;
    std::string variant;
    std::size_t n = 0;
    double h_v = 0.0;
    double dt = 0.0;
    double l2v_error = 0.0;
    double linf_error = 0.0;
    double v_lo = 0.0;
    double v_hi = 0.0;
    int repeats = 1;
    double l2v_sd = 0.0;  // spread across repeats
};

ErrorReport make_report(const DistributionSlice& approx, const DistributionSlice& reference, std::string variant,
                        std::size_t n, double h_v, double dt);

/// Columns t,x,variant,N,h_v,dt,l2v_error,linf_error,v_lo,v_hi,repeats,l2v_sd.
void write_ledger_csv(const std::filesystem::path& path, const std::vector<ErrorReport>& rows);

/// Columns t,x,v,<value_name>,provenance.
void write_slice_csv(const std::filesystem::path& path, const std::vector<DistributionSlice>& slices,
                     const std::string& value_name);

}  // namespace sclaw

#endif  // SCLAW_METRICS_HPP
