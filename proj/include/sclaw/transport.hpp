#ifndef SCLAW_TRANSPORT_HPP
#define SCLAW_TRANSPORT_HPP

// CDF transport equation
//
//   F_t + g'(v) F_x + m(t,x,v) F_v = 0,   F(0,x,v) = G(x,v),
//
// solved pointwise by tracing the characteristic dX/dtau = g'(V), dV/dtau = m
// backward from (x, v) at tau = t to tau = 0, so that F(t,x,v) = G(X(0), V(0)).

#include "sclaw/estimator.hpp"
#include "sclaw/random_models.hpp"
#include "sclaw/semi_analytic.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace sclaw {

/// Flux derivatives g'(v) and g''(v).
struct Flux {
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    bool burgers = false;

    static Flux burgers_flux();              // g = v^2 / 2
    static Flux linear(double speed);        // g = speed * v
};

struct ZeroDrift {};

/// Exact m from the semi-analytic reference. Case II queries with x in (pi, 2 pi)
/// use the odd symmetry m(t, x, v) = -m(t, 2 pi - x, -v).
struct ExactDrift {
    std::shared_ptr<const SemiAnalytic> model;
};

struct EstimatedDrift {
    std::shared_ptr<const EnsembleDrift> estimator;
};

/// Exact m plus a constant offset delta.
struct PerturbedDrift {
    std::shared_ptr<const SemiAnalytic> model;
    double delta = 0.0;
};

class DriftFunction {
public:
    using Variant = std::variant<ZeroDrift, ExactDrift, EstimatedDrift, PerturbedDrift>;

    DriftFunction() = default;
    DriftFunction(Variant v) : impl_(std::move(v)) {}

    double operator()(double t, double x, double v) const;
    bool is_zero() const { return std::holds_alternative<ZeroDrift>(impl_); }
    std::string label() const;
    const Variant& variant() const { return impl_; }

private:
    Variant impl_;
};

struct CharacteristicState {
    double X = 0.0;
    double V = 0.0;
    double tau = 0.0;
};

/// Default Euler step: 1e-3 for t <= 2, 1e-2 beyond.
double default_dt(double t);

/// Explicit Euler from tau = t down to tau = 0 with a final partial step; X is
/// wrapped into [0, 2 pi) after every step. Zero drift is integrated in closed form.
CharacteristicState trace_back(double t, double x, double v, const DriftFunction& drift, double dt,
                               const Flux& flux = Flux::burgers_flux());

/// Every Euler node from tau = t down to tau = 0, in that order.
std::vector<CharacteristicState> trace_back_path(double t, double x, double v, const DriftFunction& drift,
                                                 double dt, const Flux& flux = Flux::burgers_flux());

using InitialCdf = std::function<double(double x, double v)>;
using InitialCdfGradient = std::function<CdfGradient(double x, double v)>;

/// G over the full periodic domain for the given family.
InitialCdf initial_cdf_function(const ModelParams& params);
InitialCdfGradient initial_cdf_gradient_function(const ModelParams& params);

/// F_hat(t,x,v) = G(psi(0)).
double approx_cdf(double t, double x, double v, const DriftFunction& drift, double dt, const InitialCdf& G,
                  const Flux& flux = Flux::burgers_flux());

/// Solution with m dropped: F_S0 = G(x - g'(v) t, v).
double zero_sample_cdf(double t, double x, double v, const InitialCdf& G, const Flux& flux = Flux::burgers_flux());

/// f_S0 = dG/dv - t g''(v) dG/dx, evaluated at (x - g'(v) t, v).
double zero_sample_pdf(double t, double x, double v, const InitialCdfGradient& grad,
                       const Flux& flux = Flux::burgers_flux());

struct PositivityResult {
    double min_slope = 0.0;
    double argmin_v = 0.0;  // left end of the steepest decreasing interval
    bool monotone() const { return min_slope >= 0.0; }
};

/// Smallest forward-difference slope of a CDF over a strictly increasing grid (>= 16 points).
PositivityResult positivity_scan(const std::function<double(double)>& cdf, const Vector& v_grid);

struct CertificateResult {
    bool passed = true;
    double x0 = 0.0;
    double v0 = 0.0;
    double t_star = 0.0;  // dG/dv / (g'' dG/dx) at the witness; minimal over violating points
    std::size_t violations = 0;
};

/// Checks g''(v) dG/dx(x, v) <= 0 at every sample point.
CertificateResult theorem31_certificate(const InitialCdfGradient& grad, const std::function<double(double)>& g2,
                                        const std::vector<std::pair<double, double>>& sample_points);

/// One row of a CDF/PDF export.
struct TransportRow {
    double t, x, v, F_hat, f_hat;
    std::string variant;
    std::size_t n;
    double h_v, dt;
};

/// Columns t,x,v,F_hat,f_hat,variant,N,h_v,dt.
void write_transport_csv(const std::filesystem::path& path, const std::vector<TransportRow>& rows);

/// Central differences of F on the grid (one-sided at the ends).
Vector differentiate_on_grid(const Vector& values, const Vector& v_grid);

}  // namespace sclaw

#endif  // SCLAW_TRANSPORT_HPP
