#include "sclaw/transport.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace sclaw {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double exact_periodic_m(const SemiAnalytic& model, double t, double x, double v) {
    if (model.params().case_id == CaseId::II && x > kPi + 1e-12) return -model.exact_m(t, kTwoPi - x, -v);
    return model.exact_m(t, x, v);
}

struct StepPlan {
    long full_steps;
    double remainder;
};

StepPlan plan_steps(double t, double dt) {
    const double ratio = t / dt;
    long n = static_cast<long>(std::floor(ratio));
    if (ratio - static_cast<double>(n) > 1.0 - 1e-9) ++n;
    double rem = t - static_cast<double>(n) * dt;
    if (rem < 1e-12 * std::max(1.0, t)) rem = 0.0;
    return {n, rem};
}

void check_trace_args(double t, double dt) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("trace_back: t must be finite and >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("trace_back: dt must be positive");
}

// One backward Euler node: psi(tau - h) = psi(tau) - h (g'(V), m(tau, X, V)).
void euler_step(CharacteristicState& s, double h, const DriftFunction& drift, const Flux& flux) {
    const double m = drift(s.tau, s.X, s.V);
    if (!std::isfinite(m)) {
        std::ostringstream os;
        os << "trace_back: non-finite drift at tau=" << s.tau << " X=" << s.X << " V=" << s.V;
        throw NumericalFailure(os.str());
    }
    const double speed = flux.burgers ? s.V : flux.d1(s.V);
    s.X = wrap_periodic(s.X - h * speed);
    s.V -= h * m;
}

}  // namespace

Flux Flux::burgers_flux() {
    return {[](double v) { return v; }, [](double) { return 1.0; }, true};
}

Flux Flux::linear(double speed) {
    return {[speed](double) { return speed; }, [](double) { return 0.0; }, false};
}

double DriftFunction::operator()(double t, double x, double v) const {
    return std::visit(Overloaded{
                          [](const ZeroDrift&) { return 0.0; },
                          [&](const ExactDrift& d) { return exact_periodic_m(*d.model, t, x, v); },
                          [&](const EstimatedDrift& d) { return (*d.estimator)(t, x, v); },
                          [&](const PerturbedDrift& d) { return exact_periodic_m(*d.model, t, x, v) + d.delta; },
                      },
                      impl_);
}

std::string DriftFunction::label() const {
    return std::visit(Overloaded{
                          [](const ZeroDrift&) { return std::string("zero-sample"); },
                          [](const ExactDrift&) { return std::string("exact-drift"); },
                          [](const EstimatedDrift&) { return std::string("estimated"); },
                          [](const PerturbedDrift&) { return std::string("perturbed"); },
                      },
                      impl_);
}

double default_dt(double t) { return t <= 2.0 ? 1e-3 : 1e-2; }

CharacteristicState trace_back(double t, double x, double v, const DriftFunction& drift, double dt,
                               const Flux& flux) {
    check_trace_args(t, dt);
    if (drift.is_zero()) return {wrap_periodic(x - flux.d1(v) * t), v, 0.0};
    const StepPlan plan = plan_steps(t, dt);
    CharacteristicState s{wrap_periodic(x), v, t};
    for (long k = 0; k < plan.full_steps; ++k) {
        s.tau = t - static_cast<double>(k) * dt;
        euler_step(s, dt, drift, flux);
    }
    if (plan.remainder > 0.0) {
        s.tau = plan.remainder;
        euler_step(s, plan.remainder, drift, flux);
    }
    s.tau = 0.0;
    return s;
}

std::vector<CharacteristicState> trace_back_path(double t, double x, double v, const DriftFunction& drift,
                                                 double dt, const Flux& flux) {
    check_trace_args(t, dt);
    const StepPlan plan = plan_steps(t, dt);
    std::vector<CharacteristicState> path;
    path.reserve(static_cast<std::size_t>(plan.full_steps) + 2);
    CharacteristicState s{wrap_periodic(x), v, t};
    path.push_back(s);
    for (long k = 0; k < plan.full_steps; ++k) {
        s.tau = t - static_cast<double>(k) * dt;
        euler_step(s, dt, drift, flux);
        s.tau = t - static_cast<double>(k + 1) * dt;
        if (k + 1 == plan.full_steps && plan.remainder == 0.0) s.tau = 0.0;
        path.push_back(s);
    }
    if (plan.remainder > 0.0) {
        s.tau = plan.remainder;
        euler_step(s, plan.remainder, drift, flux);
        s.tau = 0.0;
        path.push_back(s);
    }
    return path;
}

InitialCdf initial_cdf_function(const ModelParams& params) {
    return [params](double x, double v) { return periodic_initial_cdf_G(params, x, v); };
}

InitialCdfGradient initial_cdf_gradient_function(const ModelParams& params) {
    return [params](double x, double v) { return periodic_initial_cdf_gradient(params, x, v); };
}

double approx_cdf(double t, double x, double v, const DriftFunction& drift, double dt, const InitialCdf& G,
                  const Flux& flux) {
    const CharacteristicState s = trace_back(t, x, v, drift, dt, flux);
    return G(s.X, s.V);
}

double zero_sample_cdf(double t, double x, double v, const InitialCdf& G, const Flux& flux) {
    return G(wrap_periodic(x - flux.d1(v) * t), v);
}

double zero_sample_pdf(double t, double x, double v, const InitialCdfGradient& grad, const Flux& flux) {
    const CdfGradient g = grad(wrap_periodic(x - flux.d1(v) * t), v);
    return g.dv - t * flux.d2(v) * g.dx;
}

PositivityResult positivity_scan(const std::function<double(double)>& cdf, const Vector& v_grid) {
    if (v_grid.size() < 16) throw std::invalid_argument("positivity_scan: need at least 16 grid points");
    for (Eigen::Index k = 1; k < v_grid.size(); ++k)
        if (!(v_grid[k] > v_grid[k - 1])) throw std::invalid_argument("positivity_scan: grid must be strictly increasing");
    PositivityResult out{std::numeric_limits<double>::infinity(), v_grid[0]};
    double prev = cdf(v_grid[0]);
    for (Eigen::Index k = 1; k < v_grid.size(); ++k) {
        const double cur = cdf(v_grid[k]);
        const double slope = (cur - prev) / (v_grid[k] - v_grid[k - 1]);
        if (slope < out.min_slope) out = {slope, v_grid[k - 1]};
        prev = cur;
    }
    return out;
}

CertificateResult theorem31_certificate(const InitialCdfGradient& grad, const std::function<double(double)>& g2,
                                        const std::vector<std::pair<double, double>>& sample_points) {
    CertificateResult out;
    out.t_star = std::numeric_limits<double>::infinity();
    double witness_product = 0.0;
    for (const auto& [x, v] : sample_points) {
        const CdfGradient g = grad(x, v);
        const double product = g2(v) * g.dx;
        if (!(product > 0.0)) continue;
        ++out.violations;
        out.passed = false;
        const double t_star = g.dv / product;
        // Ties in t* go to the strongest violation.
        const bool tie = std::abs(t_star - out.t_star) <= 1e-12 * t_star;
        if ((t_star < out.t_star && !tie) || (tie && product > witness_product)) {
            out.t_star = t_star;
            witness_product = product;
            out.x0 = x;
            out.v0 = v;
        }
    }
    if (out.passed) out.t_star = 0.0;
    return out;
}

void write_transport_csv(const std::filesystem::path& path, const std::vector<TransportRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "t,x,v,F_hat,f_hat,variant,N,h_v,dt\n" << std::setprecision(17);
    for (const auto& r : rows)
        os << r.t << ',' << r.x << ',' << r.v << ',' << r.F_hat << ',' << r.f_hat << ',' << r.variant << ',' << r.n
           << ',' << r.h_v << ',' << r.dt << '\n';
}

Vector differentiate_on_grid(const Vector& values, const Vector& v_grid) {
    const Eigen::Index n = v_grid.size();
    if (values.size() != n || n < 2) throw std::invalid_argument("differentiate_on_grid: size mismatch");
    Vector d(n);
    d[0] = (values[1] - values[0]) / (v_grid[1] - v_grid[0]);
    d[n - 1] = (values[n - 1] - values[n - 2]) / (v_grid[n - 1] - v_grid[n - 2]);
    for (Eigen::Index k = 1; k + 1 < n; ++k) d[k] = (values[k + 1] - values[k - 1]) / (v_grid[k + 1] - v_grid[k - 1]);
    return d;
}

}  // namespace sclaw
