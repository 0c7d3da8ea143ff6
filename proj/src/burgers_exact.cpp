#include "sclaw/burgers_exact.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sclaw {

namespace {

// Antiderivative P(x) = int_0^x u0(x') dx' of the initial datum.
double initial_antiderivative(CaseId case_id, double xi, double x) {
    const double base = 1.0 - std::cos(x);
    return case_id == CaseId::I ? base + xi * x : xi * base;
}

struct Coefficients {
    Vector a;
    Vector b;
};

// Trapezoid-rule Fourier coefficients of phi_0 on m uniform nodes, using a
// fixed exponent shift so that different node counts stay comparable.
Coefficients trapezoid_coefficients(CaseId case_id, double epsilon, double xi, int k_max, int m,
                                    double shift) {
    const double h = kTwoPi / m;
    Vector phi0(m);
    for (int j = 0; j < m; ++j) {
        const double x = h * j;
        phi0[j] = std::exp(-(initial_antiderivative(case_id, xi, x) - shift) / (2.0 * epsilon));
    }
    // cos(k x_j) = table[(k j) mod m] is exact up to a single rounding
    Vector cos_table(m), sin_table(m);
    for (int j = 0; j < m; ++j) {
        cos_table[j] = std::cos(h * j);
        sin_table[j] = std::sin(h * j);
    }
    Coefficients c{Vector::Zero(k_max + 1), Vector::Zero(k_max + 1)};
    for (int k = 0; k <= k_max; ++k) {
        double sa = 0.0, sb = 0.0;
        long idx = 0;
        for (int j = 0; j < m; ++j) {
            sa += phi0[j] * cos_table[idx];
            sb += phi0[j] * sin_table[idx];
            idx += k;
            if (idx >= m) idx -= m;
        }
        c.a[k] = h * sa;
        c.b[k] = k == 0 ? 0.0 : h * sb;
    }
    return c;
}

double trapezoid_mean(CaseId case_id, double epsilon, double xi, int m, double shift) {
    const double h = kTwoPi / m;
    double s = 0.0;
    for (int j = 0; j < m; ++j)
        s += std::exp(-(initial_antiderivative(case_id, xi, h * j) - shift) / (2.0 * epsilon));
    return h * s;
}

// van Leer limited slope from one-sided differences.
double van_leer(double dl, double dr) {
    const double prod = dl * dr;
    return prod > 0.0 ? 2.0 * prod / (dl + dr) : 0.0;
}

}  // namespace

Fields initial_fields(CaseId case_id, double xi, double x) {
    const double s = std::sin(x), c = std::cos(x);
    if (case_id == CaseId::I) return {s + xi, c, -s};
    return {xi * s, xi * c, -xi * s};
}

ColeHopfSolution build_solution(CaseId case_id, double epsilon, double xi, BuildOptions opts) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_solution: epsilon must be positive");
    if (case_id == CaseId::I && xi != 0.0)
        throw std::invalid_argument("build_solution: Case I is built at xi = 0 only; use shifted_eval");
    if (case_id == CaseId::II && !(xi >= 0.0))
        throw std::invalid_argument("build_solution: Case II requires xi >= 0");
    if (opts.k_max < 8) throw std::invalid_argument("build_solution: k_max must be at least 8");
    if (opts.quad_nodes != 0 && opts.quad_nodes < 4 * opts.k_max)
        throw std::invalid_argument("build_solution: quad_nodes must be at least 4 k_max");

    int k_max = opts.k_max;
    while (true) {
        int m = opts.quad_nodes > 0 ? std::max(opts.quad_nodes, 4 * k_max) : std::max(4 * k_max, 512);

        // Shift the antiderivative by its grid minimum so all exponents are <= 0.
        double shift = initial_antiderivative(case_id, xi, 0.0);
        for (int j = 1; j < m; ++j)
            shift = std::min(shift, initial_antiderivative(case_id, xi, kTwoPi * j / m));

        int doublings = 0;
        double a0 = trapezoid_mean(case_id, epsilon, xi, m, shift);
        while (true) {
            const double a0_fine = trapezoid_mean(case_id, epsilon, xi, 2 * m, shift);
            const bool converged = std::abs(a0_fine - a0) <= 1e-10 * std::abs(a0_fine);
            m *= 2;
            a0 = a0_fine;
            if (converged) break;
            if (++doublings > 8)
                throw NumericalFailure("build_solution: quadrature of A_0 did not converge under node doubling");
        }

        Coefficients c = trapezoid_coefficients(case_id, epsilon, xi, k_max, m, shift);
        if (!(c.a[0] > 0.0) || !std::isfinite(c.a[0]))
            throw NumericalFailure("build_solution: non-positive or non-finite A_0");
        const double tail = std::abs(c.a[k_max]) + std::abs(c.b[k_max]);
        if (tail < 1e-12 * c.a[0]) {
            return ColeHopfSolution{epsilon, std::move(c.a), std::move(c.b), k_max, xi, case_id};
        }
        k_max *= 2;
        if (k_max > opts.k_max_cap)
            throw NumericalFailure("build_solution: Fourier tail criterion not met below k_max cap");
    }
}

namespace {

struct SeriesResult {
    PhiDerivatives d;
    double magnitude = 0.0;  // sum of |terms| of the order-0 series
};

SeriesResult phi_series(const ColeHopfSolution& sol, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("phi_derivatives: t must be non-negative");
    const auto& a = sol.a_coeffs;
    const auto& b = sol.b_coeffs;
    if (t > 0.0 && t < 1e-3) {
        const double kk = static_cast<double>(sol.k_max);
        const double tail = (std::abs(a[sol.k_max]) + std::abs(b[sol.k_max])) * std::exp(-sol.epsilon * kk * kk * t);
        if (!(tail < 1e-12 * a[0])) throw NumericalFailure("phi_derivatives: Fourier truncation inadequate at small t");
    }

    // exp(-eps k^2 t) by the recurrence d_{k+1} = d_k q^{2k+1}, q = exp(-eps t)
    const double q = std::exp(-sol.epsilon * t);
    const double q2 = q * q;
    double damp = q;
    double ratio = q * q2;

    const double c1 = std::cos(x), s1 = std::sin(x);
    double ck = c1, sk = s1;
    double s0 = 0.0, sd1 = 0.0, sd2 = 0.0, sd3 = 0.0, mag = 0.0;
    for (int k = 1; k <= sol.k_max; ++k) {
        const double kd = k;
        const double ac = a[k] * ck, bs = b[k] * sk;
        const double as = a[k] * sk, bc = b[k] * ck;
        s0 += damp * (ac + bs);
        mag += damp * (std::abs(a[k]) + std::abs(b[k]));
        sd1 += damp * kd * (bc - as);
        sd2 -= damp * kd * kd * (ac + bs);
        sd3 += damp * kd * kd * kd * (as - bc);

        if (damp * kd * kd * kd < 1e-18) break;
        damp *= ratio;
        ratio *= q2;
        const double cn = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = cn;
    }
    return {{a[0] / kTwoPi + s0 / kPi, sd1 / kPi, sd2 / kPi, sd3 / kPi}, a[0] / kTwoPi + mag / kPi};
}

}  // namespace

// Same solution written as the heat-kernel integral over the real line,
//   phi(t,x) ~ int exp(-P(y)/(2 eps) - (x-y)^2/(2s)) dy,  s = 2 eps t,
// so that with normalized weights w(y):
//   u = (x - E[y])/t,  u_x = (1 - Var[y]/s)/t,  u_xx = -2 eps kappa_3[y]/s^3.
// The exponent is max-shifted, so this stays accurate where phi spans many
// orders of magnitude and the Fourier sum cancels catastrophically.
Fields heat_kernel_fields(const ColeHopfSolution& sol, double t, double x) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_fields: t must be positive");
    const double eps = sol.epsilon;
    const double amp = sol.case_id == CaseId::I ? 1.0 : sol.xi;  // P(y) = amp (1 - cos y)
    const double s = 2.0 * eps * t;
    const double spread = 2.0 * amp / (2.0 * eps);
    const double half_width = std::sqrt(2.0 * s * (spread + 40.0));
    const double feature = std::min(std::sqrt(s), std::sqrt(2.0 * eps / std::max(amp, 1.0)));
    const int n = std::max(64, static_cast<int>(std::ceil(2.0 * half_width / (feature / 8.0))));
    const double h = 2.0 * half_width / n;

    Vector y(n + 1), logw(n + 1);
    for (int j = 0; j <= n; ++j) {
        y[j] = x - half_width + h * j;
        const double z = x - y[j];
        logw[j] = -amp * (1.0 - std::cos(y[j])) / (2.0 * eps) - z * z / (2.0 * s);
    }
    const Vector w = (logw.array() - logw.maxCoeff()).exp().matrix();
    const double mass = w.sum();
    const double mean = w.dot(y) / mass;
    const Array dev = y.array() - mean;
    const double var = (w.array() * dev.square()).sum() / mass;
    const double k3 = (w.array() * dev.cube()).sum() / mass;
    return {(x - mean) / t, (1.0 - var / s) / t, -2.0 * eps * k3 / (s * s * s)};
}

PhiDerivatives phi_derivatives(const ColeHopfSolution& sol, double t, double x) {
    return phi_series(sol, t, x).d;
}

double phi_eval(const ColeHopfSolution& sol, double t, double x, int order) {
    const PhiDerivatives d = phi_derivatives(sol, t, x);
    switch (order) {
        case 0: return d.d0;
        case 1: return d.d1;
        case 2: return d.d2;
        case 3: return d.d3;
        default: throw std::invalid_argument("phi_eval: order must be in {0,1,2,3}");
    }
}

Fields fields_eval(const ColeHopfSolution& sol, double t, double x) {
    if (t == 0.0) return initial_fields(sol.case_id, sol.xi, x);
    const SeriesResult series = phi_series(sol, t, x);
    const PhiDerivatives& d = series.d;
    // Fourier sum has lost more than ~5 digits to cancellation.
    if (d.d0 < 1e-5 * series.magnitude) return heat_kernel_fields(sol, t, x);
    if (!(d.d0 > 0.0)) {
        std::ostringstream os;
        os << "Cole-Hopf potential not positive at t=" << t << " x=" << x << " (phi=" << d.d0 << ")";
        throw ContractViolation(os.str());
    }
    const double eps = sol.epsilon;
    const double r1 = d.d1 / d.d0, r2 = d.d2 / d.d0, r3 = d.d3 / d.d0;
    Fields f;
    f.u = -2.0 * eps * r1;
    f.ux = -2.0 * eps * (r2 - r1 * r1);
    f.uxx = -2.0 * eps * r3 + 1.5 / eps * f.u * f.ux - f.u * f.u * f.u / (4.0 * eps * eps);
    return f;
}

Fields shifted_eval(const ColeHopfSolution& sol_xi0, double t, double x, double xi) {
    if (sol_xi0.case_id != CaseId::I || sol_xi0.xi != 0.0)
        throw std::invalid_argument("shifted_eval: requires the Case I, xi = 0 solution");
    if (t == 0.0) return initial_fields(CaseId::I, xi, x);
    Fields f = fields_eval(sol_xi0, t, wrap_periodic(x - xi * t));
    f.u += xi;
    return f;
}

std::vector<FdSnapshot> fd_oracle(CaseId case_id, double epsilon, double xi, std::span<const double> times,
                                  FdOptions opts) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("fd_oracle: epsilon must be positive");
    if (opts.grid_points < 512) throw std::invalid_argument("fd_oracle: grid_points must be at least 512");
    if (!(opts.cfl_factor > 0.0 && opts.cfl_factor <= 0.4))
        throw std::invalid_argument("fd_oracle: cfl_factor must lie in (0, 0.4]");
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw std::invalid_argument("fd_oracle: output times must be non-negative and non-decreasing");

    const int m = opts.grid_points;
    const double dx = kTwoPi / m;
    Vector x(m), u(m);
    for (int j = 0; j < m; ++j) {
        x[j] = dx * j;
        u[j] = initial_fields(case_id, xi, x[j]).u;
    }
    const double max0 = u.cwiseAbs().maxCoeff();
    const double blowup = 10.0 * std::max(max0, 1e-300);

    Vector flux(m), next(m), slope(m);
    std::vector<FdSnapshot> out;
    out.reserve(times.size());
    double t = 0.0;
    for (const double t_out : times) {
        while (t < t_out) {
            const double umax = u.cwiseAbs().maxCoeff();
            double dt = dx * dx / (2.0 * epsilon);
            if (umax > 0.0) dt = std::min(dt, dx / umax);
            dt *= opts.cfl_factor;
            if (t + dt >= t_out) dt = t_out - t;

            // Limited linear reconstruction of interface states, then
            // F_{j+1/2} = (f(uL) + f(uR))/2 - alpha/2 (uR - uL) - eps (u_{j+1} - u_j)/dx
            for (int j = 0; j < m; ++j) {
                const double um = u[j == 0 ? m - 1 : j - 1];
                const double up = u[j + 1 == m ? 0 : j + 1];
                slope[j] = van_leer(u[j] - um, up - u[j]);
            }
            for (int j = 0; j < m; ++j) {
                const int jp = j + 1 == m ? 0 : j + 1;
                const double ul = u[j] + 0.5 * slope[j];
                const double ur = u[jp] - 0.5 * slope[jp];
                const double alpha = std::max(std::abs(ul), std::abs(ur));
                flux[j] = 0.25 * (ul * ul + ur * ur) - 0.5 * alpha * (ur - ul) - epsilon * (u[jp] - u[j]) / dx;
            }
            for (int j = 0; j < m; ++j) next[j] = u[j] - dt / dx * (flux[j] - flux[j == 0 ? m - 1 : j - 1]);
            u.swap(next);
            t = (t + dt >= t_out) ? t_out : t + dt;

            if (!u.allFinite() || u.cwiseAbs().maxCoeff() > blowup) {
                std::ostringstream os;
                os << "fd_oracle: instability detected at t=" << t;
                throw NumericalFailure(os.str());
            }
        }
        out.push_back({t_out, x, u});
    }
    return out;
}

FdSnapshot fd_oracle(CaseId case_id, double epsilon, double xi, double t_end, FdOptions opts) {
    const double times[] = {t_end};
    return std::move(fd_oracle(case_id, epsilon, xi, times, opts).front());
}

void write_grid_csv(const std::filesystem::path& path, const FdSnapshot& snap) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "x,u\n" << std::setprecision(17);
    for (Eigen::Index j = 0; j < snap.x.size(); ++j) os << snap.x[j] << ',' << snap.u[j] << '\n';
}

}  // namespace sclaw
