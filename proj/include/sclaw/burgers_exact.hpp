#ifndef SCLAW_BURGERS_EXACT_HPP
#define SCLAW_BURGERS_EXACT_HPP

// Exact sample solutions of the periodic viscous Burgers equation
//
//   u_t + u u_x = eps u_xx,  x in [0, 2*pi) periodic,
//
// via the Cole-Hopf potential u = -2 eps phi_x / phi, where phi solves the heat
// equation and is represented by its damped Fourier series
//
//   phi(t,x) = A_0 / (2 pi) + sum_k exp(-eps k^2 t) / pi * (A_k cos kx + B_k sin kx).
//
// A finite-difference solver of the same equation is provided as an independent
// validation oracle.

#include "sclaw/types.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace sclaw {

/// One realization u(t, x, xi) stored as truncated Fourier coefficients of phi.
/// Immutable after build_solution(); all evaluation routines are pure.
struct ColeHopfSolution {
    double epsilon = 0.1;
    Vector a_coeffs;  // A_0 .. A_kmax
    Vector b_coeffs;  // B_0 (always 0) .. B_kmax
    int k_max = 0;
    double xi = 0.0;
    CaseId case_id = CaseId::I;
};

struct BuildOptions {
    int k_max = 64;
    int quad_nodes = 0;  // 0 selects max(4 k_max, 512)
    int k_max_cap = 1024;
};

/// Computes the Fourier coefficients of phi_0 by the composite trapezoid rule.
/// Case I only accepts xi == 0; other shifts go through shifted_eval().
ColeHopfSolution build_solution(CaseId case_id, double epsilon, double xi, BuildOptions opts = {});

/// u0, u0', u0'' of the initial datum of the given family.
Fields initial_fields(CaseId case_id, double xi, double x);

/// d^order phi / dx^order at (t, x); order in {0, 1, 2, 3}.
double phi_eval(const ColeHopfSolution& sol, double t, double x, int order);

/// phi and its first three x-derivatives in one pass over the series.
struct PhiDerivatives {
    double d0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};
PhiDerivatives phi_derivatives(const ColeHopfSolution& sol, double t, double x);

/// u, u_x, u_xx of the realization. At t == 0 the initial datum is returned directly.
Fields fields_eval(const ColeHopfSolution& sol, double t, double x);

/// u, u_x, u_xx from the heat-kernel form of the same potential (t > 0). Used by
/// fields_eval() when the Fourier sum for phi is dominated by cancellation.
Fields heat_kernel_fields(const ColeHopfSolution& sol, double t, double x);

inline double u_eval(const ColeHopfSolution& sol, double t, double x) { return fields_eval(sol, t, x).u; }
inline double ux_eval(const ColeHopfSolution& sol, double t, double x) { return fields_eval(sol, t, x).ux; }
inline double uxx_eval(const ColeHopfSolution& sol, double t, double x) { return fields_eval(sol, t, x).uxx; }

/// Galilean shift u(t,x,xi) = u(t, x - xi t, 0) + xi for Case I.
Fields shifted_eval(const ColeHopfSolution& sol_xi0, double t, double x, double xi);

struct FdOptions {
    int grid_points = 2048;
    double cfl_factor = 0.4;
};

/// Gridded solution of the finite-difference oracle at one output time.
struct FdSnapshot {
    double t = 0.0;
    Vector x;
    Vector u;
};

/// Explicit conservative scheme: local Lax-Friedrichs convective flux, centered
/// diffusion, forward Euler in time. Returns one snapshot per requested time
/// (times must be non-decreasing and non-negative).
std::vector<FdSnapshot> fd_oracle(CaseId case_id, double epsilon, double xi, std::span<const double> times,
                                  FdOptions opts = {});

FdSnapshot fd_oracle(CaseId case_id, double epsilon, double xi, double t_end, FdOptions opts = {});

void write_grid_csv(const std::filesystem::path& path, const FdSnapshot& snap);

}  // namespace sclaw

#endif  // SCLAW_BURGERS_EXACT_HPP
