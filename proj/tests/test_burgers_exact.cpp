#include "sclaw/burgers_exact.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace sclaw;

namespace {

// I_k(a) from its power series.
double bessel_i_series(int k, double a) {
    double term = std::pow(a / 2.0, k) / std::tgamma(k + 1.0);
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= (a / 2.0) * (a / 2.0) / (m * static_cast<double>(m + k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace

TEST(BuildSolution, CaseICoefficientsMatchModifiedBessel) {
    // phi_0 = exp(-(1 - cos x) / (2 eps)) = e^{-a} (I_0(a) + 2 sum I_k(a) cos kx), a = 1/(2 eps)
    const double eps = 0.1, a = 1.0 / (2.0 * eps);
    const ColeHopfSolution sol = build_solution(CaseId::I, eps, 0.0);
    ASSERT_GT(sol.a_coeffs[0], 0.0);
    for (int k = 0; k <= 12; ++k) {
        const double expected = 2.0 * kPi * std::exp(-a) * bessel_i_series(k, a);
        EXPECT_NEAR(sol.a_coeffs[k], expected, 1e-10 * expected) << "k=" << k;
        EXPECT_NEAR(sol.b_coeffs[k], 0.0, 1e-12) << "k=" << k;
    }
}

TEST(BuildSolution, CaseIIWithZeroAmplitudeIsConstantPotential) {
    const ColeHopfSolution sol = build_solution(CaseId::II, 0.1, 0.0);
    EXPECT_NEAR(sol.a_coeffs[0], 2.0 * kPi, 1e-12);
    for (int k = 1; k <= sol.k_max; ++k) {
        EXPECT_NEAR(sol.a_coeffs[k], 0.0, 1e-12);
        EXPECT_NEAR(sol.b_coeffs[k], 0.0, 1e-12);
    }
    for (double t : {0.0, 0.5, 3.0})
        for (double x : {0.3, 2.0, 5.0}) {
            EXPECT_NEAR(u_eval(sol, t, x), 0.0, 1e-14);
            EXPECT_NEAR(phi_eval(sol, t, x, 1), 0.0, 1e-12);
        }
}

TEST(BuildSolution, SeriesReproducesInitialDatum) {
    const double eps = 0.1;
    const ColeHopfSolution sol = build_solution(CaseId::I, eps, 0.0);
    double worst = 0.0;
    for (int j = 0; j < 256; ++j) {
        const double x = kTwoPi * j / 256.0;
        const double u = -2.0 * eps * phi_eval(sol, 0.0, x, 1) / phi_eval(sol, 0.0, x, 0);
        worst = std::max(worst, std::abs(u - std::sin(x)));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(BuildSolution, RejectsInvalidArguments) {
    EXPECT_THROW(build_solution(CaseId::I, 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(build_solution(CaseId::I, -0.1, 0.0), std::invalid_argument);
    EXPECT_THROW(build_solution(CaseId::I, 0.1, 0.3), std::invalid_argument);
    EXPECT_THROW(build_solution(CaseId::II, 0.1, -0.2), std::invalid_argument);
    EXPECT_THROW(build_solution(CaseId::I, 0.1, 0.0, BuildOptions{4, 0, 1024}), std::invalid_argument);
}

TEST(PhiEval, PositiveAndSeriesConsistent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.0, kTwoPi), ut(0.05, 3.0);
    for (const auto& sol : {build_solution(CaseId::I, 0.1, 0.0), build_solution(CaseId::II, 0.1, 0.8)}) {
        for (int i = 0; i < 100; ++i) {
            const double t = ut(rng), x = ux(rng), h = 1e-5;
            const double phi = phi_eval(sol, t, x, 0);
            ASSERT_GT(phi, 0.0);
            for (int d = 1; d <= 3; ++d) {
                const double fd = (phi_eval(sol, t, x + h, d - 1) - phi_eval(sol, t, x - h, d - 1)) / (2 * h);
                const double exact = phi_eval(sol, t, x, d);
                EXPECT_NEAR(fd, exact, 1e-5 * std::max(std::abs(exact), phi)) << "order " << d;
            }
        }
    }
}

TEST(PhiEval, FirstDerivativeAtQuarterPeriod) {
    const ColeHopfSolution sol = build_solution(CaseId::I, 0.1, 0.0);
    const double h = 1e-5, x = kPi / 2;
    const double fd = (phi_eval(sol, 1.0, x + h, 0) - phi_eval(sol, 1.0, x - h, 0)) / (2 * h);
    const double exact = phi_eval(sol, 1.0, x, 1);
    EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact));
}

TEST(Fields, SecondDerivativeFromPotentialDerivatives) {
    const double eps = 0.1;
    const ColeHopfSolution sol = build_solution(CaseId::I, eps, 0.0);
    for (double t : {0.3, 1.0, 2.0})
        for (double x : {0.4, 1.7, 3.0, 4.4}) {
            const Fields f = fields_eval(sol, t, x);
            const double p0 = phi_eval(sol, t, x, 0), p3 = phi_eval(sol, t, x, 3);
            const double parts = -2.0 * eps * p3 / p0 + 3.0 / (2.0 * eps) * f.u * f.ux - f.u * f.u * f.u / (4 * eps * eps);
            EXPECT_NEAR(f.uxx, parts, 1e-10 * std::max(1.0, std::abs(f.uxx)));
        }
}

TEST(Fields, DerivativesMatchFiniteDifferences) {
    const ColeHopfSolution sol = build_solution(CaseId::II, 0.1, 0.5);
    const double h = 1e-5;
    for (double t : {0.5, 2.0})
        for (double x : {0.5, 1.5, 2.5, 4.0}) {
            const Fields f = fields_eval(sol, t, x);
            EXPECT_NEAR((u_eval(sol, t, x + h) - u_eval(sol, t, x - h)) / (2 * h), f.ux, 1e-6 * std::max(1.0, std::abs(f.ux)));
            EXPECT_NEAR((ux_eval(sol, t, x + h) - ux_eval(sol, t, x - h)) / (2 * h), f.uxx,
                        1e-5 * std::max(1.0, std::abs(f.uxx)));
        }
}

TEST(Fields, InitialTimeReturnsDatum) {
    const ColeHopfSolution sol = build_solution(CaseId::II, 0.1, 0.7);
    for (double x : {0.3, 1.2, 2.9}) {
        const Fields f = fields_eval(sol, 0.0, x);
        EXPECT_DOUBLE_EQ(f.u, 0.7 * std::sin(x));
        EXPECT_DOUBLE_EQ(f.ux, 0.7 * std::cos(x));
        EXPECT_DOUBLE_EQ(f.uxx, -0.7 * std::sin(x));
    }
}

TEST(Fields, HeatKernelFormAgreesWithSeries) {
    for (const auto& sol : {build_solution(CaseId::I, 0.1, 0.0), build_solution(CaseId::II, 0.1, 1.5)}) {
        for (double t : {0.2, 1.0, 4.0})
            for (double x : {0.7, 2.0, 3.5, 5.5}) {
                const Fields a = fields_eval(sol, t, x), b = heat_kernel_fields(sol, t, x);
                EXPECT_NEAR(a.u, b.u, 1e-8);
                EXPECT_NEAR(a.ux, b.ux, 1e-7 * std::max(1.0, std::abs(a.ux)));
                EXPECT_NEAR(a.uxx, b.uxx, 1e-6 * std::max(1.0, std::abs(a.uxx)));
            }
    }
}

TEST(Fields, OddSymmetryPinsZeros) {
    const ColeHopfSolution s1 = build_solution(CaseId::I, 0.1, 0.0);
    for (double t : {0.5, 1.0, 5.0, 20.0}) {
        EXPECT_NEAR(u_eval(s1, t, 0.0), 0.0, 1e-12);
        EXPECT_NEAR(u_eval(s1, t, kPi), 0.0, 1e-12);
    }
    for (double xi : {0.2, 0.9, 2.5}) {
        const ColeHopfSolution s2 = build_solution(CaseId::II, 0.1, xi);
        for (double t : {0.5, 2.0, 10.0}) {
            EXPECT_NEAR(u_eval(s2, t, 0.0), 0.0, 1e-12);
            EXPECT_NEAR(u_eval(s2, t, kPi), 0.0, 1e-12);
        }
    }
}

TEST(Fields, GradientDecayBound) {
    const ColeHopfSolution sol = build_solution(CaseId::I, 0.1, 0.0);
    for (double t : {1.0, 2.0, 5.0}) {
        double max_ux = -1e300;
        for (int j = 0; j < 2048; ++j) max_ux = std::max(max_ux, ux_eval(sol, t, kTwoPi * j / 2048.0));
        EXPECT_LT(max_ux, 1.0 / t + 0.05) << "t=" << t;
    }
}

TEST(ShiftedEval, ZeroShiftIsIdentity) {
    const ColeHopfSolution sol = build_solution(CaseId::I, 0.1, 0.0);
    for (double t : {0.0, 0.7, 2.0})
        for (double x : {0.1, 2.2, 4.9}) {
            const Fields a = shifted_eval(sol, t, x, 0.0), b = fields_eval(sol, t, x);
            EXPECT_DOUBLE_EQ(a.u, b.u);
            EXPECT_DOUBLE_EQ(a.ux, b.ux);
            EXPECT_DOUBLE_EQ(a.uxx, b.uxx);
        }
}

TEST(ShiftedEval, InitialTimeAndShiftDefinition) {
    const ColeHopfSolution sol = build_solution(CaseId::I, 0.1, 0.0);
    for (double xi : {-0.8, 0.3, 1.4})
        for (double x : {0.5, 3.0})
            EXPECT_NEAR(shifted_eval(sol, 0.0, x, xi).u, std::sin(x) + xi, 1e-15);
    EXPECT_NEAR(shifted_eval(sol, 1.0, kPi, 0.5).u, u_eval(sol, 1.0, kPi - 0.5) + 0.5, 1e-15);
    EXPECT_THROW(shifted_eval(build_solution(CaseId::II, 0.1, 0.5), 1.0, 1.0, 0.1), std::invalid_argument);
}

TEST(FdOracle, ZeroDatumStaysZero) {
    const FdSnapshot snap = fd_oracle(CaseId::II, 0.1, 0.0, 1.0, FdOptions{512, 0.4});
    EXPECT_EQ(snap.u.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FdOracle, AgreesWithSeriesAndConservesMean) {
    const std::vector<double> times = {0.5, 1.0};
    const auto snaps = fd_oracle(CaseId::I, 0.1, 0.0, std::span<const double>(times));
    const ColeHopfSolution sol = build_solution(CaseId::I, 0.1, 0.0);
    ASSERT_EQ(snaps.size(), 2u);
    for (const auto& snap : snaps) {
        ASSERT_EQ(snap.x.size(), 2048);
        double worst = 0.0;
        for (Eigen::Index j = 0; j < snap.x.size(); ++j)
            worst = std::max(worst, std::abs(u_eval(sol, snap.t, snap.x[j]) - snap.u[j]));
        EXPECT_LT(worst, 1e-3) << "t=" << snap.t;
        EXPECT_LT(std::abs(snap.u.mean()), 1e-8 * snap.t);
    }
    const auto quarter = std::lower_bound(snaps[1].x.data(), snaps[1].x.data() + snaps[1].x.size(), kPi / 2);
    const Eigen::Index j = quarter - snaps[1].x.data();
    EXPECT_NEAR(snaps[1].u[j], u_eval(sol, 1.0, snaps[1].x[j]), 1e-3);
}

TEST(FdOracle, RejectsUnstableSettings) {
    EXPECT_THROW(fd_oracle(CaseId::I, 0.1, 0.0, 1.0, FdOptions{256, 0.4}), std::invalid_argument);
    EXPECT_THROW(fd_oracle(CaseId::I, 0.1, 0.0, 1.0, FdOptions{2048, 0.9}), std::invalid_argument);
}
