#include "sclaw/metrics.hpp"
#include "sclaw/transport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace sclaw;

namespace {

const ModelParams kCaseI = ModelParams::case_i(0.5);

std::shared_ptr<const SemiAnalytic> case_i_model() {
    static const auto model = std::make_shared<const SemiAnalytic>(kCaseI, 0.1);
    return model;
}

}  // namespace

TEST(TraceBack, ZeroDriftClosedForm) {
    for (double dt : {1e-3, 0.37})
        for (double v : {-2.0, 0.4, 1.9}) {
            const CharacteristicState s = trace_back(1.3, 2.0, v, DriftFunction{ZeroDrift{}}, dt);
            EXPECT_NEAR(s.X, wrap_periodic(2.0 - v * 1.3), 1e-15);
            EXPECT_EQ(s.V, v);
            EXPECT_EQ(s.tau, 0.0);
        }
}

TEST(TraceBack, ZeroTimeIsIdentity) {
    const CharacteristicState s = trace_back(0.0, 1.5, 0.3, DriftFunction{ExactDrift{case_i_model()}}, 1e-3);
    EXPECT_EQ(s.X, 1.5);
    EXPECT_EQ(s.V, 0.3);
}

TEST(TraceBack, PositionStaysWrapped) {
    const auto path = trace_back_path(2.0, 6.2, 2.5, DriftFunction{ExactDrift{case_i_model()}}, 1e-2);
    for (const auto& s : path) {
        EXPECT_GE(s.X, 0.0);
        EXPECT_LT(s.X, kTwoPi);
    }
}

TEST(TraceBack, FinalPartialStep) {
    const auto path = trace_back_path(0.0105, 1.0, 0.5, DriftFunction{ExactDrift{case_i_model()}}, 1e-3);
    ASSERT_EQ(path.size(), 12u);
    EXPECT_EQ(path.front().tau, 0.0105);
    EXPECT_EQ(path.back().tau, 0.0);
    EXPECT_NEAR(path[10].tau, 0.0005, 1e-15);
    const CharacteristicState end = trace_back(0.0105, 1.0, 0.5, DriftFunction{ExactDrift{case_i_model()}}, 1e-3);
    EXPECT_EQ(end.X, path.back().X);
    EXPECT_EQ(end.V, path.back().V);
}

TEST(TraceBack, NonFiniteDriftAborts) {
    const DriftFunction bad{PerturbedDrift{case_i_model(), std::numeric_limits<double>::quiet_NaN()}};
    EXPECT_THROW(trace_back(1.0, 1.0, 0.0, bad, 1e-3), NumericalFailure);
    EXPECT_THROW(trace_back(1.0, 1.0, 0.0, DriftFunction{ZeroDrift{}}, 0.0), std::invalid_argument);
    EXPECT_THROW(trace_back(-1.0, 1.0, 0.0, DriftFunction{ZeroDrift{}}, 1e-3), std::invalid_argument);
}

TEST(TraceBack, ExactDriftReproducesExactCdf) {
    const InitialCdf G = initial_cdf_function(kCaseI);
    const double F = approx_cdf(1.0, kPi, 0.5, DriftFunction{ExactDrift{case_i_model()}}, 1e-3, G);
    EXPECT_NEAR(F, case_i_model()->exact_cdf(1.0, kPi, 0.5), 5e-3);
}

TEST(TraceBack, EulerIsFirstOrder) {
    const InitialCdf G = initial_cdf_function(kCaseI);
    const DriftFunction drift{ExactDrift{case_i_model()}};
    const Vector grid = uniform_grid(-1.5, 1.5, 61);
    auto slice = [&](double dt) {
        Vector F(grid.size());
        for (Eigen::Index k = 0; k < grid.size(); ++k) F[k] = approx_cdf(1.0, kPi, grid[k], drift, dt, G);
        return F;
    };
    const Vector a = slice(4e-3), b = slice(2e-3), c = slice(1e-3);
    const double order = std::log2((a - b).norm() / (b - c).norm());
    EXPECT_GE(order, 0.8);
    EXPECT_LE(order, 1.2);
}

TEST(ApproxCdf, ZeroDriftClosedForm) {
    const InitialCdf G = initial_cdf_function(kCaseI);
    for (double t : {0.5, 2.0, 7.0})
        for (double x : {0.0, 1.0, kPi, 5.0})
            for (double v : {-2.5, -0.3, 0.0, 1.2}) {
                const double closed = normal_cdf((v - std::sin(x - v * t)) / 0.5);
                const double a = approx_cdf(t, x, v, DriftFunction{ZeroDrift{}}, 1e-3, G);
                EXPECT_NEAR(a, closed, 1e-12);
                EXPECT_NEAR(a, zero_sample_cdf(t, x, v, G), 1e-12);
            }
    EXPECT_EQ(approx_cdf(0.0, 1.0, 0.2, DriftFunction{ExactDrift{case_i_model()}}, 1e-3, G), G(1.0, 0.2));
}

TEST(ZeroSample, CaseIPdfClosedForm) {
    const InitialCdfGradient grad = initial_cdf_gradient_function(kCaseI);
    for (double t : {0.5, 2.0})
        for (double v : {-1.0, 0.0, 0.8}) {
            const double xs = kPi - v * t;
            const double expected = normal_pdf((v - std::sin(xs)) / 0.5) / 0.5 * (1.0 + t * std::cos(xs));
            EXPECT_NEAR(zero_sample_pdf(t, kPi, v, grad), expected, 1e-13);
        }
}

TEST(ZeroSample, PdfIsCdfDerivative) {
    const InitialCdf G = initial_cdf_function(kCaseI);
    const InitialCdfGradient grad = initial_cdf_gradient_function(kCaseI);
    const double h = 1e-6;
    for (double v : {-1.3, 0.1, 0.9}) {
        const double fd = (zero_sample_cdf(1.5, 2.0, v + h, G) - zero_sample_cdf(1.5, 2.0, v - h, G)) / (2 * h);
        EXPECT_NEAR(zero_sample_pdf(1.5, 2.0, v, grad), fd, 1e-6);
    }
}

TEST(ZeroSample, SignChangeAcrossUnitTime) {
    const InitialCdfGradient grad = initial_cdf_gradient_function(kCaseI);
    double min2 = 1e300, min099 = 1e300;
    for (int k = 0; k <= 600; ++k) {
        const double v = -3.0 + 0.01 * k;
        min2 = std::min(min2, zero_sample_pdf(2.0, kPi, v, grad));
        min099 = std::min(min099, zero_sample_pdf(0.99, kPi, v, grad));
    }
    EXPECT_LT(min2, 0.0);
    EXPECT_GE(min099, 0.0);
}

TEST(ZeroSample, CaseIIStaysNonNegative) {
    const InitialCdfGradient grad = initial_cdf_gradient_function(ModelParams::case_ii(2.8, 0.18));
    const double x = 0.95 * kPi;
    for (int k = 0; k < 500; ++k) {
        const double v = (x / 1.0) * k / 500.0;
        EXPECT_GE(zero_sample_pdf(1.0, x, v, grad), 0.0) << v;
    }
}

TEST(PositivityScan, ExactAndZeroSample) {
    const Vector grid = uniform_grid(-3.0, 3.0, 601);
    const InitialCdf G = initial_cdf_function(kCaseI);
    for (double t : {0.5, 2.0, 10.0}) {
        const auto exact = positivity_scan([&](double v) { return case_i_model()->exact_cdf(t, kPi, v); }, grid);
        EXPECT_GE(exact.min_slope, -1e-12);
    }
    const auto zero = positivity_scan([&](double v) { return zero_sample_cdf(2.0, kPi, v, G); }, grid);
    EXPECT_LT(zero.min_slope, 0.0);
    EXPECT_FALSE(zero.monotone());
}

TEST(PositivityScan, DecreasingInXKeepsMonotone) {
    // dG/dx <= 0 with the Burgers flux; kept inside one period so the wrap never triggers.
    const InitialCdf G = [](double x, double v) { return normal_cdf(v - x); };
    const Vector grid = uniform_grid(-3.0, 3.0, 301);
    for (double t : {0.25, 0.5, 1.0})
        EXPECT_TRUE(positivity_scan([&](double v) { return zero_sample_cdf(t, kPi, v, G); }, grid).monotone());
}

TEST(PositivityScan, RejectsBadGrids) {
    EXPECT_THROW(positivity_scan([](double v) { return v; }, uniform_grid(0.0, 1.0, 8)), std::invalid_argument);
    Vector g = uniform_grid(0.0, 1.0, 20);
    g[5] = g[4];
    EXPECT_THROW(positivity_scan([](double v) { return v; }, g), std::invalid_argument);
}

TEST(Certificate, WitnessAndOnsetTime) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 64; ++i)
        for (int k = 0; k <= 60; ++k) pts.emplace_back(kTwoPi * i / 64.0, -3.0 + 0.1 * k);
    const InitialCdfGradient grad = initial_cdf_gradient_function(kCaseI);
    const CertificateResult r = theorem31_certificate(grad, [](double) { return 1.0; }, pts);
    ASSERT_FALSE(r.passed);
    EXPECT_LT(std::cos(r.x0), 0.0);
    EXPECT_NEAR(r.t_star, 1.0, 1e-12);

    const InitialCdf G = initial_cdf_function(kCaseI);
    const double t = 1.1 * r.t_star, x = wrap_periodic(r.x0 + r.v0 * t);
    const auto scan = positivity_scan([&](double v) { return zero_sample_cdf(t, x, v, G); }, uniform_grid(-3, 3, 601));
    EXPECT_LT(scan.min_slope, 0.0);

    EXPECT_TRUE(theorem31_certificate(grad, [](double) { return 0.0; }, pts).passed);
    const InitialCdfGradient flat = [](double, double v) { return CdfGradient{0.0, normal_pdf(v)}; };
    EXPECT_TRUE(theorem31_certificate(flat, [](double) { return 1.0; }, pts).passed);
}

TEST(Characteristics, StartPointsFollowIncreasingG) {
    const InitialCdf G = initial_cdf_function(kCaseI);
    const DriftFunction drift{ExactDrift{case_i_model()}};
    const Vector grid = uniform_grid(-3.0, 3.0, 200);
    double prev = -1.0;
    for (double v : grid) {
        const CharacteristicState s = trace_back(1.0, kPi, v, drift, 1e-3);
        const double g = G(s.X, s.V);
        EXPECT_GE(g, prev);
        prev = g;
    }
}

TEST(DriftFunction, LabelsAndDefaults) {
    EXPECT_EQ(DriftFunction{ZeroDrift{}}.label(), "zero-sample");
    EXPECT_TRUE(DriftFunction{ZeroDrift{}}.is_zero());
    EXPECT_EQ(DriftFunction{ExactDrift{case_i_model()}}.label(), "exact-drift");
    EXPECT_EQ((DriftFunction{PerturbedDrift{case_i_model(), 1e-3}}.label()), "perturbed");
    const DriftFunction p{PerturbedDrift{case_i_model(), 1e-3}}, e{ExactDrift{case_i_model()}};
    EXPECT_NEAR(p(1.0, 2.0, 0.3) - e(1.0, 2.0, 0.3), 1e-3, 1e-15);
    EXPECT_EQ(default_dt(1.0), 1e-3);
    EXPECT_EQ(default_dt(2.0), 1e-3);
    EXPECT_EQ(default_dt(10.0), 1e-2);
}

TEST(DriftFunction, CaseIIExactUsesOddSymmetry) {
    const auto model = std::make_shared<const SemiAnalytic>(ModelParams::case_ii(2.8, 0.18), 0.1);
    const DriftFunction d{ExactDrift{model}};
    EXPECT_NEAR(d(1.0, 2.0, 0.4), model->exact_m(1.0, 2.0, 0.4), 1e-15);
    EXPECT_NEAR(d(1.0, kTwoPi - 2.0, -0.4), -model->exact_m(1.0, 2.0, 0.4), 1e-15);
}

TEST(DifferentiateOnGrid, ExactForQuadraticsInside) {
    const Vector g = uniform_grid(0.0, 1.0, 11);
    const Vector f = g.array().square();
    const Vector d = differentiate_on_grid(f, g);
    for (Eigen::Index k = 1; k + 1 < g.size(); ++k) EXPECT_NEAR(d[k], 2.0 * g[k], 1e-12);
}
