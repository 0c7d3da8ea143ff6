#include "sclaw/random_models.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace sclaw;

namespace {

// Standard normal CDF through the Maclaurin series of erf.
double normal_cdf_series(double z) {
    const double x = std::abs(z) / std::sqrt(2.0);
    double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
    }
    const double erf = 2.0 / std::sqrt(kPi) * sum;
    return z >= 0 ? 0.5 * (1.0 + erf) : 0.5 * (1.0 - erf);
}

// Regularized lower incomplete gamma P(a, x) by its power series.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by its continued fraction (modified Lentz).
double gamma_q_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double ks_statistic(Vector samples, const std::function<double(double)>& cdf) {
    std::sort(samples.data(), samples.data() + samples.size());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

const ModelParams kCaseI = ModelParams::case_i(0.5);
const ModelParams kCaseII = ModelParams::case_ii(2.8, 0.18);

}  // namespace

TEST(DrawSamples, EmptyAndReproducible) {
    EXPECT_EQ(draw_samples(kCaseI, 0, 1).size(), 0u);
    const InitialEnsemble a = draw_samples(kCaseII, 1000, 99), b = draw_samples(kCaseII, 1000, 99);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(draw_samples(kCaseII, 1000, 100).samples, a.samples);
    // sample i depends only on (seed, i)
    const InitialEnsemble prefix = draw_samples(kCaseI, 10, 5), longer = draw_samples(kCaseI, 100, 5);
    EXPECT_EQ(prefix.samples, longer.samples.head(10));
}

TEST(DrawSamples, GaussianMoments) {
    const Vector s = draw_samples(kCaseI, 100000, 2024).samples;
    const double mean = s.mean();
    const double sd = std::sqrt((s.array() - mean).square().sum() / (s.size() - 1));
    EXPECT_GT(mean, -0.01);
    EXPECT_LT(mean, 0.01);
    EXPECT_GT(sd, 0.49);
    EXPECT_LT(sd, 0.51);
}

TEST(DrawSamples, GammaMeanAndSupport) {
    const Vector s = draw_samples(kCaseII, 100000, 2024).samples;
    EXPECT_GT(s.minCoeff(), 0.0);
    EXPECT_GT(s.mean(), 0.494);
    EXPECT_LT(s.mean(), 0.514);
}

TEST(DrawSamples, KolmogorovSmirnov) {
    const std::size_t n = 10000;
    for (const auto& p : {kCaseI, kCaseII}) {
        const double d = ks_statistic(draw_samples(p, n, 31337).samples, [&](double xi) { return xi_cdf(p, xi); });
        EXPECT_LT(d, 1.63 / std::sqrt(static_cast<double>(n))) << to_string(p.case_id);
    }
}

TEST(DrawSamples, RejectsInvalidParameters) {
    EXPECT_THROW(draw_samples(ModelParams::case_i(0.0), 10, 1), std::invalid_argument);
    EXPECT_THROW(draw_samples(ModelParams::case_ii(-1.0, 0.2), 10, 1), std::invalid_argument);
    EXPECT_THROW(draw_samples(ModelParams::case_ii(2.0, 0.0), 10, 1), std::invalid_argument);
}

TEST(XiDistribution, CdfValues) {
    EXPECT_DOUBLE_EQ(xi_cdf(kCaseI, 0.0), 0.5);
    EXPECT_NEAR(xi_cdf(kCaseI, -1.0), normal_cdf_series(-2.0), 1e-14);
    EXPECT_NEAR(xi_cdf(kCaseI, -1.0), 0.0227501, 1e-7);
    EXPECT_EQ(xi_cdf(kCaseII, 0.0), 0.0);
    EXPECT_EQ(xi_cdf(kCaseII, -1.0), 0.0);
    EXPECT_NEAR(xi_cdf(kCaseII, 1e6), 1.0, 1e-15);
    for (double xi : {0.05, 0.2, 0.504, 1.0, 2.0})
        EXPECT_NEAR(xi_cdf(kCaseII, xi), gamma_p_series(2.8, xi / 0.18), 1e-13) << xi;
}

TEST(XiDistribution, DensityNormalized) {
    EXPECT_NEAR(simpson([](double x) { return xi_pdf(kCaseI, x); }, -5.0, 5.0, 4000), 1.0, 1e-6);
    EXPECT_NEAR(simpson([](double x) { return xi_pdf(kCaseII, x); }, 0.0, 10.0, 20000), 1.0, 1e-6);
    EXPECT_NEAR(xi_mean(kCaseII), 0.504, 1e-15);
}

TEST(XiDistribution, UpperQuantile) {
    for (double tail : {1e-3, 1e-8, 1e-14}) {
        const double q = xi_upper_quantile(kCaseII, tail);
        EXPECT_NEAR(gamma_q_fraction(2.8, q / 0.18), tail, 1e-6 * tail);
    }
}

TEST(InitialCdf, Examples) {
    EXPECT_DOUBLE_EQ(initial_cdf_G(kCaseI, 0.0, 0.0), 0.5);
    EXPECT_NEAR(initial_cdf_G(kCaseI, kPi / 2, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(initial_cdf_G(kCaseII, kPi / 2, 0.504), gamma_p_series(2.8, 0.504 / 0.18), 1e-13);
    // step CDF where sin x = 0
    EXPECT_EQ(initial_cdf_G(kCaseII, 0.0, -1e-9), 0.0);
    EXPECT_EQ(initial_cdf_G(kCaseII, kPi, 0.0), 1.0);
    EXPECT_THROW(initial_cdf_G(kCaseII, 4.0, 0.1), std::invalid_argument);
}

TEST(InitialCdf, MonotoneAndBounded) {
    for (const auto& p : {kCaseI, kCaseII})
        for (double x : {0.2, 1.0, 2.0, 3.0}) {
            double prev = -1.0;
            for (int k = 0; k <= 600; ++k) {
                const double g = initial_cdf_G(p, x, -3.0 + 0.01 * k);
                EXPECT_GE(g, prev);
                EXPECT_GE(g, 0.0);
                EXPECT_LE(g, 1.0);
                prev = g;
            }
        }
}

TEST(InitialCdf, GradientSignsCaseI) {
    for (double v : {-2.0, 0.0, 1.5}) {
        EXPECT_LT(initial_cdf_gradient(kCaseI, 0.0, v).dx, 0.0);
        EXPECT_NEAR(initial_cdf_gradient(kCaseI, kPi / 2, v).dx, 0.0, 1e-15);
        EXPECT_GE(initial_cdf_gradient(kCaseI, 2.0, v).dv, 0.0);
    }
}

TEST(InitialCdf, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux1(0.0, kTwoPi), ux2(0.1, kPi - 0.1), uv1(-2.0, 2.0), uv2(0.05, 1.2);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        for (int c = 0; c < 2; ++c) {
            const ModelParams& p = c == 0 ? kCaseI : kCaseII;
            const double x = c == 0 ? ux1(rng) : ux2(rng), v = c == 0 ? uv1(rng) : uv2(rng);
            const CdfGradient g = initial_cdf_gradient(p, x, v);
            const double gx = (initial_cdf_G(p, x + h, v) - initial_cdf_G(p, x - h, v)) / (2 * h);
            const double gv = (initial_cdf_G(p, x, v + h) - initial_cdf_G(p, x, v - h)) / (2 * h);
            EXPECT_NEAR(g.dx, gx, 1e-5 * std::max(std::abs(g.dx), 1e-3));
            EXPECT_NEAR(g.dv, gv, 1e-5 * std::max(std::abs(g.dv), 1e-3));
        }
    }
}

TEST(InitialCdf, PeriodicExtension) {
    for (double x : {0.5, 2.0})
        for (double v : {0.1, 0.6})
            EXPECT_DOUBLE_EQ(periodic_initial_cdf_G(kCaseII, x, v), initial_cdf_G(kCaseII, x, v));
    // sin x < 0: P(xi sin x <= v) = 1 - P(xi < v / sin x)
    for (double x : {3.5, 5.0})
        for (double v : {-0.6, -0.1, 0.2}) {
            const double expected = v >= 0.0 ? 1.0 : 1.0 - xi_cdf(kCaseII, v / std::sin(x));
            EXPECT_NEAR(periodic_initial_cdf_G(kCaseII, x, v), expected, 1e-15);
        }
    for (double x : {0.5, 4.0})
        EXPECT_DOUBLE_EQ(periodic_initial_cdf_G(kCaseI, x, 0.3), initial_cdf_G(kCaseI, x, 0.3));
}

TEST(SampleStream, DerivedSeedsDiffer) {
    EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
    EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
    SampleStream s(5, 0);
    for (int i = 0; i < 1000; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}
