#include "sclaw/random_models.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace sclaw {

namespace {

constexpr double kDegenerateSin = 1e-14;

bool case_ii_in_domain(double x) { return x >= 0.0 && x <= kPi + 1e-12; }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index) : key_(derive_seed(seed, index)) {}

std::uint64_t SampleStream::next_u64() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double SampleStream::uniform() {
    // 53 random bits, shifted off zero
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SampleStream::normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    return r * std::cos(kTwoPi * uniform());
}

double SampleStream::gamma(double shape) {
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        const double z = normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
        if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

InitialEnsemble draw_samples(const ModelParams& params, std::size_t n, std::uint64_t seed) {
    params.validate();
    InitialEnsemble ens{params, seed, Vector(static_cast<Eigen::Index>(n))};
    for (std::size_t i = 0; i < n; ++i) {
        SampleStream stream(seed, i);
        ens.samples[static_cast<Eigen::Index>(i)] = params.case_id == CaseId::I
                                                        ? params.sigma * stream.normal()
                                                        : params.scale * stream.gamma(params.shape);
    }
    return ens;
}

void write_ensemble_csv(const std::filesystem::path& path, const InitialEnsemble& ensemble) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "index,xi\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < ensemble.samples.size(); ++i) os << i << ',' << ensemble.samples[i] << '\n';
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double xi_pdf(const ModelParams& params, double xi) {
    if (params.case_id == CaseId::I) return normal_pdf(xi / params.sigma) / params.sigma;
    if (!(xi > 0.0) || std::isinf(xi)) return 0.0;
    return boost::math::gamma_p_derivative(params.shape, xi / params.scale) / params.scale;
}

double xi_cdf(const ModelParams& params, double xi) {
    if (params.case_id == CaseId::I) return normal_cdf(xi / params.sigma);
    if (!(xi > 0.0)) return 0.0;
    if (std::isinf(xi)) return 1.0;
    return boost::math::gamma_p(params.shape, xi / params.scale);
}

double xi_upper_quantile(const ModelParams& params, double tail) {
    if (!(tail > 0.0 && tail < 1.0)) throw std::invalid_argument("xi_upper_quantile: tail must lie in (0, 1)");
    if (params.case_id == CaseId::I)
        return params.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * tail);
    return params.scale * boost::math::gamma_q_inv(params.shape, tail);
}

double xi_mean(const ModelParams& params) {
    return params.case_id == CaseId::I ? 0.0 : params.shape * params.scale;
}

double initial_cdf_G(const ModelParams& params, double x, double v) {
    if (params.case_id == CaseId::I) return normal_cdf((v - std::sin(x)) / params.sigma);
    if (!case_ii_in_domain(x)) throw std::invalid_argument("initial_cdf_G: Case II requires x in [0, pi]");
    return periodic_initial_cdf_G(params, x, v);
}

CdfGradient initial_cdf_gradient(const ModelParams& params, double x, double v) {
    if (params.case_id == CaseId::II) {
        if (!case_ii_in_domain(x) || std::abs(std::sin(x)) < kDegenerateSin)
            throw std::invalid_argument("initial_cdf_gradient: Case II requires x in (0, pi)");
    }
    return periodic_initial_cdf_gradient(params, x, v);
}

double periodic_initial_cdf_G(const ModelParams& params, double x, double v) {
    const double s = std::sin(x);
    if (params.case_id == CaseId::I) return normal_cdf((v - s) / params.sigma);
    if (std::abs(s) < kDegenerateSin) return v >= 0.0 ? 1.0 : 0.0;
    const double w = v / s;
    return s > 0.0 ? xi_cdf(params, w) : 1.0 - xi_cdf(params, w);
}

CdfGradient periodic_initial_cdf_gradient(const ModelParams& params, double x, double v) {
    const double s = std::sin(x), c = std::cos(x);
    if (params.case_id == CaseId::I) {
        const double dens = normal_pdf((v - s) / params.sigma) / params.sigma;
        return {-c * dens, dens};
    }
    if (std::abs(s) < kDegenerateSin) return {0.0, 0.0};
    const double w = v / s;
    const double p = xi_pdf(params, w);
    // d/dv (v/s) = 1/s, d/dx (v/s) = -v c / s^2; the s < 0 branch flips the sign
    const double sign = s > 0.0 ? 1.0 : -1.0;
    return {sign * p * (-v * c / (s * s)), sign * p / s};
}

}  // namespace sclaw
