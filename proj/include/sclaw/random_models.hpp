#ifndef SCLAW_RANDOM_MODELS_HPP
#define SCLAW_RANDOM_MODELS_HPP

#include "sclaw/types.hpp"

#include <cstdint>
#include <filesystem>

namespace sclaw {

/// SplitMix64 finalizer; used as the mixing function of the counter-based streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the i-th independent child stream of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Counter-based random stream: every draw is a pure function of
/// (seed, index, counter), so sample i does not depend on evaluation order.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    double uniform();  // in (0, 1)
    double normal();   // Box-Muller
    double gamma(double shape);  // unit scale, Marsaglia-Tsang squeeze rejection

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Samples xi_1..xi_N of one ensemble.
struct InitialEnsemble {
    ModelParams params;
    std::uint64_t seed = 0;
    Vector samples;

    std::size_t size() const { return static_cast<std::size_t>(samples.size()); }
};

InitialEnsemble draw_samples(const ModelParams& params, std::size_t n, std::uint64_t seed);

void write_ensemble_csv(const std::filesystem::path& path, const InitialEnsemble& ensemble);

double normal_pdf(double z);
double normal_cdf(double z);

double xi_pdf(const ModelParams& params, double xi);
double xi_cdf(const ModelParams& params, double xi);
/// Smallest xi with P(xi' > xi) <= tail (upper-tail quantile, accurate for tiny tails).
double xi_upper_quantile(const ModelParams& params, double tail);
double xi_mean(const ModelParams& params);

/// G(x, v) = P(u0(x, xi) <= v). Case II accepts x in [0, pi] only; at sin x = 0
/// the datum vanishes and G is the unit step at v = 0.
double initial_cdf_G(const ModelParams& params, double x, double v);

struct CdfGradient {
    double dx = 0.0;
    double dv = 0.0;
};

/// Analytic (dG/dx, dG/dv). Case II requires x in (0, pi).
CdfGradient initial_cdf_gradient(const ModelParams& params, double x, double v);

/// G over the whole periodic domain. For Case II on (pi, 2 pi), where sin x < 0,
/// G = 1 - Phi(v / sin x). Used when characteristics leave (0, pi).
double periodic_initial_cdf_G(const ModelParams& params, double x, double v);
CdfGradient periodic_initial_cdf_gradient(const ModelParams& params, double x, double v);

}  // namespace sclaw

#endif  // SCLAW_RANDOM_MODELS_HPP
