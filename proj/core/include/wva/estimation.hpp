#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wva/density.hpp"
#include "wva/detector.hpp"

namespace wva {

/// Deterministic random stream: std::mt19937_64 with an explicit 53-bit
/// mantissa mapping for uniforms, so draws are bit-identical across
/// platforms and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Independent substream seed for repeat `index` (SplitMix64 mix).
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

    static const char* algorithm() { return "mt19937_64"; }

  private:
    std::mt19937_64 engine_;
};

struct SampleSet {
    bool discrete = false;
    std::vector<double> draws;
    std::vector<std::int64_t> labels;
    double g_true = 0.0;
    std::uint64_t seed = 0;
    std::string model;

    std::size_t size() const { return discrete ? labels.size() : draws.size(); }
};

/// Inverse-CDF sampling from a continuous model (cumulative tabulated on a
/// 2^14 grid over the model's domain, monotone interpolation). Throws when
/// the tabulated CDF fails to be monotone.
SampleSet sample(const ParametricDensity& model, double g, std::size_t n,
                 std::uint64_t seed);

/// Categorical sampling from a pixel mass.
SampleSet sample(const PixelMass& model, double g, std::size_t n, std::uint64_t seed);

struct SearchBracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct MleResult {
    double g_hat = 0.0;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Maximum-likelihood estimate of g over the bracket: golden-section search
/// with parabolic refinement, tolerance 1e-10 in g. Throws when the
/// likelihood is -infinity everywhere in the bracket; a flat likelihood
/// returns converged = false.
MleResult mle(const SampleSet& samples, const ParametricDensity& family,
              SearchBracket bracket);

/// Discrete-model variant; the family maps g to a pixel mass.
MleResult mle(const SampleSet& samples,
              const std::function<PixelMass(double)>& family, SearchBracket bracket);

struct AttainmentOptions {
    /// Fisher information at g_true; computed by fisher_continuous if unset.
    std::optional<double> fisher_value;
    /// Postselection probability: when set, the bound is quoted at the
    /// source rate 1/(q N F) alongside the per-recorded-trial bound.
    std::optional<double> source_rate_q;
};

struct AttainmentReport {
    double empirical_variance = 0.0;
    double bound = 0.0;           // 1/(N F)
    double ratio = 0.0;           // empirical_variance / bound
    double mean_estimate = 0.0;
    std::optional<double> source_rate_bound;
    std::size_t trials = 0;
    std::size_t repeats = 0;
    std::vector<double> estimates;
};

/// Runs `repeats` independent MLE experiments of `trials` draws each and
/// compares the empirical estimator variance against the Cramer-Rao bound.
/// Repeat r uses the derived seed Rng::substream(seed, r).
AttainmentReport cr_attainment(const ParametricDensity& model, double g_true,
                               std::size_t trials, std::size_t repeats,
                               std::uint64_t seed, const AttainmentOptions& opts = {});

}  // namespace wva
