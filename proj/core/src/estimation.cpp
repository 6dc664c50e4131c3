#include "wva/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "wva/fisher.hpp"
#include "wva/numerics.hpp"

namespace wva {

std::uint64_t Rng::substream(std::uint64_t seed, std::uint64_t index) {
    // SplitMix64 finalizer over (seed, index)
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Inverse-CDF sampler
// ---------------------------------------------------------------------------

namespace {

class ContinuousSampler {
  public:
    ContinuousSampler(const ParametricDensity& model, double g) {
        constexpr std::size_t n = 1 << 14;
        const Interval dom = model.domain(g);
        lo_ = dom.lo;
        h_ = dom.width() / static_cast<double>(n - 1);
        cdf_.resize(n);
        double prev = density_at(model, lo_, g);
        double run = 0.0;
        cdf_[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double p = density_at(model, lo_ + h_ * static_cast<double>(i), g);
            run += 0.5 * (prev + p) * h_;
            cdf_[i] = run;
            prev = p;
        }
        if (!(run > 0.0)) throw std::runtime_error("sample: model has zero mass on its domain");
        for (auto& c : cdf_) c /= run;
    }

    double invert(double u) const {
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t i = (it == cdf_.begin()) ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
        i = std::min(i, cdf_.size() - 2);
        const double c0 = cdf_[i], c1 = cdf_[i + 1];
        const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
        return lo_ + h_ * (static_cast<double>(i) + frac);
    }

  private:
    static double density_at(const ParametricDensity& model, double s, double g) {
        const double p = model(s, g);
        if (p < -1e-12)
            throw std::runtime_error("sample: non-monotone CDF (negative density values)");
        return std::max(0.0, p);
    }

    double lo_ = 0.0, h_ = 0.0;
    std::vector<double> cdf_;
};

}  // namespace

SampleSet sample(const ParametricDensity& model, double g, std::size_t n,
                 std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample: need at least one draw");
    ContinuousSampler sampler(model, g);
    Rng rng(seed);
    SampleSet out;
    out.discrete = false;
    out.draws.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.draws[i] = sampler.invert(rng.uniform());
    out.g_true = g;
    out.seed = seed;
    out.model = model.describe() + " [rng=" + Rng::algorithm() + "]";
    return out;
}

SampleSet sample(const PixelMass& model, double g, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample: need at least one draw");
    if (model.probabilities.empty())
        throw std::invalid_argument("sample: empty pixel mass");
    std::vector<std::int64_t> labels;
    std::vector<double> cum;
    double run = 0.0;
    for (const auto& [label, p] : model.probabilities) {
        run += p;
        labels.push_back(label);
        cum.push_back(run);
    }
    Rng rng(seed);
    SampleSet out;
    out.discrete = true;
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * run;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const std::size_t idx =
            std::min(static_cast<std::size_t>(it - cum.begin()), labels.size() - 1);
        out.labels[i] = labels[idx];
    }
    out.g_true = g;
    out.seed = seed;
    out.model = "pixel-mass [rng=" + std::string(Rng::algorithm()) + "]";
    return out;
}

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

namespace {

constexpr double kGTolerance = 1e-10;
constexpr int kMaxIterations = 200;

struct BrentResult {
    double x;
    double fx;
    int iterations;
    bool converged;
};

/// Brent minimizer (golden-section with parabolic steps) on [a, b].
BrentResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double tol) {
    constexpr double golden = 0.3819660112501051;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    int iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol + std::abs(x) * 1e-15;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a))
            return {x, fx, iter, true};
        bool use_golden = true;
        if (std::abs(e) > tol1) {
            // parabolic fit through x, v, w
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            if (std::abs(p) < std::abs(0.5 * q * e) && p > q * (a - x) && p < q * (b - x)) {
                e = d;
                d = p / q;
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, iter, false};
}

MleResult maximize_log_likelihood(const std::function<double(double)>& loglik,
                                  SearchBracket bracket) {
    if (!(bracket.hi > bracket.lo))
        throw std::invalid_argument("mle: search bracket is empty");

    // coarse grid seed
    constexpr std::size_t coarse = 33;
    double best_g = bracket.lo;
    double best_ll = -std::numeric_limits<double>::infinity();
    double min_ll = std::numeric_limits<double>::infinity();
    const double step = (bracket.hi - bracket.lo) / static_cast<double>(coarse - 1);
    for (std::size_t i = 0; i < coarse; ++i) {
        const double g = bracket.lo + step * static_cast<double>(i);
        const double ll = loglik(g);
        if (std::isfinite(ll)) {
            min_ll = std::min(min_ll, ll);
            if (ll > best_ll) {
                best_ll = ll;
                best_g = g;
            }
        }
    }
    if (!std::isfinite(best_ll))
        throw std::runtime_error("mle: log-likelihood is -infinity across the bracket");

    const double lo = std::max(bracket.lo, best_g - step);
    const double hi = std::min(bracket.hi, best_g + step);
    auto negll = [&](double g) {
        const double ll = loglik(g);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
    };
    const BrentResult r = brent_minimize(negll, lo, hi, kGTolerance);

    MleResult out;
    out.g_hat = r.x;
    out.log_likelihood = -r.fx;
    out.iterations = r.iterations;
    // flat likelihood: no curvature anywhere on the coarse grid
    const bool flat = std::isfinite(min_ll) &&
                      (best_ll - min_ll) <= 1e-12 * (1.0 + std::abs(best_ll));
    out.converged = r.converged && !flat;
    return out;
}

}  // namespace

MleResult mle(const SampleSet& samples, const ParametricDensity& family,
              SearchBracket bracket) {
    if (samples.discrete)
        throw std::invalid_argument("mle: continuous family given discrete samples");
    auto loglik = [&](double g) {
        double ll = 0.0;
        for (double s : samples.draws) {
            const double p = family(s, g);
            if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
            ll += std::log(p);
        }
        return ll;
    };
    return maximize_log_likelihood(loglik, bracket);
}

MleResult mle(const SampleSet& samples, const std::function<PixelMass(double)>& family,
              SearchBracket bracket) {
    if (!samples.discrete)
        throw std::invalid_argument("mle: discrete family given continuous samples");
    std::map<std::int64_t, std::size_t> counts;
    for (auto label : samples.labels) ++counts[label];
    auto loglik = [&](double g) {
        const PixelMass m = family(g);
        double ll = 0.0;
        for (const auto& [label, count] : counts) {
            const auto it = m.probabilities.find(label);
            if (it == m.probabilities.end() || !(it->second > 0.0))
                return -std::numeric_limits<double>::infinity();
            ll += static_cast<double>(count) * std::log(it->second);
        }
        return ll;
    };
    return maximize_log_likelihood(loglik, bracket);
}

// ---------------------------------------------------------------------------
// Cramer-Rao attainment
// ---------------------------------------------------------------------------

AttainmentReport cr_attainment(const ParametricDensity& model, double g_true,
                               std::size_t trials, std::size_t repeats, std::uint64_t seed,
                               const AttainmentOptions& opts) {
    if (trials < 1 || repeats < 1)
        throw std::invalid_argument("cr_attainment: trials and repeats must be >= 1");

    const double fisher = opts.fisher_value ? *opts.fisher_value
                                            : fisher_continuous(model, g_true).value;
    if (!(fisher > 0.0))
        throw std::invalid_argument("cr_attainment: Fisher information must be positive");
    const double bound = 1.0 / (static_cast<double>(trials) * fisher);

    // asymptotic normality localizes the optimum around g_true
    const double half_width = 10.0 / std::sqrt(static_cast<double>(trials) * fisher);
    const SearchBracket bracket{g_true - half_width, g_true + half_width};

    AttainmentReport report;
    report.trials = trials;
    report.repeats = repeats;
    report.bound = bound;
    report.estimates.reserve(repeats);

    ContinuousSampler sampler(model, g_true);
    for (std::size_t r = 0; r < repeats; ++r) {
        Rng rng(Rng::substream(seed, r));
        SampleSet set;
        set.discrete = false;
        set.draws.resize(trials);
        for (std::size_t i = 0; i < trials; ++i) set.draws[i] = sampler.invert(rng.uniform());
        set.g_true = g_true;
        set.seed = seed;
        const MleResult fit = mle(set, model, bracket);
        report.estimates.push_back(fit.g_hat);
    }

    double mean = 0.0;
    for (double e : report.estimates) mean += e;
    mean /= static_cast<double>(repeats);
    report.mean_estimate = mean;
    if (repeats > 1) {
        double ss = 0.0;
        for (double e : report.estimates) ss += (e - mean) * (e - mean);
        report.empirical_variance = ss / static_cast<double>(repeats - 1);
    }
    report.ratio = report.empirical_variance / bound;
    if (opts.source_rate_q)
        report.source_rate_bound = bound / *opts.source_rate_q;
    return report;
}

}  // namespace wva
