#include "wva/detector.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wva {

namespace {

constexpr double kPixelFloor = 1e-16;
constexpr double kTruncationBudget = 1e-12;
constexpr std::int64_t kMaxPixels = 1'000'000;

}  // namespace

// ---------------------------------------------------------------------------
// NoiseKernel
// ---------------------------------------------------------------------------

NoiseKernel NoiseKernel::gaussian(double std_dev, double mean) {
    if (std_dev < 0.0)
        throw std::invalid_argument("NoiseKernel: standard deviation must be >= 0");
    NoiseKernel k;
    k.gaussian_ = true;
    k.std_dev_ = std_dev;
    k.mean_ = mean;
    if (std_dev == 0.0) {
        k.nodes_ = {mean};
        k.weights_ = {1.0};
        return k;
    }
    // Composite-Simpson nodes over mean +/- 8 sigma, weights folded with the
    // kernel density and normalized to unit discrete mass.
    constexpr std::size_t n = 641;  // odd
    const double lo = mean - 8.0 * std_dev;
    const double hi = mean + 8.0 * std_dev;
    const double h = (hi - lo) / static_cast<double>(n - 1);
    k.nodes_.resize(n);
    k.weights_.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        k.nodes_[i] = lo + static_cast<double>(i) * h;
        const double u = (k.nodes_[i] - mean) / std_dev;
        const double dens =
            std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * std_dev);
        double w = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        k.weights_[i] = w * dens;
        total += k.weights_[i];
    }
    for (auto& w : k.weights_) w /= total;
    return k;
}

NoiseKernel NoiseKernel::tabulated(Grid grid, std::vector<double> weights) {
    if (weights.size() != grid.n)
        throw std::invalid_argument("NoiseKernel: weight count must match grid");
    for (auto& w : weights) {
        if (w < -1e-12) throw std::invalid_argument("NoiseKernel: weights must be >= 0");
        w = std::max(0.0, w);
    }
    NoiseKernel k;
    k.gaussian_ = false;
    const double h = grid.spacing();

    // normalize the continuous table so interpolation sees a unit kernel
    double norm = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i)
        norm += ((i == 0 || i + 1 == grid.n) ? 0.5 : 1.0) * weights[i];
    norm *= h;
    if (!(norm > 0.0)) throw std::invalid_argument("NoiseKernel: zero total weight");
    std::vector<double> density(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) density[i] = weights[i] / norm;
    k.table_ = CubicTable(grid, density);

    // quadrature nodes on the kernel's own grid (trapezoid), unit sum
    k.nodes_.resize(grid.n);
    k.weights_.resize(grid.n);
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        k.nodes_[i] = grid.point(i);
        k.weights_[i] = ((i == 0 || i + 1 == grid.n) ? 0.5 : 1.0) * density[i];
        total += k.weights_[i];
    }
    for (auto& w : k.weights_) w /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) mean += k.weights_[i] * k.nodes_[i];
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double d = k.nodes_[i] - mean;
        var += k.weights_[i] * d * d;
    }
    k.mean_ = mean;
    k.std_dev_ = std::sqrt(var);
    return k;
}

double NoiseKernel::density(double mu) const {
    if (gaussian_) {
        if (std_dev_ == 0.0) return mu == mean_ ? std::numeric_limits<double>::infinity() : 0.0;
        const double u = (mu - mean_) / std_dev_;
        return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * std_dev_);
    }
    return std::max(0.0, table_(mu));
}

// ---------------------------------------------------------------------------
// apply_jitter
// ---------------------------------------------------------------------------

namespace {

/// Kernel-quadrature convolution of an arbitrary density:
/// value(s, g) = sum_i w_i inner(s + x_i, g).
class SmearedImpl final : public DensityImpl {
  public:
    SmearedImpl(std::shared_ptr<const DensityImpl> inner, NoiseKernel kernel)
        : inner_(std::move(inner)), kernel_(std::move(kernel)) {}

    double value(double s, double g) const override {
        double p = 0.0;
        const auto& x = kernel_.nodes();
        const auto& w = kernel_.weights();
        for (std::size_t i = 0; i < x.size(); ++i) p += w[i] * inner_->value(s + x[i], g);
        return p;
    }

    double ddg(double s, double g) const override {
        if (!inner_->has_analytic_ddg()) return DensityImpl::ddg(s, g);
        double p = 0.0;
        const auto& x = kernel_.nodes();
        const auto& w = kernel_.weights();
        for (std::size_t i = 0; i < x.size(); ++i) p += w[i] * inner_->ddg(s + x[i], g);
        return p;
    }
    bool has_analytic_ddg() const override { return inner_->has_analytic_ddg(); }

    Interval domain(double g) const override {
        const Interval d = inner_->domain(g);
        const auto& x = kernel_.nodes();
        return {d.lo - x.back(), d.hi - x.front()};
    }

    std::optional<double> velocity() const override { return inner_->velocity(); }
    double mass(double g) const override { return inner_->mass(g); }
    double mass_ddg(double g) const override { return inner_->mass_ddg(g); }

    std::optional<double> centroid(double g) const override {
        if (auto c = inner_->centroid(g)) return *c - kernel_.mean();
        return std::nullopt;
    }

    std::string describe() const override { return "jitter(" + inner_->describe() + ")"; }

  private:
    std::shared_ptr<const DensityImpl> inner_;
    NoiseKernel kernel_;
};

}  // namespace

ParametricDensity apply_jitter(const ParametricDensity& density, const NoiseKernel& kernel) {
    if (!density.valid()) throw std::invalid_argument("apply_jitter: empty density");
    if (kernel.is_gaussian()) {
        if (kernel.std_dev() == 0.0 && kernel.mean() == 0.0) return density;
        if (auto closed = density.impl().convolved_gaussian(kernel.std_dev(), kernel.mean()))
            return ParametricDensity(closed);
    }
    return ParametricDensity(
        std::make_shared<SmearedImpl>(density.impl_ptr(), kernel));
}

// ---------------------------------------------------------------------------
// pixelate
// ---------------------------------------------------------------------------

PixelMass pixelate(const ParametricDensity& density, const PixelConfig& cfg, double g,
                   double tol) {
    if (!(cfg.width > 0.0)) throw std::invalid_argument("pixelate: width must be positive");
    const double r = cfg.width;
    const double mu = cfg.offset;

    std::int64_t n0, n1;
    if (cfg.index_range) {
        n0 = cfg.index_range->first;
        n1 = cfg.index_range->second;
        if (n1 < n0) throw std::invalid_argument("pixelate: empty index range");
    } else {
        // pixels intersecting the support of P(s + mu, g)
        const Interval dom = density.domain(g);
        n0 = static_cast<std::int64_t>(std::floor((dom.lo - mu) / r + 0.5));
        n1 = static_cast<std::int64_t>(std::ceil((dom.hi - mu) / r - 0.5));
    }
    if (n1 - n0 + 1 > kMaxPixels)
        throw std::runtime_error("pixelate: pixel width is too small for the density domain");

    const double pixel_tol = tol / static_cast<double>(n1 - n0 + 1);
    PixelMass out;
    double kept = 0.0;
    double truncated = 0.0;
    for (std::int64_t n = n0; n <= n1; ++n) {
        const double a = r * (static_cast<double>(n) - 0.5) + mu;
        const double b = r * (static_cast<double>(n) + 0.5) + mu;
        const double m = density.interval_mass(a, b, g, pixel_tol);
        if (m < kPixelFloor) {
            truncated += std::max(0.0, m);
            continue;
        }
        out.probabilities[n] = m;
        out.d_dg[n] = density.interval_mass_ddg(a, b, g, pixel_tol);
        kept += m;
    }
    out.truncated_mass = std::max(truncated, 1.0 - kept);
    if (cfg.index_range && out.truncated_mass > kTruncationBudget)
        throw std::runtime_error("pixelate: pixel range too small (truncated mass above 1e-12)");
    return out;
}

double alignment_of(double velocity, double g, const PixelConfig& cfg) {
    if (!(cfg.width > 0.0))
        throw std::invalid_argument("alignment_of: width must be positive");
    double frac = std::fmod((velocity * g - cfg.offset) / cfg.width, 1.0);
    if (frac < 0.0) frac += 1.0;
    return frac <= 0.5 ? frac : 1.0 - frac;
}

double offset_for_alignment(double centroid, double h, double pixel_width) {
    if (h < 0.0 || h > 0.5)
        throw std::invalid_argument("offset_for_alignment: h must lie in [0, 0.5]");
    return centroid - h * pixel_width;
}

}  // namespace wva
