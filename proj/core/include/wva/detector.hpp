#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wva/density.hpp"
#include "wva/numerics.hpp"

namespace wva {

/// Pixelated detector: pixel n covers [width*(n-1/2), width*(n+1/2)) of the
/// displaced coordinate s + offset. Without an explicit index range pixels
/// are grown outward until the per-pixel mass drops below 1e-16.
struct PixelConfig {
    double width = 1.0;   // r_s
    double offset = 0.0;  // controllable detector displacement mu
    std::optional<std::pair<std::int64_t, std::int64_t>> index_range;
};

/// Jitter model: a g-independent displacement distribution convolved with
/// the detected density. Gaussian kernels are truncated at 8 standard
/// deviations for quadrature; tabulated kernels use their declared support
/// and are normalized at construction.
class NoiseKernel {
  public:
    static NoiseKernel gaussian(double std_dev, double mean = 0.0);
    static NoiseKernel tabulated(Grid grid, std::vector<double> weights);

    bool is_gaussian() const { return gaussian_; }
    double std_dev() const { return std_dev_; }
    double mean() const { return mean_; }

    double density(double mu) const;

    /// Quadrature nodes and weights over the truncated support.
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

  private:
    NoiseKernel() = default;
    bool gaussian_ = true;
    double std_dev_ = 0.0;
    double mean_ = 0.0;
    CubicTable table_;
    std::vector<double> nodes_, weights_;
};

/// Discrete click distribution over pixel labels with the per-pixel
/// parameter derivative needed by the discrete Fisher information.
struct PixelMass {
    std::map<std::int64_t, double> probabilities;
    std::map<std::int64_t, double> d_dg;
    double truncated_mass = 0.0;
};

/// Pr(n) = Integral over pixel n of P(s + offset, g) ds.
///
/// Per-pixel derivatives use the boundary-evaluation chain rule for pure
/// shift families and central differences otherwise. Throws
/// std::runtime_error ("pixel range too small") when an explicit index
/// range leaves more than 1e-12 of mass outside.
PixelMass pixelate(const ParametricDensity& density, const PixelConfig& cfg, double g,
                   double tol = 1e-12);

/// Convolution with the noise kernel: s -> Integral P(s + u, g) N(u) du.
/// Gaussian-on-Gaussian is evaluated in closed form (width redefinition
/// Delta -> sqrt(Delta^2 + J^2)); otherwise the kernel quadrature runs per
/// evaluation. Shift structure and velocity are preserved.
ParametricDensity apply_jitter(const ParametricDensity& density, const NoiseKernel& kernel);

/// Folded fractional alignment of the centroid with the pixel boundaries:
/// ((velocity*g - offset) mod width) / width reflected into [0, 0.5].
/// 0 means mid-pixel, 0.5 means on a boundary.
double alignment_of(double velocity, double g, const PixelConfig& cfg);

/// Detector offset that realizes a requested alignment h for a density whose
/// centroid at coupling g is `centroid`.
double offset_for_alignment(double centroid, double h, double pixel_width);

}  // namespace wva
