#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "wva/meter.hpp"
#include "wva/numerics.hpp"
#include "wva/system.hpp"

namespace testutil {

/// Gaussian meter sampled on a power-of-two grid.
inline wva::MeterState tabulated_gaussian(double waist, double center = 0.0,
                                          double half_width = 0.0, std::size_t n = 4096) {
    if (half_width == 0.0) half_width = 14.0 * waist + std::abs(center);
    wva::Grid grid(center - half_width, center + half_width, n);
    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = grid.point(i) - center;
        amp[i] = std::exp(-s * s / (4.0 * waist * waist));
    }
    return wva::MeterState::tabulated(grid, std::move(amp));
}

/// Smooth random meter: a few Gaussian bumps of both signs, normalized.
inline wva::MeterState random_meter(std::mt19937_64& rng, std::size_t n = 4096) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t bumps = 2 + static_cast<std::size_t>(unit(rng) * 3);
    std::vector<double> center(bumps), width(bumps), height(bumps);
    for (std::size_t b = 0; b < bumps; ++b) {
        center[b] = -2.0 + 4.0 * unit(rng);
        width[b] = 0.5 + 1.5 * unit(rng);
        height[b] = (unit(rng) < 0.3 ? -1.0 : 1.0) * (0.3 + unit(rng));
    }
    wva::Grid grid(-16.0, 16.0, n);
    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = grid.point(i);
        double a = 0.0;
        for (std::size_t b = 0; b < bumps; ++b) {
            const double u = (s - center[b]) / width[b];
            a += height[b] * std::exp(-u * u);
        }
        amp[i] = a;
    }
    return wva::MeterState::tabulated(grid, std::move(amp));
}

/// Haar-ish random ensemble with d eigenvalues in [-3, 3].
inline wva::SystemEnsemble random_ensemble(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(-3.0, 3.0);
    wva::SystemEnsemble sys;
    sys.eigenvalues.resize(d);
    sys.pre_amplitudes.resize(d);
    sys.post_amplitudes.resize(d);
    for (auto& l : sys.eigenvalues) l = unit(rng);
    auto fill_unit = [&](std::vector<std::complex<double>>& v) {
        double norm = 0.0;
        for (auto& z : v) {
            z = {normal(rng), normal(rng)};
            norm += std::norm(z);
        }
        for (auto& z : v) z /= std::sqrt(norm);
    };
    fill_unit(sys.pre_amplitudes);
    fill_unit(sys.post_amplitudes);
    return sys;
}

}  // namespace testutil
