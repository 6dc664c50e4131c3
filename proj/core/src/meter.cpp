#include "wva/meter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wva {

namespace {

constexpr double kBoundaryTol = 1e-12;

double gaussian_amplitude(double s, double waist, double center) {
    const double u = s - center;
    return std::pow(2.0 * std::numbers::pi * waist * waist, -0.25) *
           std::exp(-u * u / (4.0 * waist * waist));
}

}  // namespace

MeterState MeterState::gaussian(double waist, double center, Representation rep) {
    if (!(waist > 0.0)) throw std::invalid_argument("MeterState: waist must be positive");
    MeterState m;
    m.rep_ = rep;
    m.waist_or_nothing_ = waist;
    m.center_ = center;
    return m;
}

MeterState MeterState::tabulated(Grid grid, std::vector<double> amplitudes,
                                 Representation rep) {
    std::vector<std::complex<double>> c(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) c[i] = amplitudes[i];
    MeterState m = tabulated_complex(grid, std::move(c), rep);
    // Normalize the trapezoid integral of |psi|^2 to one.
    const double nrm = m.norm_squared();
    if (!(nrm > 0.0))
        throw std::invalid_argument("MeterState: tabulated amplitudes have zero norm");
    const double scale = 1.0 / std::sqrt(nrm);
    for (auto& z : m.samples_) z *= scale;
    std::vector<double> re(m.samples_.size()), im(m.samples_.size());
    for (std::size_t i = 0; i < m.samples_.size(); ++i) {
        re[i] = m.samples_[i].real();
        im[i] = m.samples_[i].imag();
    }
    m.re_ = CubicTable(grid, std::move(re));
    m.im_ = CubicTable(grid, std::move(im));
    return m;
}

MeterState MeterState::tabulated_complex(Grid grid,
                                         std::vector<std::complex<double>> amplitudes,
                                         Representation rep) {
    if (amplitudes.size() != grid.n)
        throw std::invalid_argument("MeterState: amplitude count must match grid");
    MeterState m;
    m.rep_ = rep;
    m.grid_ = grid;
    m.samples_ = std::move(amplitudes);
    std::vector<double> re(m.samples_.size()), im(m.samples_.size());
    for (std::size_t i = 0; i < m.samples_.size(); ++i) {
        re[i] = m.samples_[i].real();
        im[i] = m.samples_[i].imag();
    }
    m.re_ = CubicTable(grid, std::move(re));
    m.im_ = CubicTable(grid, std::move(im));
    return m;
}

double MeterState::waist() const {
    if (analytic()) return *waist_or_nothing_;
    // rms spread of |psi|^2 on the grid (trapezoid moments)
    const double h = grid_->spacing();
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < grid_->n; ++i) {
        const double w = (i == 0 || i + 1 == grid_->n) ? 0.5 : 1.0;
        const double s = grid_->point(i);
        const double p = std::norm(samples_[i]);
        m0 += w * p;
        m1 += w * p * s;
        m2 += w * p * s * s;
    }
    m0 *= h;
    m1 *= h;
    m2 *= h;
    const double mean = m1 / m0;
    return std::sqrt(std::max(0.0, m2 / m0 - mean * mean));
}

double MeterState::center() const {
    if (analytic()) return center_;
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < grid_->n; ++i) {
        const double w = (i == 0 || i + 1 == grid_->n) ? 0.5 : 1.0;
        const double p = std::norm(samples_[i]);
        m0 += w * p;
        m1 += w * p * grid_->point(i);
    }
    return m1 / m0;
}

std::complex<double> MeterState::amplitude(double s) const {
    if (analytic()) return gaussian_amplitude(s, *waist_or_nothing_, center_);
    return {re_(s), im_(s)};
}

std::complex<double> MeterState::amplitude_derivative(double s) const {
    if (analytic()) {
        const double w = *waist_or_nothing_;
        return gaussian_amplitude(s, w, center_) * (-(s - center_) / (2.0 * w * w));
    }
    return {re_.derivative(s), im_.derivative(s)};
}

double MeterState::density(double s) const { return std::norm(amplitude(s)); }

double MeterState::norm_squared() const {
    if (analytic()) return 1.0;
    const double h = grid_->spacing();
    double nrm = 0.0;
    for (std::size_t i = 0; i < grid_->n; ++i) {
        const double w = (i == 0 || i + 1 == grid_->n) ? 0.5 : 1.0;
        nrm += w * std::norm(samples_[i]);
    }
    return nrm * h;
}

bool MeterState::is_real(double tol) const {
    if (analytic()) return true;
    for (const auto& z : samples_)
        if (std::abs(z.imag()) > tol) return false;
    return true;
}

const std::vector<std::complex<double>>& MeterState::samples() const { return samples_; }

// ---------------------------------------------------------------------------
// Fourier transforms (unitary convention)
// ---------------------------------------------------------------------------

MeterState fourier_transform(const MeterState& meter) {
    if (meter.representation() != Representation::position)
        throw std::invalid_argument("fourier_transform: expected a position-space meter");
    if (meter.analytic())
        return MeterState::gaussian(1.0 / (2.0 * meter.waist()), 0.0,
                                    Representation::momentum);

    const Grid& gx = *meter.grid();
    const std::size_t n = gx.n;
    if ((n & (n - 1)) != 0)
        throw std::invalid_argument("fourier_transform: grid size must be a power of two");
    const auto& psi = meter.samples();
    if (std::abs(psi.front()) >= kBoundaryTol || std::abs(psi.back()) >= kBoundaryTol)
        throw std::runtime_error("fourier_transform: domain too narrow "
                                 "(non-negligible boundary amplitude)");

    const double dx = gx.spacing();
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    const double k_lo = -0.5 * static_cast<double>(n) * dk;

    // psi~(k_m) = dx/sqrt(2 pi) e^{-i k_m x_lo} sum_j [psi_j e^{-i k_lo j dx}] w^{jm}
    std::vector<std::complex<double>> work(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = -k_lo * static_cast<double>(j) * dx;
        work[j] = psi[j] * std::complex<double>(std::cos(th), std::sin(th));
    }
    fft_radix2(work, false);

    const double scale = dx / std::sqrt(2.0 * std::numbers::pi);
    std::vector<std::complex<double>> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = k_lo + static_cast<double>(m) * dk;
        const double th = -k * gx.lo;
        out[m] = scale * std::complex<double>(std::cos(th), std::sin(th)) * work[m];
    }
    Grid gk(k_lo, k_lo + static_cast<double>(n - 1) * dk, n);
    return MeterState::tabulated_complex(gk, std::move(out), Representation::momentum);
}

MeterState inverse_fourier_transform(const MeterState& meter, double position_lo) {
    if (meter.representation() != Representation::momentum)
        throw std::invalid_argument(
            "inverse_fourier_transform: expected a momentum-space meter");
    if (meter.analytic())
        return MeterState::gaussian(1.0 / (2.0 * meter.waist()), 0.0,
                                    Representation::position);

    const Grid& gk = *meter.grid();
    const std::size_t n = gk.n;
    if ((n & (n - 1)) != 0)
        throw std::invalid_argument(
            "inverse_fourier_transform: grid size must be a power of two");
    const double dk = gk.spacing();
    const double dx = 2.0 * std::numbers::pi / (static_cast<double>(n) * dk);

    // psi(x_j) = dk/sqrt(2 pi) sum_m psi~_m e^{i k_m x_j}
    const auto& spec = meter.samples();
    std::vector<std::complex<double>> work(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = gk.lo + static_cast<double>(m) * dk;
        const double th = k * position_lo;
        work[m] = spec[m] * std::complex<double>(std::cos(th), std::sin(th));
    }
    fft_radix2(work, true);  // includes 1/n

    const double scale =
        dk * static_cast<double>(n) / std::sqrt(2.0 * std::numbers::pi);
    std::vector<std::complex<double>> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = gk.lo * static_cast<double>(j) * dx;
        out[j] = scale * std::complex<double>(std::cos(th), std::sin(th)) * work[j];
    }
    Grid gx(position_lo, position_lo + static_cast<double>(n - 1) * dx, n);
    return MeterState::tabulated_complex(gx, std::move(out), Representation::position);
}

}  // namespace wva
