#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "wva/numerics.hpp"

namespace wva {

enum class Representation { position, momentum };

/// Meter wavefunction: either an analytic Gaussian of given waist or a
/// wavefunction tabulated on a uniform grid.
///
/// Physical input meters are real-valued; states derived by a Fourier
/// transform may carry phases, so tabulated amplitudes are stored as
/// complex pairs internally and is_real() checks the physical assumption.
class MeterState {
  public:
    /// psi(s) = (2 pi waist^2)^(-1/4) exp(-(s-center)^2 / (4 waist^2)).
    static MeterState gaussian(double waist, double center = 0.0,
                               Representation rep = Representation::position);

    /// Real amplitudes sampled on grid; normalized so that the trapezoid
    /// integral of |psi|^2 equals one. Throws if the norm is not positive.
    static MeterState tabulated(Grid grid, std::vector<double> amplitudes,
                                Representation rep = Representation::position);

    /// Complex amplitudes, already normalized by the caller (used by the
    /// Fourier transform, which preserves the norm).
    static MeterState tabulated_complex(Grid grid,
                                        std::vector<std::complex<double>> amplitudes,
                                        Representation rep);

    bool analytic() const { return !waist_or_nothing_ ? false : true; }
    Representation representation() const { return rep_; }

    /// Gaussian waist; for tabulated states the rms spread of |psi|^2.
    double waist() const;
    double center() const;

    std::complex<double> amplitude(double s) const;
    std::complex<double> amplitude_derivative(double s) const;
    double density(double s) const;  // |psi(s)|^2

    double norm_squared() const;
    bool is_real(double tol = 1e-12) const;

    const Grid* grid() const { return grid_ ? &*grid_ : nullptr; }
    const std::vector<std::complex<double>>& samples() const;

  private:
    MeterState() = default;

    Representation rep_ = Representation::position;
    std::optional<double> waist_or_nothing_;
    double center_ = 0.0;
    std::optional<Grid> grid_;
    std::vector<std::complex<double>> samples_;
    CubicTable re_, im_;
};

/// Unitary-convention Fourier transform of a tabulated or analytic position
/// meter: psi~(k) = (2 pi)^(-1/2) Integral psi(x) e^{-ikx} dx.
///
/// Tabulated input requires a power-of-two grid with |psi| < 1e-12 at both
/// ends ("domain too narrow" otherwise). Parseval holds to rounding; a
/// Gaussian of waist D maps to a Gaussian of waist 1/(2D).
MeterState fourier_transform(const MeterState& position_state);

/// Inverse of fourier_transform; reconstructs the position grid implied by
/// the momentum grid, placing the window symmetrically around zero.
MeterState inverse_fourier_transform(const MeterState& momentum_state,
                                     double position_lo);

}  // namespace wva
