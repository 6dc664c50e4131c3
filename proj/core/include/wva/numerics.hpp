#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace wva {

/// Uniformly spaced abscissae covering [lo, hi], endpoints included.
struct Grid {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 0;

    Grid() = default;
    Grid(double lo_, double hi_, std::size_t n_);

    double spacing() const { return (hi - lo) / static_cast<double>(n - 1); }
    double point(std::size_t i) const { return lo + static_cast<double>(i) * spacing(); }
    std::vector<double> values() const;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    /// False when the recursion depth cap was hit before reaching tol.
    bool converged = true;
};

/// Adaptive Simpson quadrature of f over [lo, hi].
///
/// Refines until the estimated absolute error is below tol or the maximum
/// recursion depth (40) is reached; in the latter case the best estimate is
/// returned with converged = false. A non-finite integrand value raises
/// std::runtime_error naming the offending abscissa.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double lo, double hi, double tol = 1e-10);

/// Error function. Rational minimax approximations, |error| < 1e-14;
/// erf(-x) == -erf(x) holds exactly in evaluation.
double erf(double x);

/// Complementary error function, same accuracy class as erf.
double erfc(double x);

/// Richardson-extrapolated central difference of f at x.
///
/// The initial step is scale * 1e-4 * max(1, |x|). Non-finite function
/// values raise std::runtime_error.
double central_derivative(const std::function<double(double)>& f,
                          double x, double scale = 1.0);

/// In-place radix-2 FFT; size must be a power of two. The forward
/// direction uses the e^{-i 2 pi j k / n} sign convention and no
/// normalization; the inverse applies 1/n.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

/// Catmull-Rom cubic interpolation over a uniform grid.
///
/// Evaluates to zero outside the grid; samples beyond the table edges are
/// treated as zero, which matches the decaying functions stored here.
class CubicTable {
  public:
    CubicTable() = default;
    CubicTable(Grid grid, std::vector<double> samples);

    double operator()(double x) const;
    double derivative(double x) const;

    bool empty() const { return samples_.empty(); }
    const Grid& grid() const { return grid_; }
    const std::vector<double>& samples() const { return samples_; }

  private:
    Grid grid_;
    std::vector<double> samples_;
};

}  // namespace wva
