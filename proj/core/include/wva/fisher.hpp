#pragma once

#include <cstdint>
#include <optional>

#include "wva/density.hpp"
#include "wva/detector.hpp"
#include "wva/meter.hpp"
#include "wva/system.hpp"

namespace wva {

struct FisherDiagnostics {
    /// Upper bound on the density mass skipped by the integrand floor.
    double discarded_mass_bound = 0.0;
    std::size_t floor_hits = 0;
    std::size_t grid_size = 0;
    bool flagged = false;
};

struct FisherReport {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    FisherDiagnostics diagnostics;
};

struct FisherOptions {
    double tol = 1e-10;              // quadrature tolerance
    double density_floor_rel = 1e-15;  // integrand floor relative to max(P)
};

/// Continuous Fisher information Integral (d_g P)^2 / P ds at parameter g.
/// Integrand cells with P below the relative floor are skipped and their
/// mass bound recorded; the report is flagged when the bound exceeds 1e-9.
FisherReport fisher_continuous(const ParametricDensity& density, double g,
                               const FisherOptions& opts = {});

/// Discrete Fisher information sum (d_g Pr(n))^2 / Pr(n) over pixels with
/// Pr >= 1e-15.
FisherReport fisher_discrete(const PixelMass& mass);

/// Joint pass/fail information: the two branch integrals of
/// (d_g Pbar)^2 / Pbar where Pbar = mass(g) * P(s, g) is the unnormalized
/// branch density. Branch masses must sum to one within 1e-8 near g.
FisherReport fisher_joint(const ParametricDensity& pass, const ParametricDensity& fail,
                          double g, const FisherOptions& opts = {});

/// Corrected WVA-to-standard information ratio for the real qubit family
/// with a Gaussian meter, as a closed form in the measurement strength G
/// and the pre/postselection angles. Removable singularities (vanishing
/// sines, aligned corners) are evaluated by their limits.
double ratio_real_exact(double G, double theta_i, double theta_f);

/// Same for the imaginary family, parameterized by G and the phase gap
/// dphi. Evaluates the overflow-safe form of
/// (2 e^{G/2} G cos dphi + 2 e^G - cos(2 dphi) - 1) / (4 e^{G/2} cos dphi + 4 e^G).
double ratio_imag_exact(double G, double dphi);

/// Fraction of Fisher information that survives pixelation of a Gaussian at
/// inverse resolution R = pixel_width / waist and alignment h in [0, 0.5].
double alpha(double R, double h);

/// Fisher attenuation under Gaussian jitter: 1 / (1 + J^2 / Delta^2).
double beta(double delta_s, double jitter_s);

/// Cramer-Rao lower bound 1/(N F); +infinity when the information is zero.
double cramer_rao_bound(const FisherReport& info, std::uint64_t trials);

enum class Regime { exact, aav };

/// Detector imperfections applied to one arm of the comparison.
struct ArmOptions {
    std::optional<NoiseKernel> jitter;
    std::optional<PixelConfig> pixels;
    /// When set, overrides pixels->offset so the arm's centroid sits at the
    /// given alignment h in [0, 0.5].
    std::optional<double> pixel_alignment;
};

struct RatioOptions {
    Regime regime = Regime::exact;
    FisherOptions fisher;
    ArmOptions wva_arm;
    ArmOptions std_arm;
    /// Detected variable on the WVA arm; defaults to momentum when the weak
    /// value is (numerically) purely imaginary, position otherwise. The
    /// standard arm always detects position.
    std::optional<Representation> wva_representation;
};

struct RatioReport {
    double q = 0.0;
    double wva_info = 0.0;
    double std_info = 0.0;
    double corrected_ratio = 0.0;
    FisherReport wva_report;
    FisherReport std_report;
};

/// q * F_g[WVA arm] / F_g[standard arm] through any composition of jitter
/// and pixelation on both arms.
RatioReport corrected_ratio(const SystemEnsemble& sys, const MeterState& meter, double g,
                            const RatioOptions& opts = {});

}  // namespace wva
