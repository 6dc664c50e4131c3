#pragma once

#include <complex>
#include <optional>

#include "wva/density.hpp"
#include "wva/meter.hpp"
#include "wva/system.hpp"

namespace wva {

/// Interaction parameter and derived measurement strength G = g^2/waist^2
/// (equivalently 4 g^2 waist_k^2 in the momentum representation).
struct InteractionConfig {
    double g = 0.0;
    double waist = 1.0;
    double measurement_strength() const { return g * g / (waist * waist); }
    static double coupling_for_strength(double G, double waist);
};

enum class Branch { pass, fail };

/// Probability that postselection succeeds at coupling g:
/// q = Integral |sum_j c_j conj(c'_j) psi(s - lambda_j g)|^2 ds.
/// Closed form for Gaussian meters, overlap quadrature otherwise.
double postselection_probability(const SystemEnsemble& sys, const MeterState& meter,
                                 double g);

/// Exact postselected meter density (no weak-coupling approximation);
/// the branch mass q is recomputed at every g and exposed via mass().
/// The fail branch is the completeness remainder: traced density minus the
/// pass branch, which for qubits equals postselection onto the orthogonal
/// state. Evaluating a branch whose mass is below 1e-14 throws
/// std::runtime_error ("empty branch").
///
/// rep selects the detected variable; the momentum representation requires
/// either a Gaussian meter or a momentum-tabulated one.
ParametricDensity exact_wva_density(const SystemEnsemble& sys, const MeterState& meter,
                                    Branch branch,
                                    Representation rep = Representation::position);

enum class WeakValuePart { real, imaginary };

/// Linear-response (pure shift) postselected density: |psi(x - g Re A_w)|^2
/// with velocity Re A_w, or |psi~(k - 2 g waist_k^2 Im A_w)|^2 with
/// velocity 2 waist_k^2 Im A_w. The branch mass is the g-independent
/// |<f|i>|^2 of this regime.
ParametricDensity aav_density(const SystemEnsemble& sys, const MeterState& meter,
                              WeakValuePart part);

/// Benchmark density with no postselection, detected in the position basis.
/// With filtering (default) the system is prepared in the eigenstate of the
/// largest |eigenvalue| and the model is the pure shift |psi(s - l* g)|^2;
/// without filtering it is the convex mixture sum_j |c_j|^2 |psi(s-l_j g)|^2.
ParametricDensity standard_density(const SystemEnsemble& sys, const MeterState& meter,
                                   bool filter_largest_eigenvalue = true);

/// Marginal meter density after tracing out the system (the sum of all
/// postselection branches).
ParametricDensity traced_density(const SystemEnsemble& sys, const MeterState& meter,
                                 Representation rep = Representation::position);

/// Pure-shift family |p(s - nu g)| built directly from a meter profile;
/// used by tests and the detector layer.
ParametricDensity shift_family(const MeterState& meter, double velocity);

}  // namespace wva
