#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wva {

/// Pre- and postselected ensemble for the internal (system) degree of
/// freedom, stored through the eigendecomposition of the control
/// observable: eigenvalues lambda_j, preselection amplitudes c_j and
/// postselection amplitudes c'_j.
struct SystemEnsemble {
    std::vector<double> eigenvalues;
    std::vector<std::complex<double>> pre_amplitudes;
    std::vector<std::complex<double>> post_amplitudes;

    std::size_t dimension() const { return eigenvalues.size(); }

    /// Checks equal lengths, d >= 2 and unit norms (1e-12); throws
    /// std::invalid_argument on violation.
    void validate() const;

    /// <f|i> = sum_j conj(c'_j) c_j
    std::complex<double> pre_post_overlap() const;

    /// Transition amplitude <f|A|i> = sum_j conj(c'_j) lambda_j c_j.
    std::complex<double> observable_matrix_element() const;

    /// <i|A^2|i> = sum_j lambda_j^2 |c_j|^2
    double mean_square_eigenvalue() const;

    /// Eigenvalue maximizing lambda^2; ties broken toward the positive one.
    double filtered_eigenvalue() const;

    /// Qubit only: replaces the postselection state by its orthogonal
    /// complement (the "failed postselection" branch).
    SystemEnsemble with_orthogonal_postselection() const;
};

enum class QubitFamily { real_weak_value, imaginary_weak_value };

/// Qubit pre/postselection parameterizations.
///
/// The real family uses |i> = cos(theta_i/2)|+> + sin(theta_i/2)|->
/// (same for |f> with theta_f) and yields a purely real weak value. The
/// imaginary family uses |i> = (|+> + e^{i phi_i}|->)/sqrt(2) (same for
/// |f>) and yields a purely imaginary weak value; only dphi = phi_i - phi_f
/// matters.
struct QubitAngles {
    QubitFamily family = QubitFamily::real_weak_value;
    double theta_i = 0.0;
    double theta_f = 0.0;
    double phi_i = 0.0;
    double phi_f = 0.0;

    static QubitAngles real_family(double theta_i, double theta_f);
    static QubitAngles imaginary_family(double phi_i, double phi_f);

    double dphi() const { return phi_i - phi_f; }
    SystemEnsemble ensemble() const;
};

/// Weak value <f|A|i> / <f|i>. Throws std::runtime_error ("weak value
/// undefined") when |<f|i>| <= 1e-14.
std::complex<double> weak_value(const SystemEnsemble& sys);

}  // namespace wva
