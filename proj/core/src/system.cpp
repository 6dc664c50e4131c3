#include "wva/system.hpp"

#include <cmath>
#include <stdexcept>

namespace wva {

namespace {

double norm_sum(const std::vector<std::complex<double>>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

}  // namespace

void SystemEnsemble::validate() const {
    const std::size_t d = eigenvalues.size();
    if (d < 2) throw std::invalid_argument("SystemEnsemble: dimension must be >= 2");
    if (pre_amplitudes.size() != d || post_amplitudes.size() != d)
        throw std::invalid_argument("SystemEnsemble: amplitude arrays must match eigenvalues");
    if (std::abs(norm_sum(pre_amplitudes) - 1.0) > 1e-12)
        throw std::invalid_argument("SystemEnsemble: preselection state is not normalized");
    if (std::abs(norm_sum(post_amplitudes) - 1.0) > 1e-12)
        throw std::invalid_argument("SystemEnsemble: postselection state is not normalized");
}

std::complex<double> SystemEnsemble::pre_post_overlap() const {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < dimension(); ++j)
        s += std::conj(post_amplitudes[j]) * pre_amplitudes[j];
    return s;
}

std::complex<double> SystemEnsemble::observable_matrix_element() const {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < dimension(); ++j)
        s += std::conj(post_amplitudes[j]) * eigenvalues[j] * pre_amplitudes[j];
    return s;
}

double SystemEnsemble::mean_square_eigenvalue() const {
    double s = 0.0;
    for (std::size_t j = 0; j < dimension(); ++j)
        s += eigenvalues[j] * eigenvalues[j] * std::norm(pre_amplitudes[j]);
    return s;
}

double SystemEnsemble::filtered_eigenvalue() const {
    double best = eigenvalues.at(0);
    for (double l : eigenvalues) {
        const double b2 = best * best, l2 = l * l;
        if (l2 > b2 || (l2 == b2 && l > best)) best = l;
    }
    return best;
}

SystemEnsemble SystemEnsemble::with_orthogonal_postselection() const {
    if (dimension() != 2)
        throw std::invalid_argument(
            "SystemEnsemble: orthogonal postselection state is only unique for qubits");
    SystemEnsemble out = *this;
    out.post_amplitudes = {-std::conj(post_amplitudes[1]), std::conj(post_amplitudes[0])};
    return out;
}

QubitAngles QubitAngles::real_family(double theta_i, double theta_f) {
    QubitAngles a;
    a.family = QubitFamily::real_weak_value;
    a.theta_i = theta_i;
    a.theta_f = theta_f;
    return a;
}

QubitAngles QubitAngles::imaginary_family(double phi_i, double phi_f) {
    QubitAngles a;
    a.family = QubitFamily::imaginary_weak_value;
    a.phi_i = phi_i;
    a.phi_f = phi_f;
    return a;
}

SystemEnsemble QubitAngles::ensemble() const {
    SystemEnsemble sys;
    sys.eigenvalues = {1.0, -1.0};
    if (family == QubitFamily::real_weak_value) {
        sys.pre_amplitudes = {std::cos(theta_i / 2.0), std::sin(theta_i / 2.0)};
        sys.post_amplitudes = {std::cos(theta_f / 2.0), std::sin(theta_f / 2.0)};
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        sys.pre_amplitudes = {r, r * std::exp(std::complex<double>(0.0, phi_i))};
        sys.post_amplitudes = {r, r * std::exp(std::complex<double>(0.0, phi_f))};
    }
    return sys;
}

std::complex<double> weak_value(const SystemEnsemble& sys) {
    const auto overlap = sys.pre_post_overlap();
    if (std::abs(overlap) <= 1e-14)
        throw std::runtime_error("weak value undefined: pre- and postselection "
                                 "are orthogonal");
    return sys.observable_matrix_element() / overlap;
}

}  // namespace wva
