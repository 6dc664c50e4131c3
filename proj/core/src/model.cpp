#include "wva/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "wva/numerics.hpp"

namespace wva {

namespace {

constexpr double kEmptyBranch = 1e-14;

double gauss_pdf(double s, double center, double sd) {
    const double u = (s - center) / sd;
    return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * sd);
}

/// Integral of a unit Gaussian pdf over [a, b].
double gauss_interval(double a, double b, double center, double sd) {
    const double r = 1.0 / (std::numbers::sqrt2 * sd);
    return 0.5 * (erf((b - center) * r) - erf((a - center) * r));
}

[[noreturn]] void throw_empty_branch(double g) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "empty branch: postselection mass < 1e-14 at g = %.17g",
                  g);
    throw std::runtime_error(buf);
}

// ---------------------------------------------------------------------------
// Pure-shift family over an analytic Gaussian profile
// ---------------------------------------------------------------------------

class GaussianShiftImpl final : public DensityImpl {
  public:
    GaussianShiftImpl(double sd, double center0, double nu, double mass)
        : sd_(sd), center0_(center0), nu_(nu), mass_(mass) {}

    double value(double s, double g) const override {
        return gauss_pdf(s, center0_ + nu_ * g, sd_);
    }

    double ddg(double s, double g) const override {
        const double c = center0_ + nu_ * g;
        return nu_ * ((s - c) / (sd_ * sd_)) * gauss_pdf(s, c, sd_);
    }
    bool has_analytic_ddg() const override { return true; }

    Interval domain(double g) const override {
        const double c = center0_ + nu_ * g;
        return {c - 12.0 * sd_, c + 12.0 * sd_};
    }

    std::optional<double> velocity() const override { return nu_; }
    double mass(double) const override { return mass_; }
    double mass_ddg(double) const override { return 0.0; }

    std::optional<double> interval_mass(double a, double b, double g) const override {
        return gauss_interval(a, b, center0_ + nu_ * g, sd_);
    }
    std::optional<double> interval_mass_ddg(double a, double b, double g) const override {
        const double c = center0_ + nu_ * g;
        return -nu_ * (gauss_pdf(b, c, sd_) - gauss_pdf(a, c, sd_));
    }
    std::optional<double> centroid(double g) const override { return center0_ + nu_ * g; }

    std::shared_ptr<const DensityImpl> convolved_gaussian(double j, double mean) const override {
        return std::make_shared<GaussianShiftImpl>(std::sqrt(sd_ * sd_ + j * j),
                                                   center0_ - mean, nu_, mass_);
    }

    std::string describe() const override { return "gaussian-shift"; }

  private:
    double sd_, center0_, nu_, mass_;
};

// ---------------------------------------------------------------------------
// Pure-shift family over a tabulated profile
// ---------------------------------------------------------------------------

class TabulatedShiftImpl final : public DensityImpl {
  public:
    /// amplitude_mode: table holds a real wavefunction, density = psi^2;
    /// otherwise the table holds the density itself.
    TabulatedShiftImpl(CubicTable table, bool amplitude_mode, double nu, double mass)
        : table_(std::move(table)), amplitude_mode_(amplitude_mode), nu_(nu), mass_(mass) {
        const Grid& gr = table_.grid();
        base_ = {gr.lo, gr.hi};
        // first moment of the base density (trapezoid)
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t i = 0; i < gr.n; ++i) {
            const double w = (i == 0 || i + 1 == gr.n) ? 0.5 : 1.0;
            const double p = base_density(gr.point(i));
            m0 += w * p;
            m1 += w * p * gr.point(i);
        }
        base_centroid_ = m1 / m0;
    }

    double value(double s, double g) const override { return base_density(s - nu_ * g); }

    double ddg(double s, double g) const override {
        const double u = s - nu_ * g;
        if (amplitude_mode_) return -nu_ * 2.0 * table_(u) * table_.derivative(u);
        return -nu_ * table_.derivative(u);
    }
    bool has_analytic_ddg() const override { return true; }

    Interval domain(double g) const override {
        return {base_.lo + nu_ * g, base_.hi + nu_ * g};
    }

    std::optional<double> velocity() const override { return nu_; }
    double mass(double) const override { return mass_; }
    double mass_ddg(double) const override { return 0.0; }
    std::optional<double> centroid(double g) const override {
        return base_centroid_ + nu_ * g;
    }

    std::string describe() const override { return "tabulated-shift"; }

  private:
    double base_density(double u) const {
        if (amplitude_mode_) {
            const double a = table_(u);
            return a * a;
        }
        return std::max(0.0, table_(u));
    }

    CubicTable table_;
    bool amplitude_mode_;
    double nu_, mass_;
    Interval base_;
    double base_centroid_ = 0.0;
};

// ---------------------------------------------------------------------------
// Signed Gaussian mixture with g-dependent component weights
//
// Pbar(s, g) = sum_j w0_j exp(-decay_j g^2) pdf(s; c0_j + v_j g, sd_j).
// Covers the exact postselected densities for Gaussian meters (the cross
// terms of |sum_j w_j psi(s - l_j g)|^2 are themselves Gaussians with
// overlap-decayed weights), the traced mixture and everything obtained from
// those by Gaussian jitter.
// ---------------------------------------------------------------------------

struct MixtureComponent {
    double w0 = 0.0;
    double decay = 0.0;
    double v = 0.0;
    double c0 = 0.0;
    double sd = 1.0;
};

class GaussianMixtureImpl final : public DensityImpl {
  public:
    GaussianMixtureImpl(std::vector<MixtureComponent> comps, std::string label)
        : comps_(std::move(comps)), label_(std::move(label)) {}

    double value(double s, double g) const override {
        const double q = mass_checked(g);
        double p = 0.0;
        for (const auto& c : comps_)
            p += weight(c, g) * gauss_pdf(s, c.c0 + c.v * g, c.sd);
        return std::max(0.0, p) / q;
    }

    double ddg(double s, double g) const override {
        const double q = mass_checked(g);
        double p = 0.0, pg = 0.0, qg = 0.0;
        for (const auto& c : comps_) {
            const double w = weight(c, g);
            const double wg = -2.0 * c.decay * g * w;
            const double center = c.c0 + c.v * g;
            const double f = gauss_pdf(s, center, c.sd);
            const double fg = c.v * ((s - center) / (c.sd * c.sd)) * f;
            p += w * f;
            pg += wg * f + w * fg;
            qg += wg;
        }
        return (pg - (p / q) * qg) / q;
    }
    bool has_analytic_ddg() const override { return true; }

    Interval domain(double g) const override {
        double lo = comps_.front().c0 + comps_.front().v * g;
        double hi = lo;
        double sd = 0.0;
        for (const auto& c : comps_) {
            const double center = c.c0 + c.v * g;
            lo = std::min(lo, center);
            hi = std::max(hi, center);
            sd = std::max(sd, c.sd);
        }
        return {lo - 12.0 * sd, hi + 12.0 * sd};
    }

    std::optional<double> velocity() const override {
        if (comps_.size() == 1 && comps_.front().decay == 0.0) return comps_.front().v;
        return std::nullopt;
    }

    double mass(double g) const override {
        double q = 0.0;
        for (const auto& c : comps_) q += weight(c, g);
        return q;
    }
    double mass_ddg(double g) const override {
        double qg = 0.0;
        for (const auto& c : comps_) qg += -2.0 * c.decay * g * weight(c, g);
        return qg;
    }

    std::optional<double> interval_mass(double a, double b, double g) const override {
        const double q = mass_checked(g);
        double m = 0.0;
        for (const auto& c : comps_)
            m += weight(c, g) * gauss_interval(a, b, c.c0 + c.v * g, c.sd);
        return m / q;
    }

    std::optional<double> interval_mass_ddg(double a, double b, double g) const override {
        const double q = mass_checked(g);
        double m = 0.0, mg = 0.0, qg = 0.0;
        for (const auto& c : comps_) {
            const double w = weight(c, g);
            const double wg = -2.0 * c.decay * g * w;
            const double center = c.c0 + c.v * g;
            const double cell = gauss_interval(a, b, center, c.sd);
            m += w * cell;
            mg += wg * cell - w * c.v * (gauss_pdf(b, center, c.sd) - gauss_pdf(a, center, c.sd));
            qg += wg;
        }
        return (mg - (m / q) * qg) / q;
    }

    std::optional<double> centroid(double g) const override {
        const double q = mass_checked(g);
        double m = 0.0;
        for (const auto& c : comps_) m += weight(c, g) * (c.c0 + c.v * g);
        return m / q;
    }

    std::shared_ptr<const DensityImpl> convolved_gaussian(double j, double mean) const override {
        std::vector<MixtureComponent> out = comps_;
        for (auto& c : out) {
            c.sd = std::sqrt(c.sd * c.sd + j * j);
            c.c0 -= mean;
        }
        return std::make_shared<GaussianMixtureImpl>(std::move(out), label_);
    }

    std::string describe() const override { return label_; }

  private:
    static double weight(const MixtureComponent& c, double g) {
        return c.decay == 0.0 ? c.w0 : c.w0 * std::exp(-c.decay * g * g);
    }

    double mass_checked(double g) const {
        const double q = mass(g);
        if (q < kEmptyBranch) throw_empty_branch(g);
        return q;
    }

    std::vector<MixtureComponent> comps_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Exact postselected density in the position representation, general meter
// ---------------------------------------------------------------------------

enum class BranchKind { pass, fail, traced };

class ExactPositionImpl final : public DensityImpl {
  public:
    ExactPositionImpl(SystemEnsemble sys, MeterState meter, BranchKind kind)
        : sys_(std::move(sys)), meter_(std::move(meter)), kind_(kind) {
        for (std::size_t j = 0; j < sys_.dimension(); ++j) {
            weights_.push_back(sys_.pre_amplitudes[j] * std::conj(sys_.post_amplitudes[j]));
            pops_.push_back(std::norm(sys_.pre_amplitudes[j]));
        }
        if (meter_.analytic()) {
            support_ = {meter_.center() - 12.0 * meter_.waist(),
                        meter_.center() + 12.0 * meter_.waist()};
        } else {
            support_ = {meter_.grid()->lo, meter_.grid()->hi};
        }
    }

    double value(double s, double g) const override {
        const double q = mass_checked(g);
        return std::max(0.0, unnorm(s, g)) / q;
    }

    double ddg(double s, double g) const override {
        const double q = mass_checked(g);
        return (unnorm_ddg(s, g) - (unnorm(s, g) / q) * mass_ddg(g)) / q;
    }
    bool has_analytic_ddg() const override { return true; }

    Interval domain(double g) const override {
        double lo_shift = 0.0, hi_shift = 0.0;
        for (double l : sys_.eigenvalues) {
            lo_shift = std::min(lo_shift, l * g);
            hi_shift = std::max(hi_shift, l * g);
        }
        return {support_.lo + lo_shift, support_.hi + hi_shift};
    }

    double mass(double g) const override {
        switch (kind_) {
            case BranchKind::traced: return 1.0;
            case BranchKind::pass: return pass_mass(g);
            case BranchKind::fail: return 1.0 - pass_mass(g);
        }
        return 1.0;
    }

    double mass_ddg(double g) const override {
        if (kind_ == BranchKind::traced) return 0.0;
        const double d = central_derivative([&](double gg) { return pass_mass(gg); }, g);
        return kind_ == BranchKind::pass ? d : -d;
    }

    std::string describe() const override {
        switch (kind_) {
            case BranchKind::pass: return "exact-wva-pass";
            case BranchKind::fail: return "exact-wva-fail";
            default: return "traced";
        }
    }

  private:
    double psi(double s) const { return meter_.amplitude(s).real(); }
    double dpsi(double s) const { return meter_.amplitude_derivative(s).real(); }

    double traced_at(double s, double g) const {
        double p = 0.0;
        for (std::size_t j = 0; j < pops_.size(); ++j) {
            const double a = psi(s - sys_.eigenvalues[j] * g);
            p += pops_[j] * a * a;
        }
        return p;
    }

    double pass_at(double s, double g) const {
        std::complex<double> amp = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j)
            amp += weights_[j] * psi(s - sys_.eigenvalues[j] * g);
        return std::norm(amp);
    }

    double unnorm(double s, double g) const {
        switch (kind_) {
            case BranchKind::traced: return traced_at(s, g);
            case BranchKind::pass: return pass_at(s, g);
            case BranchKind::fail: return std::max(0.0, traced_at(s, g) - pass_at(s, g));
        }
        return 0.0;
    }

    double pass_ddg_at(double s, double g) const {
        std::complex<double> amp = 0.0, amp_g = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            const double l = sys_.eigenvalues[j];
            amp += weights_[j] * psi(s - l * g);
            amp_g += weights_[j] * (-l) * dpsi(s - l * g);
        }
        return 2.0 * (amp.real() * amp_g.real() + amp.imag() * amp_g.imag());
    }

    double traced_ddg_at(double s, double g) const {
        double p = 0.0;
        for (std::size_t j = 0; j < pops_.size(); ++j) {
            const double l = sys_.eigenvalues[j];
            p += pops_[j] * 2.0 * psi(s - l * g) * (-l) * dpsi(s - l * g);
        }
        return p;
    }

    double unnorm_ddg(double s, double g) const {
        switch (kind_) {
            case BranchKind::traced: return traced_ddg_at(s, g);
            case BranchKind::pass: return pass_ddg_at(s, g);
            case BranchKind::fail: return traced_ddg_at(s, g) - pass_ddg_at(s, g);
        }
        return 0.0;
    }

    /// Overlap O(a) = Integral psi(s) psi(s + a) ds, memoized.
    double overlap_of(double a) const {
        if (a == 0.0) return 1.0;
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = overlap_memo_.find(a);
            if (it != overlap_memo_.end()) return it->second;
        }
        const double v =
            integrate([&](double s) { return psi(s) * psi(s + a); }, support_.lo - std::abs(a),
                      support_.hi + std::abs(a), 1e-13)
                .value;
        std::lock_guard<std::mutex> lock(memo_mutex_);
        overlap_memo_.emplace(a, v);
        return v;
    }

    double pass_mass(double g) const {
        double q = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i)
            for (std::size_t j = 0; j < weights_.size(); ++j) {
                const double re = (weights_[i] * std::conj(weights_[j])).real();
                if (re == 0.0) continue;
                q += re * overlap_of((sys_.eigenvalues[i] - sys_.eigenvalues[j]) * g);
            }
        return q;
    }

    double mass_checked(double g) const {
        const double q = mass(g);
        if (q < kEmptyBranch) throw_empty_branch(g);
        return q;
    }

    SystemEnsemble sys_;
    MeterState meter_;
    BranchKind kind_;
    std::vector<std::complex<double>> weights_;
    std::vector<double> pops_;
    Interval support_;
    mutable std::mutex memo_mutex_;
    mutable std::map<double, double> overlap_memo_;
};

// ---------------------------------------------------------------------------
// Exact postselected density in the momentum representation
//
// The interaction only imprints phases on the momentum amplitudes, so the
// branch densities are the meter momentum density modulated by
// |sum_j w_j e^{-i l_j g k}|^2 (pass) or its completeness remainder (fail).
// ---------------------------------------------------------------------------

class ModulatedMomentumImpl final : public DensityImpl {
  public:
    ModulatedMomentumImpl(SystemEnsemble sys, MeterState momentum_meter, BranchKind kind)
        : sys_(std::move(sys)), meter_(std::move(momentum_meter)), kind_(kind) {
        for (std::size_t j = 0; j < sys_.dimension(); ++j)
            weights_.push_back(sys_.pre_amplitudes[j] * std::conj(sys_.post_amplitudes[j]));
        if (meter_.analytic()) {
            gaussian_sd_ = meter_.waist();
            support_ = {meter_.center() - 12.0 * *gaussian_sd_,
                        meter_.center() + 12.0 * *gaussian_sd_};
        } else {
            support_ = {meter_.grid()->lo, meter_.grid()->hi};
        }
    }

    double value(double k, double g) const override {
        const double q = mass_checked(g);
        return std::max(0.0, meter_.density(k) * branch_factor(k, g)) / q;
    }

    double ddg(double k, double g) const override {
        const double q = mass_checked(g);
        const double rho = meter_.density(k);
        const double pb = rho * branch_factor(k, g);
        const double pbg = rho * branch_factor_ddg(k, g);
        return (pbg - (pb / q) * mass_ddg(g)) / q;
    }
    bool has_analytic_ddg() const override { return true; }

    Interval domain(double) const override { return support_; }

    double mass(double g) const override {
        switch (kind_) {
            case BranchKind::traced: return 1.0;
            case BranchKind::pass: return pass_mass(g);
            case BranchKind::fail: return 1.0 - pass_mass(g);
        }
        return 1.0;
    }

    double mass_ddg(double g) const override {
        if (kind_ == BranchKind::traced) return 0.0;
        double d;
        if (gaussian_sd_) {
            d = 0.0;
            const double sk2 = *gaussian_sd_ * *gaussian_sd_;
            for (std::size_t i = 0; i < weights_.size(); ++i)
                for (std::size_t j = 0; j < weights_.size(); ++j) {
                    const double dl = sys_.eigenvalues[j] - sys_.eigenvalues[i];
                    if (dl == 0.0) continue;
                    const double re = (weights_[i] * std::conj(weights_[j])).real();
                    d += re * (-dl * dl * g * sk2) * std::exp(-0.5 * dl * dl * g * g * sk2);
                }
        } else {
            d = central_derivative([&](double gg) { return pass_mass(gg); }, g);
        }
        return kind_ == BranchKind::pass ? d : -d;
    }

    std::string describe() const override {
        switch (kind_) {
            case BranchKind::pass: return "exact-wva-pass-momentum";
            case BranchKind::fail: return "exact-wva-fail-momentum";
            default: return "traced-momentum";
        }
    }

  private:
    std::complex<double> phase_sum(double k, double g) const {
        std::complex<double> m = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            const double th = -sys_.eigenvalues[j] * g * k;
            m += weights_[j] * std::complex<double>(std::cos(th), std::sin(th));
        }
        return m;
    }

    double branch_factor(double k, double g) const {
        const double m = std::norm(phase_sum(k, g));
        switch (kind_) {
            case BranchKind::traced: return 1.0;
            case BranchKind::pass: return m;
            case BranchKind::fail: return std::max(0.0, 1.0 - m);
        }
        return 1.0;
    }

    double branch_factor_ddg(double k, double g) const {
        if (kind_ == BranchKind::traced) return 0.0;
        std::complex<double> m = phase_sum(k, g);
        std::complex<double> mg = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            const double l = sys_.eigenvalues[j];
            const double th = -l * g * k;
            mg += weights_[j] * std::complex<double>(0.0, -l * k) *
                  std::complex<double>(std::cos(th), std::sin(th));
        }
        const double d = 2.0 * (m.real() * mg.real() + m.imag() * mg.imag());
        return kind_ == BranchKind::pass ? d : -d;
    }

    /// chi(t) = Integral rho(k) e^{i t k} dk (characteristic function).
    std::complex<double> char_function(double t) const {
        if (gaussian_sd_) {
            const double sk = *gaussian_sd_;
            const double mag = std::exp(-0.5 * t * t * sk * sk);
            const double th = t * meter_.center();
            return mag * std::complex<double>(std::cos(th), std::sin(th));
        }
        if (t == 0.0) return 1.0;
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = chi_memo_.find(t);
            if (it != chi_memo_.end()) return it->second;
        }
        const double re = integrate(
            [&](double k) { return meter_.density(k) * std::cos(t * k); }, support_.lo,
            support_.hi, 1e-13).value;
        const double im = integrate(
            [&](double k) { return meter_.density(k) * std::sin(t * k); }, support_.lo,
            support_.hi, 1e-13).value;
        std::complex<double> v(re, im);
        std::lock_guard<std::mutex> lock(memo_mutex_);
        chi_memo_.emplace(t, v);
        return v;
    }

    double pass_mass(double g) const {
        std::complex<double> q = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i)
            for (std::size_t j = 0; j < weights_.size(); ++j) {
                const double dl = sys_.eigenvalues[j] - sys_.eigenvalues[i];
                q += weights_[i] * std::conj(weights_[j]) * char_function(dl * g);
            }
        return q.real();
    }

    double mass_checked(double g) const {
        const double q = mass(g);
        if (q < kEmptyBranch) throw_empty_branch(g);
        return q;
    }

    SystemEnsemble sys_;
    MeterState meter_;
    BranchKind kind_;
    std::vector<std::complex<double>> weights_;
    std::optional<double> gaussian_sd_;
    Interval support_;
    mutable std::mutex memo_mutex_;
    mutable std::map<double, std::complex<double>> chi_memo_;
};

// ---------------------------------------------------------------------------
// Factory helpers
// ---------------------------------------------------------------------------

std::vector<MixtureComponent> gaussian_branch_components(const SystemEnsemble& sys,
                                                         double waist, double center,
                                                         BranchKind kind) {
    const std::size_t d = sys.dimension();
    std::vector<std::complex<double>> w(d);
    for (std::size_t j = 0; j < d; ++j)
        w[j] = sys.pre_amplitudes[j] * std::conj(sys.post_amplitudes[j]);

    std::vector<MixtureComponent> comps;
    for (std::size_t j = 0; j < d; ++j) {
        MixtureComponent c;
        c.v = sys.eigenvalues[j];
        c.c0 = center;
        c.sd = waist;
        switch (kind) {
            case BranchKind::pass: c.w0 = std::norm(w[j]); break;
            case BranchKind::fail:
                c.w0 = std::norm(sys.pre_amplitudes[j]) - std::norm(w[j]);
                break;
            case BranchKind::traced: c.w0 = std::norm(sys.pre_amplitudes[j]); break;
        }
        if (c.w0 != 0.0) comps.push_back(c);
    }
    if (kind != BranchKind::traced) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                MixtureComponent c;
                const double re = (w[i] * std::conj(w[j])).real();
                c.w0 = (kind == BranchKind::pass ? 2.0 : -2.0) * re;
                const double dl = sys.eigenvalues[i] - sys.eigenvalues[j];
                c.decay = dl * dl / (8.0 * waist * waist);
                c.v = 0.5 * (sys.eigenvalues[i] + sys.eigenvalues[j]);
                c.c0 = center;
                c.sd = waist;
                if (c.w0 != 0.0) comps.push_back(c);
            }
    }
    if (comps.empty()) {
        // identically empty branch; keep one zero-weight component so the
        // mass check reports it as such
        comps.push_back({0.0, 0.0, 0.0, center, waist});
    }
    return comps;
}

MeterState momentum_meter_of(const MeterState& meter) {
    if (meter.representation() == Representation::momentum) return meter;
    return fourier_transform(meter);
}

ParametricDensity momentum_exact(const SystemEnsemble& sys, const MeterState& meter,
                                 BranchKind kind) {
    return ParametricDensity(
        std::make_shared<ModulatedMomentumImpl>(sys, momentum_meter_of(meter), kind));
}

}  // namespace

double InteractionConfig::coupling_for_strength(double G, double waist) {
    if (G < 0.0) throw std::invalid_argument("measurement strength must be >= 0");
    return std::sqrt(G) * waist;
}

double postselection_probability(const SystemEnsemble& sys, const MeterState& meter,
                                 double g) {
    sys.validate();
    if (meter.representation() == Representation::momentum)
        return ParametricDensity(
                   std::make_shared<ModulatedMomentumImpl>(sys, meter, BranchKind::pass))
            .mass(g);
    if (meter.analytic()) {
        auto comps = gaussian_branch_components(sys, meter.waist(), meter.center(),
                                                BranchKind::pass);
        return ParametricDensity(
                   std::make_shared<GaussianMixtureImpl>(std::move(comps), "exact-wva-pass"))
            .mass(g);
    }
    return ParametricDensity(
               std::make_shared<ExactPositionImpl>(sys, meter, BranchKind::pass))
        .mass(g);
}

ParametricDensity exact_wva_density(const SystemEnsemble& sys, const MeterState& meter,
                                    Branch branch, Representation rep) {
    sys.validate();
    const BranchKind kind = branch == Branch::pass ? BranchKind::pass : BranchKind::fail;
    if (rep == Representation::momentum) return momentum_exact(sys, meter, kind);

    if (meter.representation() != Representation::position)
        throw std::invalid_argument(
            "exact_wva_density: position representation requires a position meter");
    if (meter.analytic()) {
        auto comps = gaussian_branch_components(sys, meter.waist(), meter.center(), kind);
        return ParametricDensity(std::make_shared<GaussianMixtureImpl>(
            std::move(comps), kind == BranchKind::pass ? "exact-wva-pass" : "exact-wva-fail"));
    }
    if (!meter.is_real())
        throw std::invalid_argument("exact_wva_density: tabulated meter must be real-valued");
    return ParametricDensity(std::make_shared<ExactPositionImpl>(sys, meter, kind));
}

ParametricDensity aav_density(const SystemEnsemble& sys, const MeterState& meter,
                              WeakValuePart part) {
    sys.validate();
    const std::complex<double> aw = weak_value(sys);
    const double q0 = std::norm(sys.pre_post_overlap());

    if (part == WeakValuePart::real) {
        if (meter.representation() != Representation::position)
            throw std::invalid_argument("aav_density: real part requires a position meter");
        const double nu = aw.real();
        if (meter.analytic())
            return ParametricDensity(std::make_shared<GaussianShiftImpl>(
                meter.waist(), meter.center(), nu, q0));
        return ParametricDensity(std::make_shared<TabulatedShiftImpl>(
            CubicTable(*meter.grid(), [&] {
                std::vector<double> re(meter.grid()->n);
                for (std::size_t i = 0; i < re.size(); ++i)
                    re[i] = meter.samples()[i].real();
                return re;
            }()),
            true, nu, q0));
    }

    const MeterState mom = momentum_meter_of(meter);
    const double waist_k = mom.waist();
    const double nu = 2.0 * waist_k * waist_k * aw.imag();
    if (mom.analytic())
        return ParametricDensity(
            std::make_shared<GaussianShiftImpl>(waist_k, mom.center(), nu, q0));
    std::vector<double> dens(mom.grid()->n);
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(mom.samples()[i]);
    return ParametricDensity(std::make_shared<TabulatedShiftImpl>(
        CubicTable(*mom.grid(), std::move(dens)), false, nu, q0));
}

ParametricDensity standard_density(const SystemEnsemble& sys, const MeterState& meter,
                                   bool filter_largest_eigenvalue) {
    sys.validate();
    if (meter.representation() != Representation::position)
        throw std::invalid_argument("standard_density: detection is in the position basis");
    if (filter_largest_eigenvalue)
        return shift_family(meter, sys.filtered_eigenvalue());
    if (meter.analytic()) {
        auto comps = gaussian_branch_components(sys, meter.waist(), meter.center(),
                                                BranchKind::traced);
        return ParametricDensity(
            std::make_shared<GaussianMixtureImpl>(std::move(comps), "standard-mixture"));
    }
    return ParametricDensity(
        std::make_shared<ExactPositionImpl>(sys, meter, BranchKind::traced));
}

ParametricDensity traced_density(const SystemEnsemble& sys, const MeterState& meter,
                                 Representation rep) {
    sys.validate();
    if (rep == Representation::momentum)
        return momentum_exact(sys, meter, BranchKind::traced);
    return standard_density(sys, meter, false);
}

ParametricDensity shift_family(const MeterState& meter, double velocity) {
    if (meter.analytic())
        return ParametricDensity(std::make_shared<GaussianShiftImpl>(
            meter.waist(), meter.center(), velocity, 1.0));
    if (meter.is_real()) {
        std::vector<double> re(meter.grid()->n);
        for (std::size_t i = 0; i < re.size(); ++i) re[i] = meter.samples()[i].real();
        return ParametricDensity(std::make_shared<TabulatedShiftImpl>(
            CubicTable(*meter.grid(), std::move(re)), true, velocity, 1.0));
    }
    std::vector<double> dens(meter.grid()->n);
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(meter.samples()[i]);
    return ParametricDensity(std::make_shared<TabulatedShiftImpl>(
        CubicTable(*meter.grid(), std::move(dens)), false, velocity, 1.0));
}

}  // namespace wva
