#include "wva/fisher.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wva/model.hpp"
#include "wva/numerics.hpp"

namespace wva {

namespace {

constexpr double kEmptyBranch = 1e-14;

double sample_max(const std::function<double(double)>& f, const Interval& dom,
                  std::size_t n = 513) {
    double m = 0.0;
    const double h = dom.width() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(dom.lo + h * static_cast<double>(i)));
    return m;
}

}  // namespace

FisherReport fisher_continuous(const ParametricDensity& density, double g,
                               const FisherOptions& opts) {
    if (!density.valid()) throw std::invalid_argument("fisher_continuous: empty density");
    const Interval dom = density.domain(g);
    const double max_p = sample_max([&](double s) { return density(s, g); }, dom);
    const double floor = opts.density_floor_rel * max_p;

    std::size_t floor_hits = 0;
    auto integrand = [&](double s) {
        const double p = density(s, g);
        if (p < floor) {
            ++floor_hits;
            return 0.0;
        }
        const double d = density.ddg(s, g);
        return d * d / p;
    };
    const QuadratureResult q = integrate(integrand, dom.lo, dom.hi, opts.tol);

    FisherReport report;
    report.value = std::max(0.0, q.value);
    report.abs_error_estimate = q.abs_error_estimate;
    report.diagnostics.floor_hits = floor_hits;
    report.diagnostics.discarded_mass_bound = floor * dom.width();
    report.diagnostics.flagged =
        report.diagnostics.discarded_mass_bound > 1e-9 || !q.converged;
    return report;
}

FisherReport fisher_discrete(const PixelMass& mass) {
    constexpr double kFloor = 1e-15;
    FisherReport report;
    double skipped = 0.0;
    for (const auto& [n, p] : mass.probabilities) {
        if (p < kFloor) {
            skipped += p;
            ++report.diagnostics.floor_hits;
            continue;
        }
        const auto it = mass.d_dg.find(n);
        if (it == mass.d_dg.end())
            throw std::invalid_argument("fisher_discrete: missing d_dg for a pixel");
        report.value += it->second * it->second / p;
        ++report.diagnostics.grid_size;
    }
    report.diagnostics.discarded_mass_bound = skipped + mass.truncated_mass;
    report.diagnostics.flagged = report.diagnostics.discarded_mass_bound > 1e-9;
    return report;
}

FisherReport fisher_joint(const ParametricDensity& pass, const ParametricDensity& fail,
                          double g, const FisherOptions& opts) {
    const double qp = pass.mass(g);
    const double qf = fail.mass(g);
    if (std::abs(qp + qf - 1.0) > 1e-8)
        throw std::runtime_error("fisher_joint: branch masses do not sum to one");

    FisherReport report;
    for (const auto* branch : {&pass, &fail}) {
        const double qb = branch->mass(g);
        if (qb < kEmptyBranch) continue;  // empty branch carries no events
        const double qb_g = branch->mass_ddg(g);
        const Interval dom = branch->domain(g);
        const double max_p =
            sample_max([&](double s) { return qb * (*branch)(s, g); }, dom);
        const double floor = opts.density_floor_rel * max_p;
        std::size_t floor_hits = 0;
        auto integrand = [&](double s) {
            const double p = (*branch)(s, g);
            const double ubar = qb * p;
            if (ubar < floor) {
                ++floor_hits;
                return 0.0;
            }
            const double du = qb_g * p + qb * branch->ddg(s, g);
            return du * du / ubar;
        };
        const QuadratureResult q = integrate(integrand, dom.lo, dom.hi, opts.tol);
        report.value += q.value;
        report.abs_error_estimate += q.abs_error_estimate;
        report.diagnostics.floor_hits += floor_hits;
        report.diagnostics.discarded_mass_bound += floor * dom.width();
        report.diagnostics.flagged |= !q.converged;
    }
    report.value = std::max(0.0, report.value);
    report.diagnostics.flagged |= report.diagnostics.discarded_mass_bound > 1e-9;
    return report;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

double ratio_real_exact(double G, double theta_i, double theta_f) {
    if (G < 0.0) throw std::invalid_argument("ratio_real_exact: G must be >= 0");
    const double cc = std::cos(theta_f) * std::cos(theta_i);
    const double ss = std::sin(theta_f) * std::sin(theta_i);
    if (G == 0.0) return 0.5 * (1.0 + cc - ss);

    // last term of the closed form, multiplied through by sin(ti) sin(tf):
    //   T = G (1+cc) ss / [ss + e^{G/2} (1+cc)]
    // with the denominator written as a sum of nonnegative pieces,
    //   (1+cc) (e^{G/2}-1) + (1 + cos(ti - tf)),
    // which vanishes only at the aligned corners where the numerator does too.
    const double num = G * (1.0 + cc) * ss;
    const double half_diff = std::cos(0.5 * (theta_i - theta_f));
    const double den = (1.0 + cc) * std::expm1(0.5 * G) + 2.0 * half_diff * half_diff;
    const double t = (den > 0.0 && std::isfinite(den)) ? num / den : 0.0;
    return 0.5 * (1.0 + cc - std::exp(-0.5 * G) * ss + t);
}

double ratio_imag_exact(double G, double dphi) {
    if (G < 0.0) throw std::invalid_argument("ratio_imag_exact: G must be >= 0");
    const double e1 = std::exp(-0.5 * G);
    const double e2 = std::exp(-G);
    const double c = std::cos(dphi);
    const double den = 4.0 * e1 * c + 4.0;
    if (den == 0.0) return 0.0;  // G = 0 with orthogonal postselection: empty branch
    const double num = 2.0 * G * e1 * c + 2.0 - (std::cos(2.0 * dphi) + 1.0) * e2;
    return num / den;
}

double alpha(double R, double h) {
    if (!(R > 0.0)) throw std::invalid_argument("alpha: R must be positive");
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

    auto term = [&](long n) {
        const double gp = (h - static_cast<double>(n) + 0.5) * inv_sqrt2;
        const double gm = (h - static_cast<double>(n) - 0.5) * inv_sqrt2;
        const double ep = std::exp(-R * R * gp * gp);
        const double em = std::exp(-R * R * gm * gm);
        const double num = (ep - em) * (ep - em) / std::numbers::pi;
        if (num == 0.0) return 0.0;
        const double den = erf(R * gp) - erf(R * gm);
        if (den <= 0.0) return 0.0;
        return num / den;
    };

    double total = term(0);
    for (int dir : {+1, -1}) {
        int tiny_run = 0;
        for (long k = 1; k < 100000; ++k) {
            const double t = term(dir * k);
            total += t;
            if (t < 1e-16) {
                if (++tiny_run >= 3) break;
            } else {
                tiny_run = 0;
            }
        }
    }
    return total;
}

double beta(double delta_s, double jitter_s) {
    if (!(delta_s > 0.0)) throw std::invalid_argument("beta: waist must be positive");
    const double r = jitter_s / delta_s;
    return 1.0 / (1.0 + r * r);
}

double cramer_rao_bound(const FisherReport& info, std::uint64_t trials) {
    if (trials < 1) throw std::invalid_argument("cramer_rao_bound: need at least one trial");
    if (!(info.value > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (static_cast<double>(trials) * info.value);
}

// ---------------------------------------------------------------------------
// corrected_ratio
// ---------------------------------------------------------------------------

namespace {

FisherReport arm_information(const ParametricDensity& density, double g,
                             const ArmOptions& arm, const FisherOptions& fopts) {
    ParametricDensity detected = density;
    if (arm.jitter) detected = apply_jitter(detected, *arm.jitter);
    if (arm.pixels) {
        PixelConfig cfg = *arm.pixels;
        if (arm.pixel_alignment)
            cfg.offset = offset_for_alignment(detected.centroid(g), *arm.pixel_alignment,
                                              cfg.width);
        return fisher_discrete(pixelate(detected, cfg, g));
    }
    return fisher_continuous(detected, g, fopts);
}

}  // namespace

RatioReport corrected_ratio(const SystemEnsemble& sys, const MeterState& meter, double g,
                            const RatioOptions& opts) {
    sys.validate();

    Representation rep = Representation::position;
    if (opts.wva_representation) {
        rep = *opts.wva_representation;
    } else {
        // momentum detection pays off exactly when the weak value is purely
        // imaginary; fall back to position when it is undefined
        try {
            const auto aw = weak_value(sys);
            if (std::abs(aw.real()) < 1e-12 * std::max(1.0, std::abs(aw.imag())) &&
                std::abs(aw.imag()) > 1e-12)
                rep = Representation::momentum;
        } catch (const std::runtime_error&) {
        }
    }

    ParametricDensity wva;
    if (opts.regime == Regime::exact) {
        wva = exact_wva_density(sys, meter, Branch::pass, rep);
    } else {
        wva = aav_density(sys, meter,
                          rep == Representation::momentum ? WeakValuePart::imaginary
                                                          : WeakValuePart::real);
    }
    const ParametricDensity std_arm = standard_density(sys, meter, true);

    RatioReport report;
    report.q = wva.mass(g);
    report.wva_report = arm_information(wva, g, opts.wva_arm, opts.fisher);
    report.std_report = arm_information(std_arm, g, opts.std_arm, opts.fisher);
    report.wva_info = report.wva_report.value;
    report.std_info = report.std_report.value;
    if (!(report.std_info > 0.0))
        throw std::runtime_error("corrected_ratio: standard-strategy information vanishes");
    report.corrected_ratio = report.q * report.wva_info / report.std_info;
    return report;
}

}  // namespace wva
