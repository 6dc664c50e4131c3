#include "wva/scan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wva/fisher.hpp"
#include "wva/model.hpp"
#include "wva/numerics.hpp"

namespace wva {

double ScanAxis::point(std::size_t i) const {
    const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
    if (log_spaced) {
        if (!(lo > 0.0 && hi > 0.0))
            throw std::invalid_argument("ScanAxis: log spacing needs positive bounds");
        return lo * std::pow(hi / lo, t);
    }
    return lo + (hi - lo) * t;
}

std::size_t ScanSpec::lattice_size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.steps;
    return n;
}

// ---------------------------------------------------------------------------
// Objective registry
// ---------------------------------------------------------------------------

namespace {

double at(const std::map<std::string, double>& pt, const std::string& key) {
    const auto it = pt.find(key);
    if (it == pt.end())
        throw std::invalid_argument("objective: missing axis or param '" + key + "'");
    return it->second;
}

double at_or(const std::map<std::string, double>& pt, const std::string& key, double dflt) {
    const auto it = pt.find(key);
    return it == pt.end() ? dflt : it->second;
}

void require_constraints(const std::set<std::string>& given,
                         const std::set<std::string>& supported) {
    for (const auto& c : given)
        if (!supported.contains(c))
            throw std::invalid_argument("objective: unsupported constraint '" + c + "'");
}

Objective make_real_detector_ratio(const ScanSpec& spec) {
    require_constraints(spec.constraints, {"equal-h"});
    const bool equal_h = spec.constraints.contains("equal-h");
    return [equal_h](const std::map<std::string, double>& pt) {
        const auto sys =
            QubitAngles::real_family(at(pt, "theta_i"), at(pt, "theta_f")).ensemble();
        const auto meter = MeterState::gaussian(at(pt, "delta_x"));
        RatioOptions opts;
        opts.regime = Regime::exact;
        opts.wva_representation = Representation::position;
        const double j = at_or(pt, "jitter", 0.0);
        if (j > 0.0) {
            opts.wva_arm.jitter = NoiseKernel::gaussian(j);
            opts.std_arm.jitter = NoiseKernel::gaussian(j);
        }
        const double r = at_or(pt, "pixel_r", 0.0);
        if (r > 0.0) {
            opts.wva_arm.pixels = PixelConfig{r, 0.0, std::nullopt};
            opts.std_arm.pixels = PixelConfig{r, 0.0, std::nullopt};
            if (equal_h) {
                const double h = at_or(pt, "h", 0.3);
                opts.wva_arm.pixel_alignment = h;
                opts.std_arm.pixel_alignment = h;
            } else {
                opts.wva_arm.pixels->offset = at_or(pt, "mu_wva", 0.0);
                opts.std_arm.pixels->offset = at_or(pt, "mu_std", 0.0);
            }
        }
        return corrected_ratio(sys, meter, at(pt, "g"), opts).corrected_ratio;
    };
}

Objective make_imag_jitter_ratio(const ScanSpec& spec) {
    require_constraints(spec.constraints, {"couple-jitter"});
    const bool coupled = spec.constraints.contains("couple-jitter");
    return [coupled](const std::map<std::string, double>& pt) {
        const double dphi = at(pt, "dphi");
        const double dk = at(pt, "delta_k");
        const auto sys = QubitAngles::imaginary_family(dphi, 0.0).ensemble();
        const auto meter = MeterState::gaussian(1.0 / (2.0 * dk));
        RatioOptions opts;
        opts.regime = Regime::exact;
        opts.wva_representation = Representation::momentum;
        const double jx = at_or(pt, "jitter_x", 0.0);
        // equal severity in both detected variables: J_x Delta_k = J_k Delta_x
        const double jk = coupled ? 2.0 * jx * dk * dk : at_or(pt, "jitter_k", 0.0);
        if (jx > 0.0) opts.std_arm.jitter = NoiseKernel::gaussian(jx);
        if (jk > 0.0) opts.wva_arm.jitter = NoiseKernel::gaussian(jk);
        return corrected_ratio(sys, meter, at(pt, "g"), opts).corrected_ratio;
    };
}

}  // namespace

Objective make_objective(const ScanSpec& spec) {
    const std::string& name = spec.objective;
    if (name == "ratio-real-exact") {
        require_constraints(spec.constraints, {});
        return [](const std::map<std::string, double>& pt) {
            return ratio_real_exact(at(pt, "G"), at(pt, "theta_i"), at(pt, "theta_f"));
        };
    }
    if (name == "ratio-imag-exact") {
        require_constraints(spec.constraints, {});
        return [](const std::map<std::string, double>& pt) {
            return ratio_imag_exact(at(pt, "G"), at(pt, "dphi"));
        };
    }
    if (name == "alpha") {
        require_constraints(spec.constraints, {});
        return [](const std::map<std::string, double>& pt) {
            return alpha(at(pt, "R"), at(pt, "h"));
        };
    }
    if (name == "pixel-fisher") {
        require_constraints(spec.constraints, {});
        return [](const std::map<std::string, double>& pt) {
            const double d = at(pt, "delta_s");
            const double r = at_or(pt, "r_s", 1.0);
            return alpha(r / d, at(pt, "h")) / (d * d);
        };
    }
    if (name == "real-exact-detector-ratio") return make_real_detector_ratio(spec);
    if (name == "imag-exact-jitter-ratio") return make_imag_jitter_ratio(spec);
    throw std::invalid_argument("unknown objective '" + name + "'");
}

std::vector<std::string> objective_names() {
    return {"ratio-real-exact", "ratio-imag-exact",       "alpha",
            "pixel-fisher",     "real-exact-detector-ratio", "imag-exact-jitter-ratio"};
}

// ---------------------------------------------------------------------------
// grid_scan
// ---------------------------------------------------------------------------

ScanResult grid_scan(const ScanSpec& spec) { return grid_scan(spec, make_objective(spec)); }

ScanResult grid_scan(const ScanSpec& spec, const Objective& objective) {
    if (spec.axes.empty()) throw std::invalid_argument("grid_scan: no axes declared");
    for (const auto& a : spec.axes)
        if (a.steps < 2) throw std::invalid_argument("grid_scan: axes need >= 2 steps");

    const std::size_t total = spec.lattice_size();
    ScanResult result;
    result.table.resize(total);
    result.max_value = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> idx(spec.axes.size(), 0);
    std::map<std::string, double> pt = spec.params;
    for (std::size_t flat = 0; flat < total; ++flat) {
        // decode flat index, last axis fastest
        std::size_t rem = flat;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            idx[a] = rem % spec.axes[a].steps;
            rem /= spec.axes[a].steps;
        }
        ScanPoint& point = result.table[flat];
        point.coords.resize(spec.axes.size());
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            point.coords[a] = spec.axes[a].point(idx[a]);
            pt[spec.axes[a].name] = point.coords[a];
        }
        try {
            point.value = objective(pt);
            point.ok = true;
            ++result.ok_count;
            if (point.value > result.max_value) {
                result.max_value = point.value;
                result.argmax_index = flat;
            }
        } catch (const std::exception& e) {
            point.ok = false;
            point.error = e.what();
        }
    }
    if (result.ok_count == 0) result.max_value = std::numeric_limits<double>::quiet_NaN();
    return result;
}

// ---------------------------------------------------------------------------
// local_maximize (Nelder-Mead with box reflection)
// ---------------------------------------------------------------------------

namespace {

double reflect_into(double x, double lo, double hi) {
    if (lo == hi) return lo;
    for (int guard = 0; guard < 128 && (x < lo || x > hi); ++guard)
        x = (x < lo) ? 2.0 * lo - x : 2.0 * hi - x;
    return std::clamp(x, lo, hi);
}

}  // namespace

MaximizeResult local_maximize(const ScanSpec& spec, const std::map<std::string, double>& start) {
    return local_maximize(spec, make_objective(spec), start);
}

MaximizeResult local_maximize(const ScanSpec& spec, const Objective& objective,
                              const std::map<std::string, double>& start) {
    const std::size_t dim = spec.axes.size();
    if (dim == 0) throw std::invalid_argument("local_maximize: no axes declared");

    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        std::map<std::string, double> pt = spec.params;
        for (std::size_t a = 0; a < dim; ++a) pt[spec.axes[a].name] = x[a];
        try {
            const double v = objective(pt);
            return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::max();
        }
    };

    std::vector<double> x0(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        const auto it = start.find(spec.axes[a].name);
        if (it == start.end())
            throw std::invalid_argument("local_maximize: start point is missing axis '" +
                                        spec.axes[a].name + "'");
        if (it->second < spec.axes[a].lo || it->second > spec.axes[a].hi)
            throw std::invalid_argument("local_maximize: start point outside bounds");
        x0[a] = it->second;
    }
    if (eval(x0) == std::numeric_limits<double>::max())
        throw std::runtime_error("local_maximize: objective is not finite at the start point");

    // initial simplex: 10% of each box width
    std::vector<std::vector<double>> vx(dim + 1, x0);
    std::vector<double> vf(dim + 1);
    for (std::size_t a = 0; a < dim; ++a) {
        const double step = 0.1 * (spec.axes[a].hi - spec.axes[a].lo);
        double& coord = vx[a + 1][a];
        coord = reflect_into(coord + step, spec.axes[a].lo, spec.axes[a].hi);
        if (coord == x0[a]) coord = reflect_into(coord - step, spec.axes[a].lo, spec.axes[a].hi);
    }
    for (std::size_t v = 0; v <= dim; ++v) vf[v] = eval(vx[v]);

    constexpr double alpha_r = 1.0, gamma_e = 2.0, rho_c = 0.5, sigma_s = 0.5;
    constexpr std::size_t max_evals = 2000;
    constexpr double diam_tol = 1e-8;

    auto order = [&]() {
        std::vector<std::size_t> p(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) p[i] = i;
        std::sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return vf[a] < vf[b]; });
        std::vector<std::vector<double>> nx(dim + 1);
        std::vector<double> nf(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            nx[i] = vx[p[i]];
            nf[i] = vf[p[i]];
        }
        vx.swap(nx);
        vf.swap(nf);
    };
    auto diameter = [&]() {
        double d = 0.0;
        for (std::size_t v = 1; v <= dim; ++v)
            for (std::size_t a = 0; a < dim; ++a)
                d = std::max(d, std::abs(vx[v][a] - vx[0][a]));
        return d;
    };

    while (evals < max_evals) {
        order();
        if (diameter() < diam_tol) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v)
            for (std::size_t a = 0; a < dim; ++a) centroid[a] += vx[v][a];
        for (auto& c : centroid) c /= static_cast<double>(dim);

        auto propose = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t a = 0; a < dim; ++a)
                p[a] = reflect_into(centroid[a] + coef * (centroid[a] - vx[dim][a]),
                                    spec.axes[a].lo, spec.axes[a].hi);
            return p;
        };

        const auto xr = propose(alpha_r);
        const double fr = eval(xr);
        if (fr < vf[0]) {
            const auto xe = propose(gamma_e);
            const double fe = eval(xe);
            if (fe < fr) {
                vx[dim] = xe;
                vf[dim] = fe;
            } else {
                vx[dim] = xr;
                vf[dim] = fr;
            }
        } else if (fr < vf[dim - 1]) {
            vx[dim] = xr;
            vf[dim] = fr;
        } else {
            const bool outside = fr < vf[dim];
            const auto xc = propose(outside ? rho_c : -rho_c);
            const double fc = eval(xc);
            if (fc < (outside ? fr : vf[dim])) {
                vx[dim] = xc;
                vf[dim] = fc;
            } else {
                for (std::size_t v = 1; v <= dim; ++v) {
                    for (std::size_t a = 0; a < dim; ++a)
                        vx[v][a] = vx[0][a] + sigma_s * (vx[v][a] - vx[0][a]);
                    vf[v] = eval(vx[v]);
                }
            }
        }
    }
    order();

    MaximizeResult out;
    out.value = -vf[0];
    out.evaluations = evals;
    for (std::size_t a = 0; a < dim; ++a) out.point[spec.axes[a].name] = vx[0][a];
    return out;
}

// ---------------------------------------------------------------------------
// optimum_waist
// ---------------------------------------------------------------------------

WaistOptimum optimum_waist(double h, double pixel_width) {
    if (!(pixel_width > 0.0))
        throw std::invalid_argument("optimum_waist: pixel width must be positive");
    if (h < 0.0 || h > 0.5)
        throw std::invalid_argument("optimum_waist: h must lie in [0, 0.5]");

    auto fisher_of = [&](double waist) {
        return alpha(pixel_width / waist, h) / (waist * waist);
    };

    const double lo = 0.02 * pixel_width;
    const double hi = 5.0 * pixel_width;
    constexpr std::size_t n = 241;
    double best_w = lo, best_f = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
        const double f = fisher_of(w);
        if (f > best_f) {
            best_f = f;
            best_w = w;
            best_i = i;
        }
    }

    WaistOptimum out;
    if (best_i == 0) {
        // information keeps growing as the waist shrinks: boundary supremum
        out.boundary = true;
        out.waist = best_w;
        out.fisher = best_f;
        return out;
    }

    // golden-section refinement inside the bracketing neighbors
    double a = lo * std::pow(hi / lo, static_cast<double>(best_i - 1) / (n - 1));
    double b = lo * std::pow(hi / lo, static_cast<double>(std::min(best_i + 1, n - 1)) / (n - 1));
    constexpr double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = fisher_of(x1), f2 = fisher_of(x2);
    for (int it = 0; it < 120 && (b - a) > 1e-10 * pixel_width; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = fisher_of(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = fisher_of(x1);
        }
    }
    out.waist = 0.5 * (a + b);
    out.fisher = fisher_of(out.waist);
    out.boundary = false;
    return out;
}

// ---------------------------------------------------------------------------
// Spec file parser
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
    throw std::invalid_argument("scan spec line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::size_t line, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) parse_fail(line, "malformed number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(line, "malformed number '" + s + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line, "number out of range '" + s + "'");
    }
}

}  // namespace

ScanSpec parse_scan_spec(std::istream& in) {
    ScanSpec spec;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "objective") {
            spec.objective = value;
        } else if (key == "axis") {
            const auto f = split_fields(value);
            if (f.size() != 4 && f.size() != 5)
                parse_fail(lineno, "axis needs: name, lo, hi, steps[, log]");
            ScanAxis axis;
            axis.name = f[0];
            axis.lo = parse_number(lineno, f[1]);
            axis.hi = parse_number(lineno, f[2]);
            const double steps = parse_number(lineno, f[3]);
            if (steps < 2 || steps != std::floor(steps))
                parse_fail(lineno, "axis steps must be an integer >= 2");
            axis.steps = static_cast<std::size_t>(steps);
            if (f.size() == 5) {
                if (f[4] != "log") parse_fail(lineno, "unknown axis flag '" + f[4] + "'");
                axis.log_spaced = true;
            }
            spec.axes.push_back(axis);
        } else if (key == "param") {
            const auto f = split_fields(value);
            if (f.size() != 2) parse_fail(lineno, "param needs: name, value");
            spec.params[f[0]] = parse_number(lineno, f[1]);
        } else if (key == "constraint") {
            spec.constraints.insert(value);
        } else {
            parse_fail(lineno, "unknown key '" + key + "'");
        }
    }
    if (spec.objective.empty())
        throw std::invalid_argument("scan spec: missing 'objective ='");
    if (spec.axes.empty()) throw std::invalid_argument("scan spec: no axes declared");
    return spec;
}

ScanSpec parse_scan_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scan spec '" + path + "'");
    return parse_scan_spec(in);
}

}  // namespace wva
