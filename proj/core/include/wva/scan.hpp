#pragma once

#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wva {

struct ScanAxis {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t steps = 2;  // >= 2
    bool log_spaced = false;

    double point(std::size_t i) const;
};

/// Declarative description of a parameter-space exploration: a lattice over
/// named axes, a named objective pipeline, fixed parameters and named
/// constraints (e.g. "equal-h", "couple-jitter") that the objective
/// enforces during evaluation.
struct ScanSpec {
    std::string objective;
    std::vector<ScanAxis> axes;
    std::map<std::string, double> params;
    std::set<std::string> constraints;

    std::size_t lattice_size() const;
};

struct ScanPoint {
    std::vector<double> coords;
    double value = 0.0;
    bool ok = false;
    std::string error;
};

struct ScanResult {
    std::vector<ScanPoint> table;  // lattice order, last axis fastest
    std::size_t argmax_index = 0;
    double max_value = 0.0;
    std::size_t ok_count = 0;

    const ScanPoint& argmax() const { return table.at(argmax_index); }
};

/// Objective evaluated at a named point of the parameter space.
using Objective = std::function<double(const std::map<std::string, double>&)>;

/// Resolves a named objective from the built-in registry, binding the
/// spec's params and constraints. Throws std::invalid_argument for unknown
/// names or unsupported constraints.
Objective make_objective(const ScanSpec& spec);

/// Lists the registered objective names.
std::vector<std::string> objective_names();

/// Evaluates the objective at every lattice point. Per-point failures are
/// recorded in the table and do not abort the scan. Deterministic: the
/// table is keyed by lattice index regardless of evaluation order.
ScanResult grid_scan(const ScanSpec& spec);
ScanResult grid_scan(const ScanSpec& spec, const Objective& objective);

struct MaximizeResult {
    std::map<std::string, double> point;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Derivative-free simplex (Nelder-Mead) ascent on the objective within the
/// axis boxes; out-of-box proposals are reflected back inside. Terminates
/// when the simplex diameter falls below 1e-8 or after 2000 evaluations.
MaximizeResult local_maximize(const ScanSpec& spec, const Objective& objective,
                              const std::map<std::string, double>& start);
MaximizeResult local_maximize(const ScanSpec& spec,
                              const std::map<std::string, double>& start);

struct WaistOptimum {
    double waist = 0.0;
    double fisher = 0.0;
    /// True when the supremum sits on the small-waist boundary of the
    /// search range rather than at an interior optimum.
    bool boundary = false;
};

/// Waist maximizing the pixelated-Gaussian Fisher information at fixed
/// pixel width and alignment h in [0, 0.5].
WaistOptimum optimum_waist(double h, double pixel_width);

/// Parses the plain-text key=value scan format:
///   objective = <name>
///   axis = <name>, <lo>, <hi>, <steps>[, log]
///   param = <name>, <value>
///   constraint = <name>
/// Lines starting with '#' and blank lines are ignored. Errors carry the
/// line number.
ScanSpec parse_scan_spec(std::istream& in);
ScanSpec parse_scan_spec_file(const std::string& path);

}  // namespace wva
