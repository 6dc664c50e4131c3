#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace wva {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Implementation interface behind ParametricDensity. Concrete models
/// override the analytic hooks they can support; everything else falls back
/// to quadrature or Richardson differentiation at the call site.
class DensityImpl {
  public:
    virtual ~DensityImpl() = default;

    /// Normalized density at sample point s and parameter g.
    virtual double value(double s, double g) const = 0;

    /// d/dg of value; the default is a Richardson central difference.
    virtual double ddg(double s, double g) const;
    virtual bool has_analytic_ddg() const { return false; }

    /// Integration window containing all but ~1e-22 of the mass at g.
    virtual Interval domain(double g) const = 0;

    /// Statistical velocity for pure-shift families P(s, g) = p(s - nu g).
    virtual std::optional<double> velocity() const { return std::nullopt; }

    /// Branch mass (postselection probability); 1 for unconditioned models.
    virtual double mass(double g) const;
    virtual double mass_ddg(double g) const;

    /// Closed-form Integral_a^b value(s, g) ds where available.
    virtual std::optional<double> interval_mass(double a, double b, double g) const;
    virtual std::optional<double> interval_mass_ddg(double a, double b, double g) const;

    /// First moment of the normalized density; closed form where available.
    virtual std::optional<double> centroid(double g) const;

    /// Closed-form Gaussian-kernel convolution where available (returns the
    /// smeared density; mean shifts the argument as in kernel correlation).
    virtual std::shared_ptr<const DensityImpl> convolved_gaussian(double std_dev,
                                                                  double mean) const;

    virtual std::string describe() const { return "density"; }
};

/// Statistical model P(s|g): a normalized probability density over the
/// sample variable s for every parameter value g, with optional analytic
/// derivative, shift velocity and branch mass. Cheap to copy; immutable.
class ParametricDensity {
  public:
    ParametricDensity() = default;
    explicit ParametricDensity(std::shared_ptr<const DensityImpl> impl)
        : impl_(std::move(impl)) {}

    /// Generic closure constructor for callers outside the model layer.
    ParametricDensity(std::function<double(double, double)> density, Interval base_domain,
                      std::optional<double> velocity = std::nullopt);

    bool valid() const { return impl_ != nullptr; }

    double operator()(double s, double g) const { return impl().value(s, g); }
    double ddg(double s, double g) const { return impl().ddg(s, g); }
    bool has_analytic_ddg() const { return impl().has_analytic_ddg(); }
    Interval domain(double g) const { return impl().domain(g); }
    std::optional<double> velocity() const { return impl().velocity(); }
    double mass(double g) const { return impl().mass(g); }
    double mass_ddg(double g) const { return impl().mass_ddg(g); }
    std::string describe() const { return impl().describe(); }

    /// Integral of the density over [a, b]; closed form when the model has
    /// one, adaptive quadrature otherwise.
    double interval_mass(double a, double b, double g, double tol = 1e-12) const;
    double interval_mass_ddg(double a, double b, double g, double tol = 1e-12) const;

    /// First moment; closed form when the model has one, quadrature otherwise.
    double centroid(double g, double tol = 1e-10) const;

    const DensityImpl& impl() const { return *impl_; }
    std::shared_ptr<const DensityImpl> impl_ptr() const { return impl_; }

  private:
    std::shared_ptr<const DensityImpl> impl_;
};

}  // namespace wva
