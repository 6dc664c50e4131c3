#include "wva/density.hpp"

#include <cmath>
#include <stdexcept>

#include "wva/numerics.hpp"

namespace wva {

double DensityImpl::ddg(double s, double g) const {
    return central_derivative([&](double gg) { return value(s, gg); }, g);
}

double DensityImpl::mass(double) const { return 1.0; }

double DensityImpl::mass_ddg(double g) const {
    return central_derivative([&](double gg) { return mass(gg); }, g);
}

std::optional<double> DensityImpl::interval_mass(double, double, double) const {
    return std::nullopt;
}

std::optional<double> DensityImpl::interval_mass_ddg(double, double, double) const {
    return std::nullopt;
}

std::optional<double> DensityImpl::centroid(double) const { return std::nullopt; }

std::shared_ptr<const DensityImpl> DensityImpl::convolved_gaussian(double, double) const {
    return nullptr;
}

namespace {

class ClosureImpl final : public DensityImpl {
  public:
    ClosureImpl(std::function<double(double, double)> density, Interval base,
                std::optional<double> velocity)
        : density_(std::move(density)), base_(base), velocity_(velocity) {}

    double value(double s, double g) const override { return density_(s, g); }

    Interval domain(double g) const override {
        if (velocity_) {
            const double shift = *velocity_ * g;
            return {base_.lo + shift, base_.hi + shift};
        }
        return base_;
    }

    std::optional<double> velocity() const override { return velocity_; }
    std::string describe() const override { return "closure"; }

  private:
    std::function<double(double, double)> density_;
    Interval base_;
    std::optional<double> velocity_;
};

}  // namespace

ParametricDensity::ParametricDensity(std::function<double(double, double)> density,
                                     Interval base_domain, std::optional<double> velocity)
    : impl_(std::make_shared<ClosureImpl>(std::move(density), base_domain, velocity)) {}

double ParametricDensity::interval_mass(double a, double b, double g, double tol) const {
    if (auto closed = impl().interval_mass(a, b, g)) return *closed;
    return integrate([&](double s) { return impl().value(s, g); }, a, b, tol).value;
}

double ParametricDensity::interval_mass_ddg(double a, double b, double g, double tol) const {
    if (auto closed = impl().interval_mass_ddg(a, b, g)) return *closed;
    if (auto nu = impl().velocity()) {
        // d/dg Int_a^b p(s - nu g) ds = -nu [p(b - nu g) - p(a - nu g)]
        return -*nu * (impl().value(b, g) - impl().value(a, g));
    }
    if (impl().has_analytic_ddg())
        return integrate([&](double s) { return impl().ddg(s, g); }, a, b, tol).value;
    return central_derivative([&](double gg) { return interval_mass(a, b, gg, tol); }, g);
}

double ParametricDensity::centroid(double g, double tol) const {
    if (auto closed = impl().centroid(g)) return *closed;
    const Interval dom = domain(g);
    return integrate([&](double s) { return s * impl().value(s, g); }, dom.lo, dom.hi, tol)
        .value;
}

}  // namespace wva
