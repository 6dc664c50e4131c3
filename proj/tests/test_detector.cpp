#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "wva/detector.hpp"
#include "wva/fisher.hpp"
#include "wva/model.hpp"
#include "wva/numerics.hpp"

using namespace wva;

TEST_CASE("pixelate: boundary-centered Gaussian splits across two huge pixels") {
    const auto family = shift_family(MeterState::gaussian(1.0), 1.0);
    const double r = 1000.0;
    // detector displaced so that s = 0 is a pixel boundary
    const PixelConfig cfg{r, r / 2.0, std::nullopt};
    const auto mass = pixelate(family, cfg, 0.0);
    REQUIRE(mass.probabilities.size() == 2);
    CHECK(mass.probabilities.at(-1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass.probabilities.at(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pixelate: central pixel mass at R = 1, h = 0") {
    const auto meter = MeterState::gaussian(1.0);
    const auto family = shift_family(meter, 1.0);
    const auto mass = pixelate(family, PixelConfig{1.0, 0.0, std::nullopt}, 0.0);
    CHECK(mass.probabilities.at(0) == doctest::Approx(0.3829249225480261).epsilon(1e-12));

    // quadrature oracle on the defining integral
    const double oracle =
        integrate([&](double s) { return meter.density(s); }, -0.5, 0.5, 1e-13).value;
    CHECK(mass.probabilities.at(0) == doctest::Approx(oracle).epsilon(1e-11));

    double total = 0.0;
    for (const auto& [n, p] : mass.probabilities) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("pixelate: fine pixels recover the continuous information") {
    const auto family = shift_family(MeterState::gaussian(1.0), 1.0);
    const auto mass = pixelate(family, PixelConfig{0.05, 0.0, std::nullopt}, 0.3);
    const double discrete = fisher_discrete(mass).value;
    const double continuous = fisher_continuous(family, 0.3).value;
    CHECK(discrete == doctest::Approx(continuous).epsilon(0.01));
}

TEST_CASE("pixelate: explicit range that drops mass raises") {
    const auto family = shift_family(MeterState::gaussian(1.0), 1.0);
    PixelConfig cfg{0.5, 0.0, std::make_pair<std::int64_t, std::int64_t>(-1, 1)};
    CHECK_THROWS_WITH_AS(pixelate(family, cfg, 0.0), doctest::Contains("pixel range too small"),
                         std::runtime_error);
}

TEST_CASE("pixelate: relabeling leaves the discrete information unchanged") {
    const auto family = shift_family(MeterState::gaussian(0.7), 2.5);
    const auto mass = pixelate(family, PixelConfig{0.4, 0.13, std::nullopt}, 0.37);
    const double f0 = fisher_discrete(mass).value;

    PixelMass relabeled;
    relabeled.truncated_mass = mass.truncated_mass;
    for (const auto& [n, p] : mass.probabilities) relabeled.probabilities[n + 1234] = p;
    for (const auto& [n, d] : mass.d_dg) relabeled.d_dg[n + 1234] = d;
    CHECK(fisher_discrete(relabeled).value == doctest::Approx(f0).epsilon(1e-15));

    // displacing the detector by a whole pixel only relabels the clicks
    const auto shifted =
        pixelate(family, PixelConfig{0.4, 0.13 + 7 * 0.4, std::nullopt}, 0.37);
    CHECK(fisher_discrete(shifted).value == doctest::Approx(f0).epsilon(1e-9));
}

TEST_CASE("pixelation commutes with the amplification factor") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto meter = MeterState::gaussian(1.0);
    for (int i = 0; i < 10; ++i) {
        const double nu = 0.1 * std::pow(1000.0, unit(rng));  // [0.1, 100]
        const double g = 0.05 + unit(rng);
        const double r = 0.3 + 2.0 * unit(rng);
        const double mu = 4.0 * unit(rng) - 2.0;

        const auto amplified = shift_family(meter, nu);
        const double fg =
            fisher_discrete(pixelate(amplified, PixelConfig{r, mu, std::nullopt}, g)).value;

        double tau = std::fmod(nu * g - mu, r);
        if (tau < 0.0) tau += r;
        const auto unit_family = shift_family(meter, 1.0);
        const double fs =
            fisher_discrete(pixelate(unit_family, PixelConfig{r, 0.0, std::nullopt}, tau)).value;

        CHECK(fg == doctest::Approx(nu * nu * fs).epsilon(1e-6));
    }
}

TEST_CASE("apply_jitter: zero kernel is the identity") {
    const auto family = shift_family(MeterState::gaussian(1.0), 1.0);
    const auto same = apply_jitter(family, NoiseKernel::gaussian(0.0));
    CHECK(same.impl_ptr() == family.impl_ptr());
}

TEST_CASE("apply_jitter: Gaussian-on-Gaussian widens in closed form") {
    const auto family = shift_family(MeterState::gaussian(3.0), 1.0);
    const auto smeared = apply_jitter(family, NoiseKernel::gaussian(4.0));
    const auto wide = shift_family(MeterState::gaussian(5.0), 1.0);
    for (double s : {-6.0, -1.0, 0.0, 2.5, 8.0})
        CHECK(smeared(s, 0.4) == doctest::Approx(wide(s, 0.4)).epsilon(1e-12));
    CHECK(smeared.velocity().value() == doctest::Approx(1.0));
}

TEST_CASE("apply_jitter: kernel quadrature path matches the closed form") {
    // tabulated meter forces the numeric route
    const auto family = shift_family(testutil::tabulated_gaussian(3.0, 0.0, 40.0), 1.0);
    const auto smeared = apply_jitter(family, NoiseKernel::gaussian(4.0));
    const auto wide = shift_family(MeterState::gaussian(5.0), 1.0);
    for (double s : {-5.0, 0.0, 1.7, 6.0})
        CHECK(smeared(s, 0.2) == doctest::Approx(wide(s, 0.2)).epsilon(1e-6));

    const Interval dom = smeared.domain(0.2);
    const double norm =
        integrate([&](double s) { return smeared(s, 0.2); }, dom.lo, dom.hi, 1e-10).value;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("apply_jitter: nonzero-mean kernel displaces but keeps the information") {
    const auto family = shift_family(MeterState::gaussian(1.0), 1.0);
    const auto kernel = NoiseKernel::gaussian(0.8, 2.5);
    const auto smeared = apply_jitter(family, kernel);
    // correlation convention: Int P(s + u) N(u) du moves the centroid by -mean
    CHECK(smeared.centroid(0.3) == doctest::Approx(0.3 - 2.5).epsilon(1e-9));
    const double f = fisher_continuous(smeared, 0.3).value;
    const auto centered = apply_jitter(family, NoiseKernel::gaussian(0.8, 0.0));
    CHECK(f == doctest::Approx(fisher_continuous(centered, 0.3).value).epsilon(1e-9));
}

TEST_CASE("jitter commutes with the amplification factor (tabulated kernel)") {
    // asymmetric triangular kernel with nonzero mean
    Grid kgrid(-0.5, 1.5, 64);
    std::vector<double> weights(kgrid.n);
    for (std::size_t i = 0; i < kgrid.n; ++i) {
        const double u = kgrid.point(i);
        weights[i] = std::max(0.0, u < 0.3 ? (u + 0.5) : 1.5 * (1.5 - u));
    }
    const auto kernel = NoiseKernel::tabulated(kgrid, weights);
    CHECK(kernel.mean() != 0.0);

    const auto meter = MeterState::gaussian(1.0);
    for (double nu : {0.4, 3.0, 20.0}) {
        const auto family = shift_family(meter, nu);
        const auto smeared = apply_jitter(family, kernel);
        const double fg = fisher_continuous(smeared, 0.21).value;
        const auto base = apply_jitter(shift_family(meter, 1.0), kernel);
        const double fs = fisher_continuous(base, 0.0).value;
        CHECK(fg == doctest::Approx(nu * nu * fs).epsilon(1e-6));
    }
}

TEST_CASE("alignment_of folds into [0, 0.5]") {
    const PixelConfig cfg{1.0, 0.0, std::nullopt};
    CHECK(alignment_of(1.0, 0.0, cfg) == 0.0);                       // centroid mid-pixel
    CHECK(alignment_of(1.0, 0.5, cfg) == doctest::Approx(0.5));      // on a boundary
    CHECK(alignment_of(1.0, 0.75, cfg) == doctest::Approx(0.25));    // reflection fold
    CHECK(alignment_of(2.0, -0.375, cfg) == doctest::Approx(0.25));  // negative side
    const PixelConfig displaced{0.4, 0.1, std::nullopt};
    CHECK(alignment_of(1.0, 0.1, displaced) == doctest::Approx(0.0));
}
