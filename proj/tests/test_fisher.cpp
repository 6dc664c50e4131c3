#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "wva/fisher.hpp"
#include "wva/model.hpp"
#include "wva/numerics.hpp"

using namespace wva;
using std::numbers::pi;

TEST_CASE("fisher_continuous: Gaussian closed form 1/waist^2") {
    const auto family = shift_family(MeterState::gaussian(2.0), 1.0);
    CHECK(fisher_continuous(family, 0.2).value == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("fisher_continuous: shift families are parameter-independent") {
    const auto family = shift_family(MeterState::gaussian(1.3), 2.0);
    const double f1 = fisher_continuous(family, 0.001).value;
    const double f2 = fisher_continuous(family, 0.7).value;
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-8));
}

TEST_CASE("fisher_continuous: jittered Gaussian Lorentzian law") {
    const auto family = shift_family(MeterState::gaussian(3.0), 1.0);
    const auto smeared = apply_jitter(family, NoiseKernel::gaussian(4.0));
    CHECK(fisher_continuous(smeared, 0.1).value == doctest::Approx(0.04).epsilon(1e-8));
}

TEST_CASE("velocity law on random tabulated meters") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const auto meter = testutil::random_meter(rng);
        const double nu = 0.1 * std::pow(1000.0, unit(rng));
        const double g = 0.02 + 0.2 * unit(rng);
        const double fg = fisher_continuous(shift_family(meter, nu), g).value;
        const double fs = fisher_continuous(shift_family(meter, 1.0), 0.0).value;
        CHECK(fg == doctest::Approx(nu * nu * fs).epsilon(1e-7));
    }
}

TEST_CASE("fisher_discrete: split detector keeps 2/pi of the information") {
    const auto family = shift_family(MeterState::gaussian(1.0), 1.0);
    const double r = 1000.0;
    const auto mass = pixelate(family, PixelConfig{r, r / 2.0, std::nullopt}, 0.0);
    CHECK(fisher_discrete(mass).value ==
          doctest::Approx(2.0 / pi).epsilon(1e-9));

    // a single pixel holding all the mass carries no information
    const auto lump = pixelate(family, PixelConfig{r, 0.0, std::nullopt}, 0.0);
    REQUIRE(lump.probabilities.size() == 1);
    CHECK(fisher_discrete(lump).value == 0.0);
}

TEST_CASE("fisher_joint: real qubit family carries the full shift information") {
    const auto meter = MeterState::gaussian(1.4);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(0.25, 2.9);
    for (int i = 0; i < 5; ++i) {
        const double ti = angle(rng), tf = angle(rng);
        const auto sys = QubitAngles::real_family(ti, tf).ensemble();
        const auto pass = exact_wva_density(sys, meter, Branch::pass);
        const auto fail = exact_wva_density(sys, meter, Branch::fail);
        const double f = fisher_joint(pass, fail, 0.7).value;
        CHECK(f == doctest::Approx(1.0 / (1.4 * 1.4)).epsilon(1e-6));
    }
}

TEST_CASE("fisher_joint: imaginary family equals 4 <k^2>") {
    const auto meter = MeterState::gaussian(1.0);  // waist_k = 1/2, 4<k^2> = 1
    const auto sys = QubitAngles::imaginary_family(1.3, 0.0).ensemble();
    const auto pass = exact_wva_density(sys, meter, Branch::pass, Representation::momentum);
    const auto fail = exact_wva_density(sys, meter, Branch::fail, Representation::momentum);
    CHECK(fisher_joint(pass, fail, 0.4).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fisher_joint: an empty branch reduces to the other branch") {
    const auto meter = MeterState::gaussian(1.0);
    const auto sys = QubitAngles::real_family(0.0, 0.0).ensemble();
    const auto pass = exact_wva_density(sys, meter, Branch::pass);
    const auto fail = exact_wva_density(sys, meter, Branch::fail);
    const double joint = fisher_joint(pass, fail, 0.5).value;
    CHECK(joint == doctest::Approx(fisher_continuous(pass, 0.5).value).epsilon(1e-9));
}

TEST_CASE("fisher_joint: branch cross-term cancels between pass and fail") {
    const auto meter = MeterState::gaussian(1.0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> angle(0.3, 2.8);
    for (int i = 0; i < 5; ++i) {
        const double ti = angle(rng), tf = angle(rng), g = 0.6;
        const double a = std::cos(ti / 2), b = std::sin(ti / 2);
        const double c = std::cos(tf / 2), d = std::sin(tf / 2);
        const double kappa_pass = (a * c) * (b * d);
        const double kappa_fail = (-a * d) * (b * c);
        const double cross =
            integrate(
                [&](double x) {
                    const double dp = meter.amplitude_derivative(x - g).real();
                    const double dm = -meter.amplitude_derivative(x + g).real();
                    return dp * dm;
                },
                -14.0, 14.0, 1e-12)
                .value;
        CHECK(std::abs(8.0 * (kappa_pass + kappa_fail) * cross) < 1e-10);
    }
}

TEST_CASE("ratio_real_exact: limiting slices") {
    for (double G : {0.01, 1.0, 7.0}) {
        CHECK(ratio_real_exact(G, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double tf : {0.4, 2.0, 4.4}) {
            const double c = std::cos(tf / 2);
            CHECK(ratio_real_exact(G, 0.0, tf) == doctest::Approx(c * c).epsilon(1e-12));
        }
    }
    CHECK(ratio_real_exact(50.0, pi / 2, pi / 2) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(ratio_real_exact(1e9, pi / 2, pi / 2) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ratio_real_exact: symmetry and the unity bound") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ui(0.0, pi), uf(0.0, 2 * pi), ug(0.001, 20.0);
    for (int i = 0; i < 300; ++i) {
        const double ti = ui(rng), tf = uf(rng), G = ug(rng);
        const double r = ratio_real_exact(G, ti, tf);
        CHECK(r <= 1.0 + 1e-9);
        CHECK(r == doctest::Approx(ratio_real_exact(G, tf, ti)).epsilon(1e-12));
        CHECK(r == doctest::Approx(ratio_real_exact(G, ti + pi, tf + pi)).epsilon(1e-9));
    }
}

TEST_CASE("ratio_real_exact agrees with the quadrature pipeline") {
    const double waist = 1.0;
    const auto meter = MeterState::gaussian(waist);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> ui(0.2, pi - 0.2), uf(0.2, 2 * pi - 0.2),
        ug(0.05, 6.0);
    for (int i = 0; i < 6; ++i) {
        const double ti = ui(rng), tf = uf(rng), G = ug(rng);
        const double g = InteractionConfig::coupling_for_strength(G, waist);
        const auto sys = QubitAngles::real_family(ti, tf).ensemble();
        RatioOptions opts;
        opts.wva_representation = Representation::position;
        const auto report = corrected_ratio(sys, meter, g, opts);
        CHECK(report.corrected_ratio ==
              doctest::Approx(ratio_real_exact(G, ti, tf)).epsilon(1e-6));
    }
}

TEST_CASE("ratio_imag_exact: asymptotics resolve the printed-form ambiguity") {
    const double G = 1e-3;
    CHECK(ratio_imag_exact(G, 0.0) == doctest::Approx(G / 2).epsilon(0.01));
    CHECK(ratio_imag_exact(G, pi) == doctest::Approx(G * G / 24.0).epsilon(0.01));
    CHECK(ratio_imag_exact(50.0, pi) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(ratio_imag_exact(1e9, pi) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ratio_imag_exact: unity bound over the (G, dphi) plane") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> up(0.0, 2 * pi), ug(0.001, 20.0);
    for (int i = 0; i < 300; ++i) {
        CHECK(ratio_imag_exact(ug(rng), up(rng)) <= 1.0 + 1e-9);
    }
}

TEST_CASE("ratio_imag_exact agrees with the quadrature pipeline") {
    const auto meter = MeterState::gaussian(1.0);
    for (double dphi : {0.0, 1.2, pi, 4.7}) {
        for (double G : {0.05, 1.0, 4.0}) {
            const double g = InteractionConfig::coupling_for_strength(G, 1.0);
            const auto sys = QubitAngles::imaginary_family(dphi, 0.0).ensemble();
            const auto report = corrected_ratio(sys, meter, g);
            CHECK(report.corrected_ratio ==
                  doctest::Approx(ratio_imag_exact(G, dphi)).epsilon(1e-6));
        }
    }
}

TEST_CASE("alpha: split-detector and fine-pixel limits") {
    CHECK(alpha(200.0, 0.5) == doctest::Approx(2.0 / pi).epsilon(1e-3));
    for (double h : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5})
        CHECK(alpha(0.05, h) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(alpha(200.0, 0.0) < 1e-12);

    // monotone non-increasing in R at h = 0.5; h = 0.5 dominates for coarse pixels
    double prev = 1.0;
    for (double R : {0.1, 0.5, 1.0, 3.0, 10.0, 50.0}) {
        const double a = alpha(R, 0.5);
        CHECK(a <= prev + 1e-12);
        prev = a;
    }
    for (double R : {3.0, 8.0, 30.0})
        for (double h : {0.0, 0.1, 0.25, 0.4})
            CHECK(alpha(R, 0.5) >= alpha(R, h));
}

TEST_CASE("beta: Gaussian jitter attenuation") {
    CHECK(beta(1.0, 0.0) == 1.0);
    CHECK(beta(2.0, 2.0) == doctest::Approx(0.5));
    CHECK(beta(1.0, 3.0) == doctest::Approx(0.1));
}

TEST_CASE("cramer_rao_bound") {
    FisherReport f;
    f.value = 4.0;
    CHECK(cramer_rao_bound(f, 1) == doctest::Approx(0.25));
    CHECK(cramer_rao_bound(f, 2) == doctest::Approx(0.125));
    f.value = 1.0;
    CHECK(cramer_rao_bound(f, 10000) == doctest::Approx(1e-4));
    f.value = 0.0;
    CHECK(std::isinf(cramer_rao_bound(f, 5)));
}

TEST_CASE("corrected_ratio: ideal detector in the linear regime") {
    const auto meter = MeterState::gaussian(1.0);
    const auto sys = QubitAngles::real_family(1.1, 2.3).ensemble();
    RatioOptions opts;
    opts.regime = Regime::aav;
    const auto report = corrected_ratio(sys, meter, 0.01, opts);
    const double expected = std::pow(sys.observable_matrix_element().real(), 2);
    CHECK(report.corrected_ratio == doctest::Approx(expected).epsilon(1e-7));
    CHECK(report.corrected_ratio <= 1.0 + 1e-9);
}

TEST_CASE("corrected_ratio: identical jitter on both arms cancels") {
    const auto meter = MeterState::gaussian(1.0);
    const auto sys = QubitAngles::real_family(1.1, 2.3).ensemble();
    RatioOptions ideal;
    ideal.regime = Regime::aav;
    const double bare = corrected_ratio(sys, meter, 0.01, ideal).corrected_ratio;

    RatioOptions noisy = ideal;
    noisy.wva_arm.jitter = NoiseKernel::gaussian(2.0);
    noisy.std_arm.jitter = NoiseKernel::gaussian(2.0);
    const double with_noise = corrected_ratio(sys, meter, 0.01, noisy).corrected_ratio;
    CHECK(with_noise == doctest::Approx(bare).epsilon(1e-6));

    // exact pipeline, same cancellation
    RatioOptions exact;
    exact.wva_arm.jitter = NoiseKernel::gaussian(2.0);
    exact.std_arm.jitter = NoiseKernel::gaussian(2.0);
    const double exact_noisy = corrected_ratio(sys, meter, 0.9, exact).corrected_ratio;
    const double exact_bare = corrected_ratio(sys, meter, 0.9).corrected_ratio;
    CHECK(exact_noisy == doctest::Approx(exact_bare).epsilon(1e-6));
}

TEST_CASE("corrected_ratio: imaginary family ideal case (Heisenberg factor is one)") {
    const auto meter = MeterState::gaussian(1.0);
    const auto sys = QubitAngles::imaginary_family(pi / 3, 0.0).ensemble();
    RatioOptions opts;
    opts.regime = Regime::aav;
    const auto report = corrected_ratio(sys, meter, 0.01, opts);
    const double q0 = std::norm(sys.pre_post_overlap());
    const double im = weak_value(sys).imag();
    CHECK(report.corrected_ratio == doctest::Approx(q0 * im * im).epsilon(1e-7));
}

TEST_CASE("fisher of a mixture never exceeds the best component") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        const double w = 0.1 + 0.8 * unit(rng);
        const double d1 = 0.5 + unit(rng), d2 = 0.5 + unit(rng);
        const double v1 = -2.0 + 4.0 * unit(rng), v2 = -2.0 + 4.0 * unit(rng);
        ParametricDensity mix(
            [=](double s, double g) {
                const auto p = [](double x, double sd) {
                    return std::exp(-0.5 * x * x / (sd * sd)) /
                           (std::sqrt(2.0 * std::numbers::pi) * sd);
                };
                return w * p(s - v1 * g, d1) + (1.0 - w) * p(s - v2 * g, d2);
            },
            Interval{-30.0, 30.0});
        const double fm = fisher_continuous(mix, 0.4, {1e-9, 1e-15}).value;
        const double best = std::max(v1 * v1 / (d1 * d1), v2 * v2 / (d2 * d2));
        CHECK(fm <= best * (1.0 + 1e-6));
    }
}

TEST_CASE("standard mixture is never better than the filtered strategy") {
    const auto meter = MeterState::gaussian(1.0);
    SystemEnsemble sys;
    sys.eigenvalues = {1.0, -1.0};
    sys.pre_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
    sys.post_amplitudes = {1.0, 0.0};
    const double f_mix = fisher_continuous(standard_density(sys, meter, false), 0.8).value;
    const double f_filtered = fisher_continuous(standard_density(sys, meter, true), 0.8).value;
    CHECK(f_mix <= f_filtered + 1e-9);
    CHECK(f_filtered == doctest::Approx(1.0).epsilon(1e-8));
}
