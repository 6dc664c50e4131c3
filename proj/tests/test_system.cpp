#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "wva/system.hpp"

using namespace wva;
using std::numbers::pi;

TEST_CASE("weak_value: qubit reference points") {
    // eigenstate preselection
    CHECK(weak_value(QubitAngles::real_family(0.0, 0.0).ensemble()).real() ==
          doctest::Approx(1.0));

    // nearly orthogonal real family: A_w = cos((ti+tf)/2)/cos((tf-ti)/2)
    const double ti = pi / 2.0, tf = ti + pi - 0.02;
    const auto aw = weak_value(QubitAngles::real_family(ti, tf).ensemble());
    CHECK(aw.real() == doctest::Approx(-99.99666664444423).epsilon(1e-12));
    CHECK(aw.real() == doctest::Approx(std::cos((ti + tf) / 2) / std::cos((tf - ti) / 2)));
    CHECK(std::abs(aw.imag()) < 1e-12);

    // imaginary family: Im A_w = -tan(dphi/2)
    const auto awi = weak_value(QubitAngles::imaginary_family(pi / 2.0, 0.0).ensemble());
    CHECK(std::abs(awi.real()) < 1e-12);
    CHECK(awi.imag() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("weak_value: family realness invariants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(0.1, 2.0 * pi - 0.1);
    for (int i = 0; i < 50; ++i) {
        const double a = angle(rng), b = angle(rng);
        const auto real_sys = QubitAngles::real_family(a, b).ensemble();
        if (std::abs(real_sys.pre_post_overlap()) > 1e-3)
            CHECK(std::abs(weak_value(real_sys).imag()) < 1e-12);
        const auto imag_sys = QubitAngles::imaginary_family(a, b).ensemble();
        if (std::abs(imag_sys.pre_post_overlap()) > 1e-3)
            CHECK(std::abs(weak_value(imag_sys).real()) < 1e-12);
    }
}

TEST_CASE("weak_value: orthogonal postselection is undefined") {
    const auto sys = QubitAngles::real_family(0.0, pi).ensemble();
    CHECK_THROWS_WITH_AS(weak_value(sys), doctest::Contains("weak value undefined"),
                         std::runtime_error);
}

TEST_CASE("SystemEnsemble: validation") {
    SystemEnsemble sys;
    sys.eigenvalues = {1.0, -1.0};
    sys.pre_amplitudes = {1.0, 0.0};
    sys.post_amplitudes = {0.5, 0.5};  // not normalized
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
    sys.post_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
    CHECK_NOTHROW(sys.validate());
    sys.eigenvalues.push_back(0.0);
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}

TEST_CASE("SystemEnsemble: filtered eigenvalue breaks ties positive") {
    SystemEnsemble sys;
    sys.eigenvalues = {-1.0, 1.0};
    sys.pre_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
    sys.post_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
    CHECK(sys.filtered_eigenvalue() == 1.0);
    sys.eigenvalues = {-2.0, 1.0};
    CHECK(sys.filtered_eigenvalue() == -2.0);
}

TEST_CASE("SystemEnsemble: orthogonal postselection complement") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto sys = testutil::random_ensemble(rng, 2);
        const auto flipped = sys.with_orthogonal_postselection();
        std::complex<double> overlap = 0.0;
        for (int j = 0; j < 2; ++j)
            overlap += std::conj(flipped.post_amplitudes[j]) * sys.post_amplitudes[j];
        CHECK(std::abs(overlap) < 1e-14);
    }
    const auto big = testutil::random_ensemble(rng, 3);
    CHECK_THROWS_AS(big.with_orthogonal_postselection(), std::invalid_argument);
}

TEST_CASE("Cauchy-Schwarz: q |A_w|^2 <= lambda*^2 on random ensembles") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 400; ++i) {
        const auto sys = testutil::random_ensemble(rng, 2 + (i % 4));
        const double lhs = std::norm(sys.observable_matrix_element());
        const double lstar = sys.filtered_eigenvalue();
        CHECK(lhs <= lstar * lstar + 1e-10);
    }
}

TEST_CASE("branch-resolved weak values resolve to <A^2> for qubits") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 100; ++i) {
        const auto sys = testutil::random_ensemble(rng, 2);
        const auto failed = sys.with_orthogonal_postselection();
        const double total = std::norm(sys.observable_matrix_element()) +
                             std::norm(failed.observable_matrix_element());
        CHECK(total == doctest::Approx(sys.mean_square_eigenvalue()).epsilon(1e-10));
    }
}
