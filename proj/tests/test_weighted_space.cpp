#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "talenti/model_space.hpp"
#include "talenti/weighted_space.hpp"

using namespace talenti;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("interval measures on built-in families") {
    const auto model2 = WeightedHalfLine::model(2.0);
    CHECK(model2.measure_of_interval(0.0, 1.0) ==
          doctest::Approx(kPi).epsilon(1e-12));
    CHECK(model2.measure_of_interval(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(model2.measure_of_interval(2.0, 1.0),
                    std::invalid_argument);

    // eps = 0 reduces to the model space.
    const auto eps0 = WeightedHalfLine::perturbed_cone(2.0, 0.0);
    CHECK(eps0.measure_of_interval(0.5, 2.0) ==
          doctest::Approx(model2.measure_of_interval(0.5, 2.0))
              .epsilon(1e-12));

    // Model(N): H(b) - H(a) = omega_N (b^N - a^N).
    const auto model37 = WeightedHalfLine::model(3.7);
    const double want = omega_n(3.7) * (std::pow(2.5, 3.7) - std::pow(1.0, 3.7));
    CHECK(model37.measure_of_interval(1.0, 2.5) ==
          doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("cumulative inverse round-trips on quadrature-backed families") {
    const auto space = WeightedHalfLine::perturbed_cone(2.0, 0.5);
    for (double t : {0.1, 0.7, 2.0, 9.0}) {
        const double m = space.cumulative(t);
        CHECK(space.cumulative_inverse(m) ==
              doctest::Approx(t).epsilon(1e-9));
    }
}

TEST_CASE("CD(0,N) admissibility of built-in and bespoke densities") {
    const auto model2 = WeightedHalfLine::model(2.0);
    CHECK(check_cd0n(model2, 0.01).admissible);

    // h = 2 pi (t + eps(1 - e^{-t})): second derivative of h^{1/(N-1)} is
    // -eps e^{-t} <= 0.
    const auto concave = WeightedHalfLine::from_density(
        2.0, "shifted", [](double t) {
            return 2.0 * kPi * (t + 0.5 * (1.0 - std::exp(-t)));
        });
    CHECK(check_cd0n(concave, 0.01).admissible);

    // h = 2 pi t (1 + 0.5 e^{-t}): second derivative 0.5 e^{-t}(t - 2) > 0
    // past t = 2.
    const auto bumped = WeightedHalfLine::from_density(
        2.0, "bumped", [](double t) {
            return 2.0 * kPi * t * (1.0 + 0.5 * std::exp(-t));
        });
    const auto report = check_cd0n(bumped, 0.01);
    CHECK_FALSE(report.admissible);
    CHECK(report.worst_second_difference > report.tolerance);
}

TEST_CASE("perturbed cone family is CD(0,N) for every ladder epsilon") {
    for (double eps : {0.0, 0.125, 0.25, 0.5, 1.0}) {
        CHECK(check_cd0n(WeightedHalfLine::perturbed_cone(2.0, eps), 0.01)
                  .admissible);
    }
}

TEST_CASE("AVR estimates") {
    CHECK(avr_estimate(WeightedHalfLine::model(3.0), 100.0).value ==
          doctest::Approx(1.0).epsilon(1e-8));

    // h_eps ~ h_N(t + eps) at infinity, so the volume ratio tends to 1.
    const auto pc = WeightedHalfLine::perturbed_cone(2.0, 0.5);
    const auto est = avr_estimate(pc, 1e4);
    CHECK(est.stabilized);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-4));

    // Sector as half-line: h = theta t, AVR = theta / (2 pi).
    const double theta = 1.1;
    const auto sector = WeightedHalfLine::cone(2.0, theta);
    CHECK(avr_estimate(sector, 100.0).value ==
          doctest::Approx(theta / (2.0 * kPi)).epsilon(1e-10));
    CHECK(*sector.analytic_avr() ==
          doctest::Approx(theta / (2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("AVR is scale covariant") {
    const auto base = WeightedHalfLine::perturbed_cone(2.0, 0.25);
    const double ref = avr_estimate(base, 2000.0).value;
    for (double s : {0.5, 2.0}) {
        const auto scaled = WeightedHalfLine::from_density(
            2.0, "scaled", [s](double t) {
                const double N = 2.0;
                return s * N * omega_n(N) *
                       std::pow(t + 0.25 * (1.0 - std::exp(-t)), N - 1.0);
            });
        CHECK(avr_estimate(scaled, 2000.0).value ==
              doctest::Approx(s * ref).epsilon(1e-6));
    }
}

TEST_CASE("cone distance proxy vanishes exactly on cones") {
    CHECK(cone_distance_proxy(WeightedHalfLine::model(2.0), 5.0) <= 1e-12);
    CHECK(cone_distance_proxy(WeightedHalfLine::cone(2.0, 0.4), 7.0) <=
          1e-12);
    CHECK(cone_distance_proxy(WeightedHalfLine::cone(3.0, 11.0), 3.0) <=
          1e-11);
}

TEST_CASE("cone distance proxy is positive and monotone in epsilon") {
    const double T = 10.0;
    double prev = 0.0;
    for (double eps : {0.0, 0.125, 0.25, 0.5, 1.0}) {
        const double d = cone_distance_proxy(
            WeightedHalfLine::perturbed_cone(2.0, eps), T);
        if (eps == 0.0) {
            CHECK(d <= 1e-12);
        } else {
            CHECK(d > prev);
        }
        prev = d;
    }
}

TEST_CASE("tabulated densities interpolate linearly") {
    // Samples of h(t) = 4t on [0, 10].
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 100; ++i) {
        samples.emplace_back(0.1 * i, 0.4 * i);
    }
    const auto tab = WeightedHalfLine::from_samples(2.0, samples);
    CHECK(tab.density(0.55) == doctest::Approx(2.2).epsilon(1e-12));
    CHECK(tab.cumulative(1.0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(check_cd0n(tab, 0.05, 9.5).admissible);
}
