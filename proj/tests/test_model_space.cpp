#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "talenti/model_space.hpp"
#include "talenti/quadrature.hpp"

using namespace talenti;

namespace {

constexpr double kPi = std::numbers::pi;

// Defining-integral oracle: omega_N = pi^{N/2} / int_0^inf t^{N/2} e^{-t} dt.
// The integrand below 1e-30 of its peak past t = 90 for the N used here.
double omega_n_by_quadrature(double N) {
    const double denom = integrate(
        [N](double t) { return std::pow(t, 0.5 * N) * std::exp(-t); }, 0.0,
        90.0, 1e-13, 1e-16);
    return std::pow(kPi, 0.5 * N) / denom;
}

}  // namespace

TEST_CASE("omega_N at integer dimensions") {
    CHECK(std::fabs(omega_n(2.0) - kPi) <= 1e-12 * kPi);
    CHECK(std::fabs(omega_n(4.0) - kPi * kPi / 2.0) <= 1e-12 * kPi * kPi);
    CHECK(std::fabs(omega_n(3.0) - 4.0 * kPi / 3.0) <= 1e-12 * kPi);
}

TEST_CASE("omega_N against the defining integral") {
    for (double N : {1.5, 2.0, 3.0, 3.7, 5.0, 9.5}) {
        const double oracle = omega_n_by_quadrature(N);
        CHECK(std::fabs(omega_n(N) - oracle) <= 1e-12 * oracle);
    }
}

TEST_CASE("omega_N rejects bad dimensions") {
    CHECK_THROWS_AS(omega_n(1.0), std::domain_error);
    CHECK_THROWS_AS(omega_n(0.5), std::domain_error);
    CHECK_THROWS_AS(omega_n(std::nan("")), std::domain_error);
}

TEST_CASE("model density h_N") {
    CHECK(h_n(2.0, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(h_n(2.0, 0.0) == 0.0);
    CHECK(h_n(3.0, 2.0) == doctest::Approx(16.0 * kPi).epsilon(1e-13));
}

TEST_CASE("cumulative measure and its inverse") {
    CHECK(big_h_n(2.0, 1.0) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(big_h_inv(2.0, kPi) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(big_h_n(3.0, 2.0) ==
          doctest::Approx(32.0 * kPi / 3.0).epsilon(1e-13));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xs(1e-3, 50.0);
    std::uniform_real_distribution<double> ns(1.1, 8.0);
    for (int k = 0; k < 200; ++k) {
        const double N = ns(rng);
        const double x = xs(rng);
        CHECK(std::fabs(big_h_inv(N, big_h_n(N, x)) - x) <= 1e-12 * x);
    }
}

TEST_CASE("I_N closed form matches the composition") {
    CHECK(i_n(2.0, kPi) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
    CHECK(i_n(3.0, 0.0) == 0.0);
    CHECK(i_n(2.0, 4.0 * kPi) == doctest::Approx(4.0 * kPi).epsilon(1e-13));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> sig(1e-6, 100.0);
    std::uniform_real_distribution<double> ns(1.1, 8.0);
    for (int k = 0; k < 200; ++k) {
        const double N = ns(rng);
        const double s = sig(rng);
        const double composed = h_n(N, big_h_inv(N, s));
        CHECK(std::fabs(i_n(N, s) - composed) <= 1e-10 * composed);
    }
}

TEST_CASE("h_N and H_N are strictly increasing") {
    for (double N : {1.5, 2.0, 3.7}) {
        double prev_h = 0.0, prev_H = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double t = 0.1 * i;
            CHECK(h_n(N, t) > prev_h);
            CHECK(big_h_n(N, t) > prev_H);
            prev_h = h_n(N, t);
            prev_H = big_h_n(N, t);
        }
    }
}

TEST_CASE("isoperimetric identity on the model space") {
    // Per([0,a)) = h_N(a) equals N omega^{1/N} H_N(a)^{(N-1)/N} exactly.
    for (double N : {1.5, 2.0, 3.7}) {
        for (double a : {0.1, 1.0, 10.0}) {
            const double per = h_n(N, a);
            const double bound = N * std::pow(omega_n(N), 1.0 / N) *
                                 std::pow(big_h_n(N, a), (N - 1.0) / N);
            CHECK(std::fabs(per / bound - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("conjugate exponent is derived exactly") {
    const ModelParams mp(2.5, 3.0);
    CHECK(mp.q == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(1.0 / mp.p + 1.0 / mp.q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(ModelParams(1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(2.0, 1.0), std::domain_error);
}
