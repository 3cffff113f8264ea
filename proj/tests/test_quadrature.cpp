#include <doctest.h>

#include <cmath>
#include <numbers>

#include "talenti/interpolation.hpp"
#include "talenti/quadrature.hpp"

using namespace talenti;

TEST_CASE("polynomials are integrated to tight tolerance") {
    auto r = integrate_adaptive([](double x) { return x * x * x; }, 0.0, 2.0);
    CHECK(r.converged);
    CHECK(std::fabs(r.value - 4.0) < 1e-12);
}

TEST_CASE("oscillatory integrand") {
    const double got =
        integrate([](double x) { return std::sin(9.0 * x); }, 0.0,
                  std::numbers::pi);
    CHECK(std::fabs(got - 2.0 / 9.0) < 1e-10);
}

TEST_CASE("vanishing integral needs the absolute tolerance") {
    const double got =
        integrate([](double x) { return std::sin(10.0 * x); }, 0.0,
                  std::numbers::pi, 1e-10, 1e-12);
    CHECK(std::fabs(got) < 1e-12);
}

TEST_CASE("integrable endpoint singularity") {
    // int_0^1 x^{-1/2} dx = 2
    const double got = integrate(
        [](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0,
        1.0, 1e-10, 1e-12);
    CHECK(std::fabs(got - 2.0) < 1e-8);
}

TEST_CASE("orientation flip negates the value") {
    const double fwd = integrate([](double x) { return x; }, 0.0, 1.0);
    const double bwd = integrate([](double x) { return x; }, 1.0, 0.0);
    CHECK(fwd == doctest::Approx(-bwd));
}

TEST_CASE("cumulative integral agrees with direct integration") {
    CumulativeIntegral H([](double t) { return std::exp(-t); }, 1e-12);
    // Scattered evaluation order exercises the breakpoint cache.
    for (double t : {2.0, 0.5, 3.0, 0.25, 2.5, 10.0}) {
        CHECK(std::fabs(H(t) - (1.0 - std::exp(-t))) < 1e-10);
    }
}

TEST_CASE("pchip preserves monotone data and interpolates nodes") {
    std::vector<double> x, y;
    for (int i = 0; i <= 32; ++i) {
        x.push_back(i / 32.0);
        y.push_back(std::pow(i / 32.0, 3));  // nondecreasing
    }
    PchipInterpolant f(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    }
    double prev = f(0.0);
    for (int k = 1; k <= 1000; ++k) {
        const double v = f(k / 1000.0);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
    // Cubic data is reproduced closely away from the ends.
    CHECK(std::fabs(f(0.51) - 0.51 * 0.51 * 0.51) < 1e-4);
}
