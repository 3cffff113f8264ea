#include "talenti/model_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace talenti {

namespace {

void require_dimension(double N) {
    if (!(N > 1.0) || !std::isfinite(N)) {
        throw std::domain_error("model space: N must be finite and > 1");
    }
}

}  // namespace

ModelParams::ModelParams(double N_, double p_) : N(N_), p(p_) {
    require_dimension(N);
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw std::domain_error("model space: p must be finite and > 1");
    }
    q = p / (p - 1.0);
}

double gamma_function(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error("gamma_function: requires finite x > 0");
    }
    // Lanczos, g = 7, 9 coefficients.
    static const double c[9] = {
        0.99999999999980993,      676.5203681218851,
        -1259.1392167224028,      771.32342877765313,
        -176.61502916214059,      12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6,
        1.5056327351493116e-7};

    const double z = x - 1.0;
    double a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) *
           std::exp(-t) * a;
}

double omega_n(double N) {
    require_dimension(N);
    return std::pow(std::numbers::pi, 0.5 * N) / gamma_function(0.5 * N + 1.0);
}

double h_n(double N, double t) {
    require_dimension(N);
    if (t < 0.0) throw std::domain_error("h_n: t must be >= 0");
    if (t == 0.0) return 0.0;
    return N * omega_n(N) * std::pow(t, N - 1.0);
}

double big_h_n(double N, double x) {
    require_dimension(N);
    if (x < 0.0) throw std::domain_error("big_h_n: x must be >= 0");
    return omega_n(N) * std::pow(x, N);
}

double big_h_inv(double N, double a) {
    require_dimension(N);
    if (a < 0.0) throw std::domain_error("big_h_inv: a must be >= 0");
    return std::pow(a / omega_n(N), 1.0 / N);
}

double i_n(double N, double sigma) {
    require_dimension(N);
    if (sigma < 0.0) throw std::domain_error("i_n: sigma must be >= 0");
    if (sigma == 0.0) return 0.0;
    return N * std::pow(omega_n(N), 1.0 / N) *
           std::pow(sigma, (N - 1.0) / N);
}

}  // namespace talenti
