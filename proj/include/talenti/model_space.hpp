#pragma once

namespace talenti {

/// Parameter bundle for the one-dimensional model space ([0,inf), h_N dt):
/// dimension parameter N, exponent p, and the conjugate exponent q, which is
/// always derived from p so that 1/p + 1/q = 1 holds exactly.
struct ModelParams {
    double N;
    double p;
    double q;

    ModelParams(double N_, double p_);
};

/// Gamma function via the Lanczos approximation (g = 7, 9 coefficients).
/// Accurate to ~1e-15 relative for positive arguments.
double gamma_function(double x);

/// omega_N = pi^{N/2} / Gamma(N/2 + 1); the defining integral
/// int_0^inf t^{N/2} e^{-t} dt equals that Gamma value.
double omega_n(double N);

/// Model density h_N(t) = N omega_N t^{N-1}.
double h_n(double N, double t);

/// Cumulative model measure H_N(x) = omega_N x^N.
double big_h_n(double N, double x);

/// Inverse cumulative measure: big_h_inv(N, big_h_n(N, x)) == x.
double big_h_inv(double N, double a);

/// I_N = h_N o H_N^{-1}; closed form N omega_N^{1/N} sigma^{(N-1)/N}.
double i_n(double N, double sigma);

}  // namespace talenti
