#pragma once

#include <functional>
#include <string>
#include <vector>

#include "talenti/weighted_space.hpp"

namespace talenti {

/// The datum f of the radial Poisson problem, either a closed-form callback
/// or samples with linear interpolation.
class RadialDatum {
public:
    static RadialDatum from_function(std::function<double(double)> f);
    static RadialDatum constant(double c);
    static RadialDatum from_samples(std::vector<double> t,
                                    std::vector<double> f);
    /// CSV with header `t,f`.
    static RadialDatum from_csv_file(const std::string& path);

    double operator()(double t) const { return fn_(t); }

private:
    std::function<double(double)> fn_;
};

struct RadialSolverOptions {
    int inner_segments = 2048;   // cumulative int_0^u f h grid (graded)
    int output_points = 513;     // uniform sample grid for v, v'
    double inner_rel_tol = 1e-12;
    double outer_rel_tol = 1e-9;
};

/// Solution of -L_p v = f on ([0,R), h dt) with v(R) = 0:
///   v(rho) = int_rho^R ( (1/h(u)) int_0^u f h ds )^{1/(p-1)} du.
/// Carries grid samples plus evaluators valid anywhere on [0, R].
struct RadialSolution {
    WeightedHalfLine space = WeightedHalfLine::model(2.0);
    double R = 0.0;
    double p = 2.0;
    std::vector<double> rho;
    std::vector<double> v;
    std::vector<double> dv;
    std::vector<double> f_used;

    std::function<double(double)> value_fn;
    std::function<double(double)> speed_fn;  // |v'| = ((1/h) int_0^. f h)^{1/(p-1)}

    double value_at(double r) const { return value_fn(r); }
    double derivative_at(double r) const { return -speed_fn(r); }

    /// int_0^R |v'|^r h dt by adaptive quadrature (1e-8 relative).
    double gradient_lr_norm(double r_exponent) const;

    /// L^p norm of v w.r.t. the space measure.
    double lp_norm(double p_exponent) const;

    void export_csv(const std::string& path) const;  // rho,v,dv
};

/// Quadrature solution via the direct representation (nested integral in the
/// radial variable). Throws std::invalid_argument for negative f or p <= 1,
/// std::runtime_error when the inner integral diverges.
RadialSolution solve_radial_poisson(const WeightedHalfLine& space, double R,
                                    const RadialDatum& f, double p,
                                    const RadialSolverOptions& opts = {});

/// Independent route for the model space: outer integral in the measure
/// variable sigma = H_N(rho), with its own cumulative of f o H_N^{-1}.
RadialSolution solve_radial_poisson_sigma_form(
    double N, double R, const RadialDatum& f, double p,
    const RadialSolverOptions& opts = {});

/// Analytic solution for f == 1 on Model/Cone spaces:
///   v(rho) = (p-1)/p * N^{-1/(p-1)} * (R^{p/(p-1)} - rho^{p/(p-1)}).
RadialSolution closed_form_constant_f(const WeightedHalfLine& space, double R,
                                      double p, int output_points = 513);

}  // namespace talenti
