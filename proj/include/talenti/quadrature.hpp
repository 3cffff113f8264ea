#pragma once

#include <functional>
#include <map>
#include <mutex>

namespace talenti {

/// Result of an adaptive quadrature pass over one interval.
struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Subdivides the interval with the largest local error first until
/// sum(err) <= max(abs_tol, rel_tol*|value|) or the interval budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol = 1e-10,
                                    double abs_tol = 1e-14,
                                    int max_intervals = 4000);

/// Convenience wrapper: returns the value, throws std::runtime_error when the
/// requested tolerance could not be reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14,
                 int max_intervals = 4000);

/// Tanh-sinh (double exponential) quadrature over [a,b]. Converges fast for
/// integrable endpoint singularities, where bisecting Gauss-Kronrod stalls.
/// The endpoints themselves are never evaluated.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-11,
                           int max_level = 12);

/// Cumulative integral t -> int_0^t density(s) ds with cached breakpoints.
/// Each evaluation integrates only from the nearest cached point below t, so
/// repeated evaluations along an increasing sweep cost one pass in total.
/// Internally synchronized; concurrent evaluation is safe.
class CumulativeIntegral {
public:
    explicit CumulativeIntegral(std::function<double(double)> density,
                                double rel_tol = 1e-10);

    double operator()(double t) const;

private:
    std::function<double(double)> density_;
    double rel_tol_;
    mutable std::map<double, double> cache_;
    mutable std::mutex mutex_;
};

}  // namespace talenti
