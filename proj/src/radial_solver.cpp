#include "talenti/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "talenti/interpolation.hpp"
#include "talenti/model_space.hpp"
#include "talenti/quadrature.hpp"
#include "talenti/summation.hpp"

namespace talenti {

namespace {

// Cumulative integral of a nonnegative integrand on [0, X], precomputed on a
// quadratically graded grid and interpolated monotonically.
PchipInterpolant build_cumulative(const std::function<double(double)>& g,
                                  double X, int segments, double rel_tol) {
    std::vector<double> x(segments + 1), y(segments + 1);
    CompensatedSum acc;
    x[0] = 0.0;
    y[0] = 0.0;
    for (int i = 1; i <= segments; ++i) {
        const double t = static_cast<double>(i) / segments;
        x[i] = X * t * t;
        QuadratureResult r =
            integrate_adaptive(g, x[i - 1], x[i], rel_tol, 1e-300, 2000);
        if (!std::isfinite(r.value) ||
            (!r.converged &&
             r.error_estimate > 1e-6 * (std::fabs(r.value) + 1e-300))) {
            throw std::runtime_error(
                "radial solver: inner integral does not converge "
                "(non-integrable datum?)");
        }
        acc.add(r.value);
        y[i] = acc.result();
    }
    return PchipInterpolant(std::move(x), std::move(y));
}

void validate_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("radial solver: p must be finite and > 1");
    }
}

void validate_datum(const RadialDatum& f, double R, int samples) {
    double max_abs = 0.0;
    double min_val = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = R * i / samples;
        const double ft = f(t);
        if (!std::isfinite(ft)) {
            throw std::invalid_argument("radial solver: non-finite datum");
        }
        max_abs = std::max(max_abs, std::fabs(ft));
        min_val = std::min(min_val, ft);
    }
    if (min_val < -1e-12 * std::max(1.0, max_abs)) {
        throw std::invalid_argument("radial solver: datum must be >= 0");
    }
}

}  // namespace

RadialDatum RadialDatum::from_function(std::function<double(double)> f) {
    RadialDatum d;
    d.fn_ = std::move(f);
    return d;
}

RadialDatum RadialDatum::constant(double c) {
    return from_function([c](double) { return c; });
}

RadialDatum RadialDatum::from_samples(std::vector<double> t,
                                      std::vector<double> f) {
    LinearInterpolant interp(std::move(t), std::move(f));
    return from_function([interp](double x) { return interp(x); });
}

RadialDatum RadialDatum::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RadialDatum: cannot open " + path);
    std::vector<double> t, f;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find_first_not_of("0123456789+-.eE, \t") !=
                std::string::npos) {
                continue;  // header row
            }
        }
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b)) {
            throw std::runtime_error("RadialDatum csv: bad row: " + line);
        }
        t.push_back(std::stod(a));
        f.push_back(std::stod(b));
    }
    return from_samples(std::move(t), std::move(f));
}

double RadialSolution::gradient_lr_norm(double r_exponent) const {
    if (!(r_exponent >= 1.0)) {
        throw std::domain_error("gradient_lr_norm: exponent must be >= 1");
    }
    const auto& speed = speed_fn;
    const WeightedHalfLine& sp = space;
    return integrate(
        [&speed, &sp, r_exponent](double t) {
            return std::pow(speed(t), r_exponent) * sp.density(t);
        },
        0.0, R, 1e-8, 1e-14);
}

double RadialSolution::lp_norm(double p_exponent) const {
    const auto& val = value_fn;
    const WeightedHalfLine& sp = space;
    return std::pow(
        integrate(
            [&val, &sp, p_exponent](double t) {
                return std::pow(std::fabs(val(t)), p_exponent) *
                       sp.density(t);
            },
            0.0, R, 1e-8, 1e-14),
        1.0 / p_exponent);
}

void RadialSolution::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("RadialSolution: cannot open " + path);
    out << "rho,v,dv\n";
    char buf[96];
    for (std::size_t i = 0; i < rho.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rho[i], v[i],
                      dv[i]);
        out << buf;
    }
}

RadialSolution solve_radial_poisson(const WeightedHalfLine& space, double R,
                                    const RadialDatum& f, double p,
                                    const RadialSolverOptions& opts) {
    validate_exponent(p);
    if (!(R > 0.0)) {
        throw std::invalid_argument("radial solver: R must be > 0");
    }
    validate_datum(f, R, opts.inner_segments);

    // Inner cumulative G(u) = int_0^u f h.
    auto fh = [&f, &space](double t) { return f(t) * space.density(t); };
    auto G = std::make_shared<PchipInterpolant>(
        build_cumulative(fh, R, opts.inner_segments, opts.inner_rel_tol));

    const double inv_exp = 1.0 / (p - 1.0);
    WeightedHalfLine space_copy = space;
    auto speed = [G, space_copy, inv_exp](double u) {
        if (u <= 0.0) return 0.0;  // removable: G/h -> 0 for bounded f, N > 1
        const double g = std::max(0.0, (*G)(u));
        const double h = space_copy.density(u);
        if (!(h > 0.0)) return 0.0;
        return std::pow(g / h, inv_exp);
    };

    RadialSolution sol;
    sol.space = space;
    sol.R = R;
    sol.p = p;

    const int n = opts.output_points;
    sol.rho.resize(n);
    sol.v.resize(n);
    sol.dv.resize(n);
    sol.f_used.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.rho[i] = R * i / (n - 1);
        sol.dv[i] = -speed(sol.rho[i]);
        sol.f_used[i] = f(sol.rho[i]);
    }
    sol.v[n - 1] = 0.0;
    CompensatedSum acc;
    for (int i = n - 2; i >= 0; --i) {
        acc.add(integrate(speed, sol.rho[i], sol.rho[i + 1],
                          opts.outer_rel_tol, 1e-300, 2000));
        sol.v[i] = acc.result();
    }

    std::vector<double> v_rev = sol.v;
    PchipInterpolant v_interp(sol.rho, std::move(v_rev));
    sol.value_fn = [v_interp](double r) { return v_interp(r); };
    sol.speed_fn = speed;
    return sol;
}

RadialSolution solve_radial_poisson_sigma_form(double N, double R,
                                               const RadialDatum& f, double p,
                                               const RadialSolverOptions& opts) {
    validate_exponent(p);
    if (!(R > 0.0)) {
        throw std::invalid_argument("radial solver: R must be > 0");
    }
    validate_datum(f, R, opts.inner_segments);

    // K(sigma) = int_0^sigma f(H_N^{-1}(t)) dt, built in the measure
    // variable. The outer quadrature probes sigma across many decades
    // (sigma ~ rho^N), so the cached adaptive cumulative is used here: it
    // stays relatively accurate at every scale, where a fixed interpolation
    // grid would not.
    auto f_copy = f;
    auto K = std::make_shared<CumulativeIntegral>(
        [f_copy, N](double sigma) { return f_copy(big_h_inv(N, sigma)); },
        opts.inner_rel_tol);

    const double inv_exp = 1.0 / (p - 1.0);
    auto integrand = [K, N, inv_exp](double sigma) {
        if (sigma <= 0.0) return 0.0;
        const double I = i_n(N, sigma);
        if (!(I > 0.0)) return 0.0;
        const double k = std::max(0.0, (*K)(sigma));
        return std::pow(k / I, inv_exp) / I;
    };

    RadialSolution sol;
    sol.space = WeightedHalfLine::model(N);
    sol.R = R;
    sol.p = p;

    const int n = opts.output_points;
    sol.rho.resize(n);
    sol.v.resize(n);
    sol.dv.resize(n);
    sol.f_used.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.rho[i] = R * i / (n - 1);
        sol.f_used[i] = f(sol.rho[i]);
    }
    sol.v[n - 1] = 0.0;
    CompensatedSum acc;
    for (int i = n - 2; i >= 0; --i) {
        const double a = big_h_n(N, sol.rho[i]);
        const double b = big_h_n(N, sol.rho[i + 1]);
        // The integrand carries a sigma^{-(N-1)/N} endpoint singularity at
        // zero; tanh-sinh handles it, bisection does not.
        acc.add(a == 0.0
                    ? integrate_tanh_sinh(integrand, a, b,
                                          opts.outer_rel_tol)
                    : integrate(integrand, a, b, opts.outer_rel_tol, 1e-300,
                                2000));
        sol.v[i] = acc.result();
    }

    // |v'(rho)| = (K(H_N(rho)) / h_N(rho))^{1/(p-1)} by the chain rule.
    auto speed = [K, N, inv_exp](double u) {
        if (u <= 0.0) return 0.0;
        const double h = h_n(N, u);
        if (!(h > 0.0)) return 0.0;
        const double k = std::max(0.0, (*K)(big_h_n(N, u)));
        return std::pow(k / h, inv_exp);
    };
    for (int i = 0; i < n; ++i) sol.dv[i] = -speed(sol.rho[i]);

    std::vector<double> v_copy = sol.v;
    PchipInterpolant v_interp(sol.rho, std::move(v_copy));
    sol.value_fn = [v_interp](double r) { return v_interp(r); };
    sol.speed_fn = speed;
    return sol;
}

RadialSolution closed_form_constant_f(const WeightedHalfLine& space, double R,
                                      double p, int output_points) {
    validate_exponent(p);
    if (space.kind() != FamilyKind::Model &&
        space.kind() != FamilyKind::Cone) {
        throw std::invalid_argument(
            "closed_form_constant_f: supported for Model/Cone kinds only");
    }
    const double N = space.dimension();
    const double expo = p / (p - 1.0);
    const double coeff = (p - 1.0) / p * std::pow(N, -1.0 / (p - 1.0));

    RadialSolution sol;
    sol.space = space;
    sol.R = R;
    sol.p = p;
    const int n = output_points;
    sol.rho.resize(n);
    sol.v.resize(n);
    sol.dv.resize(n);
    sol.f_used.assign(n, 1.0);
    auto value = [coeff, expo, R](double r) {
        return coeff * (std::pow(R, expo) - std::pow(r, expo));
    };
    auto speed = [N, p](double r) {
        return r <= 0.0 ? 0.0 : std::pow(r / N, 1.0 / (p - 1.0));
    };
    for (int i = 0; i < n; ++i) {
        sol.rho[i] = R * i / (n - 1);
        sol.v[i] = value(sol.rho[i]);
        sol.dv[i] = -speed(sol.rho[i]);
    }
    sol.value_fn = value;
    sol.speed_fn = speed;
    return sol;
}

}  // namespace talenti
