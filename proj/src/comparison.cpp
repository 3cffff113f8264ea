#include "talenti/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "talenti/interpolation.hpp"
#include "talenti/level_sets.hpp"
#include "talenti/model_space.hpp"
#include "talenti/quadrature.hpp"

namespace talenti {

namespace {

// Mesh-tolerance coefficient, calibrated on the equality instances where
// the true margin vanishes: |margin| / (h * v(0)) measures ~0.16 on the
// disk and ~0.65 on sectors, stable across refinements; 2.0 covers the
// family with a 3x safety factor.
constexpr double kMeshTolCoefficient = 2.0;

// Equality-detection bound, also in h * v(0) units: equality instances
// keep margin and deficit under ~0.65 * h * v(0); strict instances sit
// above it at any practical resolution (the square deficit is
// h-independent at ~0.063 * v(0)).
constexpr double kEqTolCoefficient = 1.5;

// Relative budget for gradient and Polya-Szego pairs on FEM instances,
// per unit target_h (same calibration run).
constexpr double kGradTolCoefficient = 2.0;

// Quadrature/profile budget for pure 1-D instances.
constexpr double k1dTolerance = 1e-6;

// Cells used when a non-monotone 1-D datum forces the measured-cell
// rearrangement path.
constexpr int kRadialBands = 4096;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = a + (b - a) * i / (n - 1);
    }
    return x;
}

}  // namespace

std::pair<double, double> talenti_compare(
    const std::function<double(double)>& ustar, const RadialSolution& v,
    double avr, double p, double N, double r_a, int grid_points,
    bool smooth) {
    const double A = std::pow(avr, (p / (p - 1.0)) / N);  // avr^{q/N}

    double margin = std::numeric_limits<double>::infinity();
    for (double x : linspace(0.0, r_a, grid_points)) {
        margin = std::min(margin, v.value_at(x) - A * ustar(x));
    }

    auto integrand = [&](double x) {
        const double d = std::fabs(A * ustar(x) - v.value_at(x));
        return std::pow(d, p) * h_n(N, x);
    };
    double integral = 0.0;
    if (smooth) {
        integral = integrate_adaptive(integrand, 0.0, r_a, 1e-6, 1e-300,
                                      4000)
                       .value;
    } else {
        // Step-function profile: composite trapezoid on a fine grid.
        const int n = 8193;
        const double dx = r_a / (n - 1);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += w * integrand(r_a * i / (n - 1));
        }
        integral = acc * dx;
    }
    return {margin, std::pow(std::max(0.0, integral), 1.0 / p)};
}

CheckPair gradient_lr_check(double u_gradient_integral,
                            const RadialSolution& v, double avr, double r,
                            double p, double N, double tolerance) {
    CheckPair c;
    c.lhs = std::pow(avr, r / ((p - 1.0) * N)) * u_gradient_integral;
    c.rhs = v.gradient_lr_norm(r);
    c.tolerance = tolerance;
    c.pass = c.lhs <= c.rhs + tolerance;
    return c;
}

double symmetrized_dirichlet_energy(const std::vector<double>& profile,
                                    double r_a, double p, double N) {
    const int n = static_cast<int>(profile.size());
    if (n < 3) throw std::invalid_argument("profile too short");
    const double dx = r_a / (n - 1);

    // Monotone clamp first: rearrangement noise must not create gradient
    // mass.
    std::vector<double> y = profile;
    for (int i = 1; i < n; ++i) y[i] = std::min(y[i], y[i - 1]);

    std::vector<double> slope(n);
    slope[0] = (y[1] - y[0]) / dx;
    slope[n - 1] = (y[n - 1] - y[n - 2]) / dx;
    for (int i = 1; i + 1 < n; ++i) {
        slope[i] = (y[i + 1] - y[i - 1]) / (2.0 * dx);
    }

    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * std::pow(std::fabs(slope[i]), p) * h_n(N, i * dx);
    }
    return acc * dx;
}

bool detect_equality(const ComparisonReport& report, double eq_tol,
                     double scale) {
    const double bound = eq_tol * std::max(scale, 1e-300);
    return std::fabs(report.talenti_margin) <= bound &&
           report.talenti_deficit <= bound;
}

namespace {

struct InstanceWork {
    ComparisonReport report;
    double v0 = 0.0;  // scale for tolerances
};

void run_isoperimetric_fem(const FemFunction& u, ComparisonReport& rep,
                           const CompareOptions& opts) {
    const double top = u.max_abs();
    double min_ratio = std::numeric_limits<double>::infinity();
    int used = 0, skipped = 0;
    const double coeff = rep.N * std::pow(omega_n(rep.N), 1.0 / rep.N) *
                         std::pow(rep.avr, 1.0 / rep.N);
    for (double rel : opts.iso_levels_rel) {
        const double t = rel * top;
        const double m = superlevel_measure(u, t);
        const double per = superlevel_perimeter(u, t);
        if (!(m > 0.0) || !(per > 0.0)) {
            ++skipped;
            continue;
        }
        min_ratio = std::min(
            min_ratio, per / (coeff * std::pow(m, (rep.N - 1.0) / rep.N)));
        ++used;
    }
    rep.isoperimetric_min_ratio = used > 0 ? min_ratio : 0.0;
    rep.isoperimetric_levels_used = used;
    rep.isoperimetric_levels_skipped = skipped;
    rep.isoperimetric_pass =
        used > 0 && min_ratio >= 1.0 - opts.iso_geom_tol;
}

void run_coarea_fem(const FemFunction& u, ComparisonReport& rep,
                    const CompareOptions& opts) {
    const double top = u.max_abs();
    if (!(top > 0.0)) {
        rep.coarea_max_residual = 0.0;
        rep.coarea_pass = true;
        return;
    }
    // Perimeter sampled once on a fine level ladder; the coarea right-hand
    // side is its trapezoid tail integral.
    const int m = opts.coarea_internal;
    std::vector<double> levels(m + 1), per(m + 1);
    for (int i = 0; i <= m; ++i) {
        levels[i] = top * i / m;
        per[i] = superlevel_perimeter(u, levels[i]);
    }
    std::vector<double> tail(m + 1, 0.0);
    for (int i = m - 1; i >= 0; --i) {
        tail[i] = tail[i + 1] +
                  0.5 * (per[i] + per[i + 1]) * (levels[i + 1] - levels[i]);
    }
    const double scale = superlevel_gradient_integral(u, 0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < opts.coarea_levels; ++k) {
        const double t = top * k / opts.coarea_levels;
        const double lhs = superlevel_gradient_integral(u, t, 1.0);
        // Tail integral from t: locate the bracketing ladder level.
        const double pos = t / top * m;
        const int i = std::min(static_cast<int>(pos), m - 1);
        const double frac = pos - i;
        const double rhs = tail[i] -
                           frac * 0.5 *
                               (per[i] + per[i] + frac * (per[i + 1] - per[i])) *
                               (levels[i + 1] - levels[i]);
        worst = std::max(worst, std::fabs(lhs - rhs) /
                                    std::max(scale, 1e-300));
    }
    rep.coarea_max_residual = worst;
    rep.coarea_pass = worst <= opts.coarea_tol;
}

}  // namespace

ComparisonReport compare_fem_instance(
    const Domain& domain, double target_h,
    const std::function<double(double, double)>& f, double avr,
    const CompareOptions& opts, const std::string& name) {
    ComparisonReport rep;
    rep.instance = name.empty() ? domain.describe() : name;
    rep.N = 2.0;
    rep.p = opts.p;
    rep.q = opts.p / (opts.p - 1.0);
    rep.avr = avr;

    const TriMesh mesh = generate_mesh(domain, target_h);
    std::vector<double> f_nodal(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        f_nodal[i] = f(mesh.vertices[i][0], mesh.vertices[i][1]);
    }
    SolverConfig cfg;
    cfg.p = opts.p;
    auto [u, stats] = solve_p_laplacian(mesh, f_nodal, cfg);
    if (!stats.converged) {
        throw std::runtime_error("compare_fem_instance: FEM solve failed");
    }

    rep.domain_measure = mesh.total_area();
    rep.r_a = big_h_inv(rep.N, rep.domain_measure);

    const SchwarzSymmetrization ustar =
        schwarz_symmetrize(fem_to_measured(u), rep.N);
    const SchwarzSymmetrization fstar =
        schwarz_symmetrize(fem_to_measured(FemFunction(mesh, f_nodal)),
                           rep.N);

    const RadialSolution v = solve_radial_poisson(
        WeightedHalfLine::model(rep.N), rep.r_a,
        RadialDatum::from_function([&fstar](double x) { return fstar(x); }),
        opts.p);
    const double v0 = v.value_at(0.0);

    rep.tol_mesh = opts.tol_mesh_override >= 0.0
                       ? opts.tol_mesh_override
                       : kMeshTolCoefficient * target_h *
                             std::max(v0, 1e-300);

    auto ustar_fn = [&ustar](double x) { return ustar(x); };
    std::tie(rep.talenti_margin, rep.talenti_deficit) =
        talenti_compare(ustar_fn, v, avr, opts.p, rep.N, rep.r_a,
                        opts.profile_grid, /*smooth=*/false);
    rep.talenti_pass = rep.talenti_margin >= -rep.tol_mesh;

    const double grad_budget = kGradTolCoefficient * target_h;
    for (double r : {1.0, 0.5 * (1.0 + opts.p), opts.p}) {
        const double rhs_scale = v.gradient_lr_norm(r);
        rep.gradient_checks.emplace_back(
            r, gradient_lr_check(u.lr_gradient_norm(r), v, avr, r, opts.p,
                                 rep.N,
                                 grad_budget * std::max(rhs_scale, 1e-300)));
    }

    {
        std::vector<double> profile(opts.fd_profile_grid);
        for (int i = 0; i < opts.fd_profile_grid; ++i) {
            profile[i] = ustar(rep.r_a * i / (opts.fd_profile_grid - 1));
        }
        CheckPair ps;
        ps.lhs = std::pow(avr, opts.p / rep.N) *
                 symmetrized_dirichlet_energy(profile, rep.r_a, opts.p,
                                              rep.N);
        ps.rhs = u.lr_gradient_norm(opts.p);
        ps.tolerance = grad_budget * std::max(ps.rhs, 1e-300);
        ps.pass = ps.lhs <= ps.rhs + ps.tolerance;
        rep.polya_szego = ps;
    }

    run_isoperimetric_fem(u, rep, opts);
    run_coarea_fem(u, rep, opts);

    rep.eq_tol = opts.eq_tol_override >= 0.0
                     ? opts.eq_tol_override
                     : kEqTolCoefficient * target_h;
    rep.equality_detected = detect_equality(rep, rep.eq_tol, v0);
    return rep;
}

ComparisonReport compare_radial_instance(
    const WeightedHalfLine& space, double R, const RadialDatum& f,
    bool f_nonincreasing, const CompareOptions& opts,
    const std::string& name) {
    ComparisonReport rep;
    rep.instance = name.empty() ? ("halfline:" + space.family_id()) : name;
    rep.N = space.dimension();
    rep.p = opts.p;
    rep.q = opts.p / (opts.p - 1.0);

    if (space.analytic_avr().has_value()) {
        rep.avr = *space.analytic_avr();
    } else {
        rep.avr = avr_estimate(space, 1e4).value;
    }

    const RadialSolution u = solve_radial_poisson(space, R, f, opts.p);
    rep.domain_measure = space.cumulative(R);
    rep.r_a = big_h_inv(rep.N, rep.domain_measure);

    // tau(x): radius in the weighted space holding the same measure as the
    // model ball [0, x].
    PchipInterpolant tau_interp;
    {
        const int n = 1025;
        std::vector<double> sigma(n), tau(n);
        for (int i = 0; i < n; ++i) {
            tau[i] = R * i / (n - 1);
            sigma[i] = space.cumulative(tau[i]);
        }
        tau_interp = PchipInterpolant(std::move(sigma), std::move(tau));
    }
    const double N = rep.N;
    auto tau_of_x = [&tau_interp, N](double x) {
        return tau_interp(big_h_n(N, x));
    };

    std::function<double(double)> ustar_fn;
    std::function<double(double)> fstar_fn;
    bool smooth = true;
    double tol_abs =
        opts.tol_mesh_override >= 0.0 ? opts.tol_mesh_override : 0.0;

    if (f_nonincreasing) {
        // Exact monotone path: u is nonincreasing, so the rearrangement is
        // the measure-preserving change of radius.
        ustar_fn = [&u, tau_of_x](double x) {
            return u.value_at(tau_of_x(x));
        };
        fstar_fn = [&f, tau_of_x](double x) { return f(tau_of_x(x)); };
    } else {
        // Measured-cell fallback.
        std::vector<Cell> ucells(kRadialBands), fcells(kRadialBands);
        for (int i = 0; i < kRadialBands; ++i) {
            const double a = R * i / kRadialBands;
            const double b = R * (i + 1) / kRadialBands;
            const double mid = 0.5 * (a + b);
            const double measure = space.measure_of_interval(a, b);
            ucells[i] = {u.value_at(mid), measure};
            fcells[i] = {f(mid), measure};
        }
        auto ustar_sym = std::make_shared<SchwarzSymmetrization>(
            schwarz_symmetrize(MeasuredFunction(std::move(ucells)), N));
        auto fstar_sym = std::make_shared<SchwarzSymmetrization>(
            schwarz_symmetrize(MeasuredFunction(std::move(fcells)), N));
        ustar_fn = [ustar_sym](double x) { return (*ustar_sym)(x); };
        fstar_fn = [fstar_sym](double x) { return (*fstar_sym)(x); };
        smooth = false;
    }

    const RadialSolution v =
        solve_radial_poisson(WeightedHalfLine::model(N), rep.r_a,
                             RadialDatum::from_function(fstar_fn), opts.p);
    const double v0 = v.value_at(0.0);

    if (opts.tol_mesh_override < 0.0) {
        tol_abs = f_nonincreasing
                      ? k1dTolerance * std::max(1.0, v0)
                      : 4.0 * (u.value_at(0.0) / kRadialBands +
                               k1dTolerance * std::max(1.0, v0));
    }
    rep.tol_mesh = tol_abs;

    std::tie(rep.talenti_margin, rep.talenti_deficit) = talenti_compare(
        ustar_fn, v, rep.avr, opts.p, N, rep.r_a, opts.profile_grid, smooth);
    rep.talenti_pass = rep.talenti_margin >= -rep.tol_mesh;

    for (double r : {1.0, 0.5 * (1.0 + opts.p), opts.p}) {
        const double rhs_scale = v.gradient_lr_norm(r);
        rep.gradient_checks.emplace_back(
            r, gradient_lr_check(u.gradient_lr_norm(r), v, rep.avr, r,
                                 opts.p, N,
                                 100.0 * k1dTolerance *
                                     std::max(rhs_scale, 1e-300)));
    }

    {
        // |ustar'(x)| = |u'(tau)| h_N(x) / h(tau) by the chain rule.
        CheckPair ps;
        const double avr_loc = rep.avr;
        const double p_loc = opts.p;
        auto integrand = [&](double x) {
            if (x <= 0.0) return 0.0;
            const double tau = tau_of_x(x);
            const double ht = space.density(tau);
            if (!(ht > 0.0)) return 0.0;
            const double slope = u.speed_fn(tau) * h_n(N, x) / ht;
            return std::pow(slope, p_loc) * h_n(N, x);
        };
        if (smooth) {
            ps.lhs = std::pow(avr_loc, p_loc / N) *
                     integrate_adaptive(integrand, 0.0, rep.r_a, 1e-8,
                                        1e-300, 4000)
                         .value;
        } else {
            std::vector<double> profile(opts.profile_grid);
            for (int i = 0; i < opts.profile_grid; ++i) {
                profile[i] = ustar_fn(rep.r_a * i / (opts.profile_grid - 1));
            }
            ps.lhs = std::pow(avr_loc, p_loc / N) *
                     symmetrized_dirichlet_energy(profile, rep.r_a, p_loc, N);
        }
        ps.rhs = u.gradient_lr_norm(opts.p);
        ps.tolerance =
            100.0 * k1dTolerance * std::max(std::fabs(ps.rhs), 1e-300);
        ps.pass = ps.lhs <= ps.rhs + ps.tolerance;
        rep.polya_szego = ps;
    }

    // Isoperimetric profile of the superlevel sets [0, rho_t).
    {
        const double top = u.value_at(0.0);
        double min_ratio = std::numeric_limits<double>::infinity();
        int used = 0, skipped = 0;
        const double coeff = N * std::pow(omega_n(N), 1.0 / N) *
                             std::pow(rep.avr, 1.0 / N);
        for (double rel : opts.iso_levels_rel) {
            const double t = rel * top;
            if (!(t > 0.0) || t >= top) {
                ++skipped;
                continue;
            }
            double lo = 0.0, hi = R;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (u.value_at(mid) > t ? lo : hi) = mid;
            }
            const double rho_t = 0.5 * (lo + hi);
            const double m = space.cumulative(rho_t);
            const double per = space.density(rho_t);
            if (!(m > 0.0) || !(per > 0.0)) {
                ++skipped;
                continue;
            }
            min_ratio = std::min(
                min_ratio, per / (coeff * std::pow(m, (N - 1.0) / N)));
            ++used;
        }
        rep.isoperimetric_min_ratio = used > 0 ? min_ratio : 0.0;
        rep.isoperimetric_levels_used = used;
        rep.isoperimetric_levels_skipped = skipped;
        rep.isoperimetric_pass =
            used > 0 && min_ratio >= 1.0 - opts.iso_geom_tol;
    }

    // Coarea residual along the decreasing profile.
    {
        const double top = u.value_at(0.0);
        if (top > 0.0) {
            auto rho_of_level = [&](double t) {
                double lo = 0.0, hi = R;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (u.value_at(mid) > t ? lo : hi) = mid;
                }
                return 0.5 * (lo + hi);
            };
            const int m = opts.coarea_internal;
            std::vector<double> levels(m + 1), per(m + 1);
            for (int i = 0; i <= m; ++i) {
                levels[i] = top * i / m;
                per[i] = (i == m) ? 0.0
                                  : space.density(rho_of_level(levels[i]));
            }
            std::vector<double> tail(m + 1, 0.0);
            for (int i = m - 1; i >= 0; --i) {
                tail[i] = tail[i + 1] + 0.5 * (per[i] + per[i + 1]) *
                                            (levels[i + 1] - levels[i]);
            }
            auto lhs_at = [&](double t) {
                const double rho_t = rho_of_level(t);
                return integrate_adaptive(
                           [&](double s) {
                               return u.speed_fn(s) * space.density(s);
                           },
                           0.0, rho_t, 1e-8, 1e-300, 4000)
                    .value;
            };
            const double scale = lhs_at(0.0);
            double worst = 0.0;
            for (int k = 0; k < opts.coarea_levels; ++k) {
                const double t = top * k / opts.coarea_levels;
                const int i =
                    std::min(static_cast<int>(t / top * m), m - 1);
                const double frac = t / top * m - i;
                const double per_t =
                    per[i] + frac * (per[i + 1] - per[i]);
                const double rhs =
                    tail[i] - frac * 0.5 * (per[i] + per_t) *
                                  (levels[i + 1] - levels[i]);
                worst = std::max(worst, std::fabs(lhs_at(t) - rhs) /
                                            std::max(scale, 1e-300));
            }
            rep.coarea_max_residual = worst;
            rep.coarea_pass = worst <= opts.coarea_tol;
        } else {
            rep.coarea_max_residual = 0.0;
            rep.coarea_pass = true;
        }
    }

    rep.eq_tol = opts.eq_tol_override >= 0.0
                     ? opts.eq_tol_override
                     : 10.0 * k1dTolerance;
    rep.equality_detected = detect_equality(rep, rep.eq_tol, v0);
    return rep;
}

}  // namespace talenti
