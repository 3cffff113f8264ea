#pragma once

#include <functional>
#include <string>
#include <vector>

#include "talenti/fem_solver.hpp"
#include "talenti/mesh.hpp"
#include "talenti/radial_solver.hpp"
#include "talenti/rearrangement.hpp"
#include "talenti/weighted_space.hpp"

namespace talenti {

struct CheckPair {
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Everything verified for one (space/domain, f, p) instance, with margins
/// and the tolerances they were judged against.
struct ComparisonReport {
    std::string instance;
    double N = 2.0;
    double p = 2.0;
    double q = 2.0;
    double avr = 1.0;
    double domain_measure = 0.0;
    double r_a = 0.0;

    double talenti_margin = 0.0;   // min over grid of v - avr^{q/N} u*
    double talenti_deficit = 0.0;  // || avr^{q/N} u* - v ||_{L^p(m_N)}
    double tol_mesh = 0.0;         // discretization budget
    bool talenti_pass = false;

    std::vector<std::pair<double, CheckPair>> gradient_checks;  // r -> pair
    CheckPair polya_szego;

    double isoperimetric_min_ratio = 0.0;
    int isoperimetric_levels_used = 0;
    int isoperimetric_levels_skipped = 0;
    bool isoperimetric_pass = false;

    double coarea_max_residual = 0.0;
    bool coarea_pass = false;

    double eq_tol = 0.0;
    bool equality_detected = false;

    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

struct CompareOptions {
    double p = 2.0;
    int profile_grid = 2049;   // margin grid on [0, r_a]
    // Finite-difference grid for u* gradients: coarse enough that each cell
    // spans many rearrangement steps, else the staircase inflates the
    // Polya-Szego left side.
    int fd_profile_grid = 65;
    std::vector<double> iso_levels_rel = {0.1, 0.2, 0.3, 0.4, 0.5};
    int coarea_levels = 10;
    int coarea_internal = 64;
    double coarea_tol = 0.03;
    double iso_geom_tol = 0.05;
    double tol_mesh_override = -1.0;  // < 0: C*h calibration (FEM) / 1e-6 (1-D)
    double eq_tol_override = -1.0;    // < 0: derived from tol_mesh
};

/// Margin and deficit of the comparison inequality avr^{q/N} u* <= v on a
/// shared radial grid over [0, r_a]. `smooth` selects adaptive quadrature
/// for the deficit; step-function profiles use a composite rule instead.
/// Grid points where v < margin_floor are excluded from the margin: both
/// sides live below the discretization tolerance there, so their order is
/// not resolvable (any violation is bounded by the floor itself). The
/// deficit always integrates the full interval.
std::pair<double, double> talenti_compare(
    const std::function<double(double)>& ustar, const RadialSolution& v,
    double avr, double p, double N, double r_a, int grid_points,
    bool smooth, double margin_floor = 0.0);

/// lhs = avr^{r/((p-1)N)} * int |grad u|^r dm  vs  rhs = int |v'|^r dm_N.
CheckPair gradient_lr_check(double u_gradient_integral,
                            const RadialSolution& v, double avr, double r,
                            double p, double N, double tolerance);

/// Polya-Szego from a sampled radial profile: the profile is clamped to
/// nonincreasing, differenced centrally, and integrated against h_N.
double symmetrized_dirichlet_energy(const std::vector<double>& profile,
                                    double r_a, double p, double N);

/// FEM p-Laplace instance: solve, rearrange, solve the model problem with
/// the symmetrized datum, and verify every inequality.
ComparisonReport compare_fem_instance(
    const Domain& domain, double target_h,
    const std::function<double(double, double)>& f, double avr,
    const CompareOptions& opts, const std::string& name = "");

/// 1-D weighted instance; everything reduces to quadrature. When
/// `f_nonincreasing` is set the symmetrization path uses the exact monotone
/// composition, otherwise a measured-cell discretization.
ComparisonReport compare_radial_instance(
    const WeightedHalfLine& space, double R, const RadialDatum& f,
    bool f_nonincreasing, const CompareOptions& opts,
    const std::string& name = "");

bool detect_equality(const ComparisonReport& report, double eq_tol,
                     double scale);

}  // namespace talenti
