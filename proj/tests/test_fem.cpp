#include <doctest.h>

#include <cmath>
#include <numbers>
#include <fstream>
#include <vector>

#include "talenti/fem_solver.hpp"
#include "talenti/level_sets.hpp"
#include "talenti/mesh.hpp"
#include "talenti/radial_solver.hpp"
#include "talenti/weighted_space.hpp"

using namespace talenti;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> constant_field(const TriMesh& m, double c) {
    return std::vector<double>(m.vertices.size(), c);
}

// Center value of the unit-square torsion problem (-Lap u = 1, u = 0 on the
// boundary) from the single-series solution
//   u(x,y) = x(1-x)/2 - (4/pi^3) sum_{k odd} sin(k pi x)
//            [sinh(k pi y) + sinh(k pi (1-y))] / (k^3 sinh(k pi)),
// which at the center telescopes to
//   1/8 - (4/pi^3) sum_{k odd} (-1)^{(k-1)/2} / (k^3 cosh(k pi / 2)).
double square_torsion_center() {
    double sum = 0.0;
    for (int k = 1; k < 40; k += 2) {
        const double sign = (((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
        sum += sign / (std::pow(k, 3) * std::cosh(0.5 * k * kPi));
    }
    return 0.125 - 4.0 / std::pow(kPi, 3) * sum;
}

double disk_solution(double x, double y) {
    return (1.0 - x * x - y * y) / 4.0;
}

}  // namespace

TEST_CASE("square torsion center value oracle is stable") {
    // The series converges double-exponentially; 20 terms are plenty.
    CHECK(square_torsion_center() == doctest::Approx(0.0736713).epsilon(1e-4));
}

TEST_CASE("p = 2 disk solve converges at second order in the sup norm") {
    double prev = 0.0;
    int step = 0;
    for (double h : {0.2, 0.1, 0.05}) {
        const TriMesh mesh = generate_mesh(Domain::disk(1.0), h);
        SolverConfig cfg;
        auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
        CHECK(stats.converged);
        double sup = 0.0;
        for (int i = 0; i < mesh.vertex_count(); ++i) {
            sup = std::max(sup, std::fabs(u.nodal()[i] -
                                          disk_solution(mesh.vertices[i][0],
                                                        mesh.vertices[i][1])));
        }
        if (step++ > 0) {
            const double ratio = prev / sup;
            CHECK(ratio > 3.2);
            CHECK(ratio < 4.8);
        }
        prev = sup;
    }
}

TEST_CASE("p = 2 square torsion matches the series oracle at the center") {
    const TriMesh mesh = generate_mesh(Domain::square(1.0), 1.0 / 64.0);
    SolverConfig cfg;
    auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
    CHECK(stats.converged);
    int center = -1;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (std::fabs(mesh.vertices[i][0] - 0.5) < 1e-12 &&
            std::fabs(mesh.vertices[i][1] - 0.5) < 1e-12) {
            center = i;
        }
    }
    REQUIRE(center >= 0);
    CHECK(std::fabs(u.nodal()[center] - square_torsion_center()) < 1e-3);
}

TEST_CASE("zero datum gives the zero minimizer") {
    const TriMesh mesh = generate_mesh(Domain::disk(1.0), 0.2);
    for (double p : {2.0, 3.0}) {
        SolverConfig cfg;
        cfg.p = p;
        auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 0.0), cfg);
        CHECK(stats.converged);
        CHECK(u.max_abs() <= 1e-12);
    }
}

TEST_CASE("maximum principle for nonnegative data") {
    const TriMesh mesh = generate_mesh(Domain::square(1.0), 0.05);
    SolverConfig cfg;
    auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
    CHECK(stats.converged);
    CHECK(u.min_value() >= -1e-12 * u.max_abs());
}

TEST_CASE("galerkin orthogonality at p = 2") {
    const TriMesh mesh = generate_mesh(Domain::disk(1.0), 0.1);
    SolverConfig cfg;
    auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
    CHECK(stats.converged);
    // Residual against every interior hat: K u - b restricted to free nodes.
    const std::vector<double> w = lumped_vertex_weights(mesh);
    std::vector<double> residual(mesh.vertex_count(), 0.0);
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& t = mesh.triangles[k];
        const auto g = u.gradient(k);
        // grad phi_i on this triangle via the same P1 formulas.
        const auto& p0 = mesh.vertices[t[0]];
        const auto& p1 = mesh.vertices[t[1]];
        const auto& p2 = mesh.vertices[t[2]];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                           (p2[0] - p0[0]) * (p1[1] - p0[1]);
        const double gp[3][2] = {
            {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det},
            {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
            {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det}};
        for (int v = 0; v < 3; ++v) {
            residual[t[v]] +=
                mesh.cell_areas[k] * (g[0] * gp[v][0] + g[1] * gp[v][1]);
        }
    }
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        scale = std::max(scale, std::fabs(w[i]));
        if (!mesh.dirichlet[i]) {
            worst = std::max(worst, std::fabs(residual[i] - w[i]));
        }
    }
    CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("p = 3 energy descent and residual convergence") {
    const TriMesh mesh = generate_mesh(Domain::disk(1.0), 0.1);
    SolverConfig cfg;
    cfg.p = 3.0;
    auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
    CHECK(stats.converged);
    CHECK(stats.final_residual <= cfg.residual_tolerance *
                                      std::max(1.0, 1.0));
    for (std::size_t i = 1; i < stats.energy_trace.size(); ++i) {
        CHECK(stats.energy_trace[i] <= stats.energy_trace[i - 1] + 1e-15);
    }
    CHECK(u.max_abs() > 0.0);
}

TEST_CASE("p = 1.5 degenerate exponent still converges") {
    const TriMesh mesh = generate_mesh(Domain::disk(1.0), 0.15);
    SolverConfig cfg;
    cfg.p = 1.5;
    auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
    CHECK(stats.converged);
    CHECK(u.min_value() >= -1e-10);
}

TEST_CASE("sector solve with natural straight edges matches the cone") {
    // Radial data on Sector(R, theta) reduce to the 1-D weighted problem on
    // h = theta t; sup distance is O(h).
    const double theta = kPi / 2.0;
    const double h = 0.05;
    const TriMesh mesh = generate_mesh(Domain::sector(1.0, theta), h);
    SolverConfig cfg;
    auto [u, stats] = solve_p_laplacian(mesh, constant_field(mesh, 1.0), cfg);
    CHECK(stats.converged);

    const auto radial = solve_radial_poisson(
        WeightedHalfLine::cone(2.0, theta), 1.0, RadialDatum::constant(1.0),
        2.0);
    double sup = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const double r =
            std::hypot(mesh.vertices[i][0], mesh.vertices[i][1]);
        sup = std::max(sup, std::fabs(u.nodal()[i] - radial.value_at(r)));
    }
    CHECK(sup <= 3.0 * h * h + 5e-3 * h);  // O(h) budget, typically O(h^2)
}

TEST_CASE("superlevel quantities of a constant function") {
    const TriMesh mesh = generate_mesh(Domain::square(1.0), 0.25);
    const FemFunction c(mesh, constant_field(mesh, 2.0));
    CHECK(superlevel_measure(c, 1.0) == doctest::Approx(1.0));
    CHECK(superlevel_measure(c, 2.0) == 0.0);
    CHECK(superlevel_perimeter(c, 1.0) == 0.0);
    CHECK(superlevel_gradient_integral(c, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("superlevel measure and perimeter of the disk paraboloid") {
    // u = (1-|x|^2)/4, t = 1/8: level circle radius 1/sqrt(2).
    const double h = 0.02;
    const TriMesh mesh = generate_mesh(Domain::disk(1.0), h);
    std::vector<double> nodal(mesh.vertices.size());
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        nodal[i] = disk_solution(mesh.vertices[i][0], mesh.vertices[i][1]);
    }
    const FemFunction u(mesh, nodal);
    const double t = 1.0 / 8.0;
    CHECK(std::fabs(superlevel_measure(u, t) - kPi / 2.0) <= 4.0 * h);
    CHECK(std::fabs(superlevel_perimeter(u, t) - kPi * std::sqrt(2.0)) <=
          4.0 * h);
}

TEST_CASE("fem_to_measured preserves totals and means") {
    const TriMesh mesh = generate_mesh(Domain::square(1.0), 0.5);
    const FemFunction c(mesh, constant_field(mesh, 3.0));
    const MeasuredFunction mc = fem_to_measured(c);
    CHECK(mc.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
    for (const Cell& cell : mc.cells()) CHECK(cell.value == 3.0);

    // Two-triangle hand case.
    TriMesh two;
    two.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    two.triangles = {{0, 1, 2}, {0, 2, 3}};
    two.dirichlet = {0, 0, 0, 0};
    two.finalize();
    const FemFunction f(two, {0.0, 3.0, 6.0, -9.0});
    const MeasuredFunction mf = fem_to_measured(f);
    CHECK(mf.cells()[0].value == doctest::Approx(3.0));   // (0+3+6)/3
    CHECK(mf.cells()[1].value == doctest::Approx(5.0));   // (0+6+9)/3, |.|
    CHECK(mf.cells()[0].measure == doctest::Approx(0.5));
}

TEST_CASE("nodal csv export shape") {
    const TriMesh mesh = generate_mesh(Domain::square(1.0), 0.5);
    const FemFunction c(mesh, constant_field(mesh, 1.0));
    c.export_csv("/tmp/talenti_test_u.csv");
    std::ifstream in("/tmp/talenti_test_u.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,u");
}
