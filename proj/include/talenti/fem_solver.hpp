#pragma once

#include <array>
#include <string>
#include <vector>

#include "talenti/mesh.hpp"

namespace talenti {

/// P1 finite-element function on a TriMesh. Per-triangle gradients are the
/// exact gradients of the nodal interpolant, cached at construction.
class FemFunction {
public:
    FemFunction(const TriMesh& mesh, std::vector<double> nodal);

    const TriMesh& mesh() const { return *mesh_; }
    const std::vector<double>& nodal() const { return nodal_; }
    const std::array<double, 2>& gradient(int tri) const {
        return gradients_[tri];
    }

    double max_abs() const;
    double min_value() const;
    /// sum_T area_T |grad u|_T|^r.
    double lr_gradient_norm(double r) const;

    void export_csv(const std::string& path) const;  // x,y,u

private:
    const TriMesh* mesh_;
    std::vector<double> nodal_;
    std::vector<std::array<double, 2>> gradients_;
};

struct SolverConfig {
    double p = 2.0;
    double delta_reg = 1e-6;   // final regularization for p != 2
    double delta_start = 1e-2; // continuation start, halved per stage
    int max_newton_iterations = 60;  // per continuation stage
    double energy_tolerance = 1e-13;
    double residual_tolerance = 1e-10;

    void validate() const;
};

struct SolveStats {
    int iterations = 0;
    double final_energy = 0.0;
    double final_residual = 0.0;
    std::vector<double> energy_trace;  // accepted steps, final stage
    bool converged = false;
};

/// Minimizes J(u) = (1/p) int (|grad u|^2 + delta^2)^{p/2} - int f u over P1
/// functions vanishing on Dirichlet nodes. p == 2 is a single SPD solve;
/// otherwise damped Newton with delta-continuation and Armijo line search.
/// The load is mass-lumped. Throws std::runtime_error on a singular system;
/// non-convergence is reported through the stats, not thrown.
std::pair<FemFunction, SolveStats> solve_p_laplacian(
    const TriMesh& mesh, const std::vector<double>& f_nodal,
    const SolverConfig& cfg);

/// Mass-lumped vertex weights: w_i = (1/3) sum of adjacent triangle areas.
std::vector<double> lumped_vertex_weights(const TriMesh& mesh);

}  // namespace talenti
