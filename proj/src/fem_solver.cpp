#include "talenti/fem_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace talenti {

namespace {

// Gradients of the three P1 basis functions on a triangle (constant vectors).
struct TriBasis {
    std::array<std::array<double, 2>, 3> grad;
    double area;
};

TriBasis basis_gradients(const TriMesh& mesh, int tri) {
    const auto& t = mesh.triangles[tri];
    const auto& p0 = mesh.vertices[t[0]];
    const auto& p1 = mesh.vertices[t[1]];
    const auto& p2 = mesh.vertices[t[2]];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p1[1] - p0[1]);
    TriBasis b;
    b.area = 0.5 * det;
    b.grad[0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
    b.grad[1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
    b.grad[2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};
    return b;
}

}  // namespace

FemFunction::FemFunction(const TriMesh& mesh, std::vector<double> nodal)
    : mesh_(&mesh), nodal_(std::move(nodal)) {
    if (nodal_.size() != mesh.vertices.size()) {
        throw std::invalid_argument("FemFunction: nodal size mismatch");
    }
    gradients_.resize(mesh.triangles.size());
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const TriBasis b = basis_gradients(mesh, k);
        const auto& t = mesh.triangles[k];
        double gx = 0.0, gy = 0.0;
        for (int v = 0; v < 3; ++v) {
            gx += nodal_[t[v]] * b.grad[v][0];
            gy += nodal_[t[v]] * b.grad[v][1];
        }
        gradients_[k] = {gx, gy};
    }
}

double FemFunction::max_abs() const {
    double m = 0.0;
    for (double v : nodal_) m = std::max(m, std::fabs(v));
    return m;
}

double FemFunction::min_value() const {
    double m = nodal_.empty() ? 0.0 : nodal_[0];
    for (double v : nodal_) m = std::min(m, v);
    return m;
}

double FemFunction::lr_gradient_norm(double r) const {
    double acc = 0.0;
    for (int k = 0; k < mesh_->triangle_count(); ++k) {
        const auto& g = gradients_[k];
        acc += mesh_->cell_areas[k] * std::pow(std::hypot(g[0], g[1]), r);
    }
    return acc;
}

void FemFunction::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("FemFunction: cannot open " + path);
    out << "x,y,u\n";
    char buf[96];
    for (std::size_t i = 0; i < nodal_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n",
                      mesh_->vertices[i][0], mesh_->vertices[i][1], nodal_[i]);
        out << buf;
    }
}

void SolverConfig::validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("SolverConfig: p must be > 1");
    if (delta_reg < 0.0 || !(energy_tolerance > 0.0) ||
        !(residual_tolerance > 0.0) || max_newton_iterations < 1) {
        throw std::invalid_argument("SolverConfig: bad tolerances");
    }
}

std::vector<double> lumped_vertex_weights(const TriMesh& mesh) {
    std::vector<double> w(mesh.vertices.size(), 0.0);
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const double third = mesh.cell_areas[k] / 3.0;
        for (int v : mesh.triangles[k]) w[v] += third;
    }
    return w;
}

namespace {

struct PLaplaceProblem {
    const TriMesh* mesh;
    std::vector<int> free_index;   // vertex -> free dof (-1 if Dirichlet)
    std::vector<int> free_vertex;  // free dof -> vertex
    std::vector<TriBasis> basis;
    std::vector<double> load;      // f_i * w_i per vertex
    double p;

    // (|grad u|^2 + delta^2)^{p/2} energy and its gradient on free dofs.
    double energy(const std::vector<double>& u, double delta) const {
        double acc = 0.0;
        for (int k = 0; k < mesh->triangle_count(); ++k) {
            const auto& t = mesh->triangles[k];
            double gx = 0.0, gy = 0.0;
            for (int v = 0; v < 3; ++v) {
                gx += u[t[v]] * basis[k].grad[v][0];
                gy += u[t[v]] * basis[k].grad[v][1];
            }
            acc += basis[k].area / p *
                   std::pow(gx * gx + gy * gy + delta * delta, 0.5 * p);
        }
        for (std::size_t i = 0; i < u.size(); ++i) acc -= load[i] * u[i];
        return acc;
    }

    Eigen::VectorXd gradient(const std::vector<double>& u,
                             double delta) const {
        Eigen::VectorXd g =
            Eigen::VectorXd::Zero(static_cast<int>(free_vertex.size()));
        for (int k = 0; k < mesh->triangle_count(); ++k) {
            const auto& t = mesh->triangles[k];
            double gx = 0.0, gy = 0.0;
            for (int v = 0; v < 3; ++v) {
                gx += u[t[v]] * basis[k].grad[v][0];
                gy += u[t[v]] * basis[k].grad[v][1];
            }
            const double w2 = gx * gx + gy * gy + delta * delta;
            const double coeff =
                basis[k].area * std::pow(w2, 0.5 * p - 1.0);
            for (int v = 0; v < 3; ++v) {
                const int fi = free_index[t[v]];
                if (fi >= 0) {
                    g[fi] += coeff * (gx * basis[k].grad[v][0] +
                                      gy * basis[k].grad[v][1]);
                }
            }
        }
        for (std::size_t f = 0; f < free_vertex.size(); ++f) {
            g[static_cast<int>(f)] -= load[free_vertex[f]];
        }
        return g;
    }

    Eigen::SparseMatrix<double> hessian(const std::vector<double>& u,
                                        double delta) const {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(9 * mesh->triangles.size());
        for (int k = 0; k < mesh->triangle_count(); ++k) {
            const auto& t = mesh->triangles[k];
            double gx = 0.0, gy = 0.0;
            for (int v = 0; v < 3; ++v) {
                gx += u[t[v]] * basis[k].grad[v][0];
                gy += u[t[v]] * basis[k].grad[v][1];
            }
            const double w2 = gx * gx + gy * gy + delta * delta;
            const double c1 = basis[k].area * std::pow(w2, 0.5 * p - 1.0);
            const double c2 =
                (p == 2.0) ? 0.0
                           : (p - 2.0) * basis[k].area *
                                 std::pow(w2, 0.5 * p - 2.0);
            for (int a = 0; a < 3; ++a) {
                const int fa = free_index[t[a]];
                if (fa < 0) continue;
                const double ga = gx * basis[k].grad[a][0] +
                                  gy * basis[k].grad[a][1];
                for (int b = 0; b < 3; ++b) {
                    const int fb = free_index[t[b]];
                    if (fb < 0) continue;
                    const double gb = gx * basis[k].grad[b][0] +
                                      gy * basis[k].grad[b][1];
                    const double dot =
                        basis[k].grad[a][0] * basis[k].grad[b][0] +
                        basis[k].grad[a][1] * basis[k].grad[b][1];
                    trip.emplace_back(fa, fb, c1 * dot + c2 * ga * gb);
                }
            }
        }
        Eigen::SparseMatrix<double> H(static_cast<int>(free_vertex.size()),
                                      static_cast<int>(free_vertex.size()));
        H.setFromTriplets(trip.begin(), trip.end());
        return H;
    }
};

}  // namespace

std::pair<FemFunction, SolveStats> solve_p_laplacian(
    const TriMesh& mesh, const std::vector<double>& f_nodal,
    const SolverConfig& cfg) {
    cfg.validate();
    if (f_nodal.size() != mesh.vertices.size()) {
        throw std::invalid_argument("solve_p_laplacian: f size mismatch");
    }
    for (double fv : f_nodal) {
        if (!std::isfinite(fv)) {
            throw std::invalid_argument("solve_p_laplacian: non-finite f");
        }
    }

    PLaplaceProblem prob;
    prob.mesh = &mesh;
    prob.p = cfg.p;
    prob.free_index.assign(mesh.vertices.size(), -1);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        if (!mesh.dirichlet[i]) {
            prob.free_index[i] = static_cast<int>(prob.free_vertex.size());
            prob.free_vertex.push_back(static_cast<int>(i));
        }
    }
    prob.basis.resize(mesh.triangles.size());
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        prob.basis[k] = basis_gradients(mesh, k);
    }
    const std::vector<double> weights = lumped_vertex_weights(mesh);
    prob.load.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        prob.load[i] = f_nodal[i] * weights[i];
    }

    std::vector<double> u(mesh.vertices.size(), 0.0);
    SolveStats stats;
    const int n_free = static_cast<int>(prob.free_vertex.size());
    if (n_free == 0) {
        stats.converged = true;
        return {FemFunction(mesh, std::move(u)), stats};
    }

    double load_scale = 0.0;
    for (int f = 0; f < n_free; ++f) {
        load_scale =
            std::max(load_scale, std::fabs(prob.load[prob.free_vertex[f]]));
    }
    const double res_tol =
        cfg.residual_tolerance * std::max(1.0, load_scale);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    bool pattern_ready = false;

    auto newton_step = [&](double delta, int max_iters) -> bool {
        double J = prob.energy(u, delta);
        stats.energy_trace.clear();
        stats.energy_trace.push_back(J);
        int stagnant = 0;
        for (int it = 0; it < max_iters; ++it) {
            Eigen::VectorXd g = prob.gradient(u, delta);
            stats.final_residual = g.lpNorm<Eigen::Infinity>();
            if (stats.final_residual <= res_tol) return true;
            if (stagnant >= 3) break;

            Eigen::SparseMatrix<double> H = prob.hessian(u, delta);
            if (!pattern_ready) {
                solver.analyzePattern(H);
                pattern_ready = true;
            }
            solver.factorize(H);
            if (solver.info() != Eigen::Success) {
                throw std::runtime_error(
                    "solve_p_laplacian: singular stiffness matrix");
            }
            Eigen::VectorXd d = solver.solve(-g);
            const double slope = g.dot(d);
            ++stats.iterations;

            // Endgame: once the predicted decrease sinks below the energy
            // evaluation noise, Armijo comparisons are meaningless. Take
            // the plain Newton step and judge it by the gradient instead.
            const double noise = 64.0 * 2.2e-16 * std::max(1.0, std::fabs(J));
            if (-slope <= noise) {
                std::vector<double> trial = u;
                for (int f = 0; f < n_free; ++f) {
                    trial[prob.free_vertex[f]] += d[f];
                }
                const double res_new =
                    prob.gradient(trial, delta).lpNorm<Eigen::Infinity>();
                if (res_new < stats.final_residual) {
                    u = trial;
                    stats.final_residual = res_new;
                    if (res_new <= res_tol) return true;
                    continue;
                }
                break;  // gradient floor reached
            }

            // Armijo backtracking on the regularized energy.
            double alpha = 1.0;
            bool accepted = false;
            std::vector<double> trial = u;
            for (int ls = 0; ls < 50; ++ls) {
                for (int f = 0; f < n_free; ++f) {
                    trial[prob.free_vertex[f]] =
                        u[prob.free_vertex[f]] + alpha * d[f];
                }
                const double Jt = prob.energy(trial, delta);
                if (Jt <= J + 1e-4 * alpha * slope) {
                    u = trial;
                    const double drop = J - Jt;
                    J = Jt;
                    stats.energy_trace.push_back(J);
                    accepted = true;
                    // Stagnating energy alone is not convergence; allow a
                    // few more Newton polishing steps before giving up.
                    if (drop <=
                        cfg.energy_tolerance * std::max(1.0, std::fabs(J))) {
                        ++stagnant;
                    } else {
                        stagnant = 0;
                    }
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
        }
        stats.final_residual =
            prob.gradient(u, delta).lpNorm<Eigen::Infinity>();
        return stats.final_residual <= res_tol;
    };

    if (cfg.p == 2.0) {
        // Quadratic energy: one Newton step from zero is exact.
        stats.converged = newton_step(0.0, 2);
        stats.final_energy = prob.energy(u, 0.0);
    } else {
        // delta-continuation: loose solves on the way down, full solve at
        // the final regularization.
        std::vector<double> deltas;
        for (double d = cfg.delta_start; d > cfg.delta_reg; d *= 0.5) {
            deltas.push_back(d);
        }
        deltas.push_back(cfg.delta_reg);
        for (std::size_t s = 0; s + 1 < deltas.size(); ++s) {
            newton_step(deltas[s], 8);
        }
        stats.converged =
            newton_step(deltas.back(), cfg.max_newton_iterations);
        stats.final_energy = prob.energy(u, deltas.back());
    }

    return {FemFunction(mesh, std::move(u)), stats};
}

}  // namespace talenti
