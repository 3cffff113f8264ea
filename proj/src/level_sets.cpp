#include "talenti/level_sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace talenti {

namespace {

// Fraction of a triangle with P1 vertex values (a, b, c) lying in {w > t}.
double superlevel_fraction(double a, double b, double c, double t) {
    // Sort descending.
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);

    if (t >= a) return 0.0;
    if (t < c) return 1.0;
    if (t >= b) {
        // Sub-triangle clipped at the largest vertex.
        return (a - t) * (a - t) / ((a - b) * (a - c));
    }
    // Complement of the sub-triangle clipped at the smallest vertex.
    return 1.0 - (t - c) * (t - c) / ((a - c) * (b - c));
}

}  // namespace

double superlevel_measure(const FemFunction& u, double t) {
    if (t < 0.0) throw std::domain_error("superlevel_measure: t >= 0");
    const TriMesh& mesh = u.mesh();
    double acc = 0.0;
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& tri = mesh.triangles[k];
        acc += mesh.cell_areas[k] *
               superlevel_fraction(std::fabs(u.nodal()[tri[0]]),
                                   std::fabs(u.nodal()[tri[1]]),
                                   std::fabs(u.nodal()[tri[2]]), t);
    }
    return acc;
}

double superlevel_perimeter(const FemFunction& u, double t) {
    if (t < 0.0) throw std::domain_error("superlevel_perimeter: t >= 0");
    const TriMesh& mesh = u.mesh();
    double acc = 0.0;
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& tri = mesh.triangles[k];
        double w[3] = {std::fabs(u.nodal()[tri[0]]),
                       std::fabs(u.nodal()[tri[1]]),
                       std::fabs(u.nodal()[tri[2]])};
        // Level line {w == t} crosses edges whose endpoints straddle t
        // (strictly-above vs not). Two crossings make a segment.
        double px[2], py[2];
        int n_cross = 0;
        for (int e = 0; e < 3 && n_cross < 2; ++e) {
            const int i = e, j = (e + 1) % 3;
            const bool ai = w[i] > t, aj = w[j] > t;
            if (ai == aj) continue;
            const double s = (t - w[i]) / (w[j] - w[i]);
            const auto& vi = mesh.vertices[tri[i]];
            const auto& vj = mesh.vertices[tri[j]];
            px[n_cross] = vi[0] + s * (vj[0] - vi[0]);
            py[n_cross] = vi[1] + s * (vj[1] - vi[1]);
            ++n_cross;
        }
        if (n_cross == 2) {
            acc += std::hypot(px[1] - px[0], py[1] - py[0]);
        }
    }
    return acc;
}

double superlevel_gradient_integral(const FemFunction& u, double t, double r) {
    if (t < 0.0) throw std::domain_error("superlevel_gradient_integral: t >= 0");
    const TriMesh& mesh = u.mesh();
    double acc = 0.0;
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& tri = mesh.triangles[k];
        const double frac =
            superlevel_fraction(std::fabs(u.nodal()[tri[0]]),
                                std::fabs(u.nodal()[tri[1]]),
                                std::fabs(u.nodal()[tri[2]]), t);
        if (frac == 0.0) continue;
        const auto& g = u.gradient(k);
        acc += mesh.cell_areas[k] * frac *
               std::pow(std::hypot(g[0], g[1]), r);
    }
    return acc;
}

MeasuredFunction fem_to_measured(const FemFunction& u) {
    const TriMesh& mesh = u.mesh();
    std::vector<Cell> cells(mesh.triangles.size());
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& tri = mesh.triangles[k];
        cells[k].value = (std::fabs(u.nodal()[tri[0]]) +
                          std::fabs(u.nodal()[tri[1]]) +
                          std::fabs(u.nodal()[tri[2]])) /
                         3.0;
        cells[k].measure = mesh.cell_areas[k];
    }
    return MeasuredFunction(std::move(cells));
}

}  // namespace talenti
