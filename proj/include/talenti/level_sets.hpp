#pragma once

#include "talenti/fem_solver.hpp"
#include "talenti/rearrangement.hpp"

namespace talenti {

/// Superlevel-set quantities of the P1 interpolant of |u| on the mesh.
/// Measures are exact per-triangle linear-cut areas; perimeters are
/// marching-triangles level-line lengths (boundary edges of the domain
/// never contribute, which matches the cone reading of sector meshes).

double superlevel_measure(const FemFunction& u, double t);

double superlevel_perimeter(const FemFunction& u, double t);

/// int_{{|u|>t}} |grad u|^r dm, exact per triangle (the gradient is
/// constant on each cell).
double superlevel_gradient_integral(const FemFunction& u, double t,
                                    double r = 1.0);

/// One cell per triangle: value = triangle mean of |u|, measure = area.
MeasuredFunction fem_to_measured(const FemFunction& u);

}  // namespace talenti
