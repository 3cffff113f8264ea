#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace talenti {

/// Planar domains with a structured generator: polar meshes for the round
/// ones, a diagonal split for the square. Deterministic and dependency-free.
struct Domain {
    enum class Shape { Disk, Sector, Square, Annulus };

    Shape shape = Shape::Disk;
    double R = 1.0;        // outer radius (Disk/Sector/Annulus)
    double theta = 0.0;    // opening angle (Sector)
    double L = 1.0;        // side (Square)
    double r_inner = 0.0;  // inner radius (Annulus)

    static Domain disk(double R);
    static Domain sector(double R, double theta);
    static Domain square(double L);
    static Domain annulus(double r_inner, double R);

    double area() const;
    std::string describe() const;
};

/// P1 triangulation with Dirichlet vertex tags. Triangles are positively
/// oriented; degenerate triangles are rejected at construction.
struct TriMesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<char> dirichlet;
    std::vector<double> cell_areas;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    double total_area() const;
    double max_edge_length() const;

    /// Computes areas, enforces orientation, validates. Called by the
    /// generators; call it after assembling a mesh by hand.
    void finalize();

    /// Plain text: [OFF] <nv> <nt> [ne], nv coordinate rows, nt index rows
    /// (either `i j k` or OFF-style `3 i j k`). Dirichlet tags are inferred
    /// from the boundary edges.
    static TriMesh import_off(std::istream& in);
    static TriMesh import_off_file(const std::string& path);
};

/// Structured quasi-uniform triangulation, max edge <= 1.5 * target_h.
/// Dirichlet tags: full boundary for Disk/Square/Annulus; only the arc
/// rho = R for Sector (the straight edges are natural, modelling the cone).
TriMesh generate_mesh(const Domain& domain, double target_h);

}  // namespace talenti
