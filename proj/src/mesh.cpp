#include "talenti/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace talenti {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_area(const std::array<double, 2>& a,
                   const std::array<double, 2>& b,
                   const std::array<double, 2>& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) -
                  (c[0] - a[0]) * (b[1] - a[1]));
}

int rings_for(double extent, double target_h) {
    return std::max(1, static_cast<int>(std::ceil(extent / target_h - 1e-9)));
}

}  // namespace

Domain Domain::disk(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("disk: R must be > 0");
    Domain d;
    d.shape = Shape::Disk;
    d.R = R;
    return d;
}

Domain Domain::sector(double R, double theta) {
    if (!(R > 0.0) || !(theta > 0.0) || theta > kTwoPi + 1e-12) {
        throw std::invalid_argument("sector: need R > 0, theta in (0, 2pi]");
    }
    Domain d;
    d.shape = Shape::Sector;
    d.R = R;
    d.theta = std::min(theta, kTwoPi);
    return d;
}

Domain Domain::square(double L) {
    if (!(L > 0.0)) throw std::invalid_argument("square: L must be > 0");
    Domain d;
    d.shape = Shape::Square;
    d.L = L;
    return d;
}

Domain Domain::annulus(double r_inner, double R) {
    if (!(r_inner > 0.0) || !(R > r_inner)) {
        throw std::invalid_argument("annulus: need 0 < r_inner < R");
    }
    Domain d;
    d.shape = Shape::Annulus;
    d.r_inner = r_inner;
    d.R = R;
    return d;
}

double Domain::area() const {
    switch (shape) {
        case Shape::Disk:
            return std::numbers::pi * R * R;
        case Shape::Sector:
            return 0.5 * theta * R * R;
        case Shape::Square:
            return L * L;
        case Shape::Annulus:
            return std::numbers::pi * (R * R - r_inner * r_inner);
    }
    return 0.0;
}

std::string Domain::describe() const {
    std::ostringstream out;
    switch (shape) {
        case Shape::Disk:
            out << "disk(R=" << R << ")";
            break;
        case Shape::Sector:
            out << "sector(R=" << R << ",theta=" << theta << ")";
            break;
        case Shape::Square:
            out << "square(L=" << L << ")";
            break;
        case Shape::Annulus:
            out << "annulus(r=" << r_inner << ",R=" << R << ")";
            break;
    }
    return out.str();
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (double a : cell_areas) s += a;
    return s;
}

double TriMesh::max_edge_length() const {
    double worst = 0.0;
    for (const auto& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            const auto& a = vertices[t[e]];
            const auto& b = vertices[t[(e + 1) % 3]];
            worst = std::max(worst, std::hypot(b[0] - a[0], b[1] - a[1]));
        }
    }
    return worst;
}

void TriMesh::finalize() {
    if (dirichlet.size() != vertices.size()) {
        dirichlet.assign(vertices.size(), 0);
    }
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& v : vertices) {
        xmin = std::min(xmin, v[0]);
        xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
    }
    const double bbox = std::max(xmax - xmin, ymax - ymin);

    cell_areas.resize(triangles.size());
    for (std::size_t i = 0; i < triangles.size(); ++i) {
        auto& t = triangles[i];
        double a = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
        if (a < 0.0) {
            std::swap(t[1], t[2]);
            a = -a;
        }
        if (!(a > 1e-14 * bbox * bbox)) {
            throw std::runtime_error("TriMesh: degenerate triangle");
        }
        cell_areas[i] = a;
    }
}

namespace {

// Ring-graded polar mesh over an angular span. `segments_per_ring_unit` is
// the azimuthal segment count at ring 1; ring i carries i times as many.
// wrap=true closes the full circle.
TriMesh polar_mesh(double R, int n_rings, int c, double span, bool wrap) {
    TriMesh m;
    std::vector<int> ring_start(n_rings + 1);
    m.vertices.push_back({0.0, 0.0});
    ring_start[0] = 0;
    for (int i = 1; i <= n_rings; ++i) {
        ring_start[i] = m.vertices.size();
        const double r = R * i / n_rings;
        const int segs = c * i;
        const int pts = wrap ? segs : segs + 1;
        for (int j = 0; j < pts; ++j) {
            const double phi = span * j / segs;
            m.vertices.push_back({r * std::cos(phi), r * std::sin(phi)});
        }
    }

    auto ring_index = [&](int ring, int local) {
        const int segs = c * ring;
        if (wrap) local %= segs;
        return ring_start[ring] + local;
    };

    // Center fan.
    for (int s = 0; s < c; ++s) {
        m.triangles.push_back({0, ring_index(1, s), ring_index(1, s + 1)});
    }
    // Between rings i and i+1: per macro sector, i inner and i+1 outer
    // segments, triangulated with alternating strips.
    for (int i = 1; i < n_rings; ++i) {
        for (int s = 0; s < c; ++s) {
            const int ib = s * i;            // inner local base
            const int ob = s * (i + 1);      // outer local base
            for (int j = 0; j <= i; ++j) {
                m.triangles.push_back({ring_index(i + 1, ob + j),
                                       ring_index(i + 1, ob + j + 1),
                                       ring_index(i, ib + j)});
            }
            for (int j = 0; j < i; ++j) {
                m.triangles.push_back({ring_index(i, ib + j),
                                       ring_index(i + 1, ob + j + 1),
                                       ring_index(i, ib + j + 1)});
            }
        }
    }

    m.dirichlet.assign(m.vertices.size(), 0);
    for (std::size_t k = ring_start[n_rings]; k < m.vertices.size(); ++k) {
        m.dirichlet[k] = 1;
    }
    m.finalize();
    return m;
}

// Elliptical square-to-disk map: grid cells stay asymptotically
// parallelogram, which keeps the nodal FEM error cleanly second order
// (ring-graded polar meshes lose half an order at the center fan). The
// square boundary lands exactly on the circle.
TriMesh mapped_disk_mesh(double R, double target_h) {
    // Worst edge (center-cell diagonal, slightly stretched by the map)
    // measures ~3.9 R/n, so this density keeps max edge <= 1.5 target_h.
    int n = std::max(2, static_cast<int>(std::ceil(2.8 * R / target_h)));
    if (n % 2) ++n;  // keep the center on a vertex
    TriMesh m;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const double a = 2.0 * i / n - 1.0;
            const double b = 2.0 * j / n - 1.0;
            m.vertices.push_back(
                {R * a * std::sqrt(1.0 - 0.5 * b * b),
                 R * b * std::sqrt(1.0 - 0.5 * a * a)});
        }
    }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    m.dirichlet.assign(m.vertices.size(), 0);
    for (int i = 0; i <= n; ++i) {
        m.dirichlet[id(i, 0)] = m.dirichlet[id(i, n)] = 1;
        m.dirichlet[id(0, i)] = m.dirichlet[id(n, i)] = 1;
    }
    m.finalize();
    return m;
}

TriMesh square_mesh(double L, double target_h) {
    const int n = rings_for(L, target_h);
    TriMesh m;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            m.vertices.push_back({L * i / n, L * j / n});
        }
    }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    m.dirichlet.assign(m.vertices.size(), 0);
    for (int i = 0; i <= n; ++i) {
        m.dirichlet[id(i, 0)] = m.dirichlet[id(i, n)] = 1;
        m.dirichlet[id(0, i)] = m.dirichlet[id(n, i)] = 1;
    }
    m.finalize();
    return m;
}

TriMesh annulus_mesh(double r_in, double R, double target_h) {
    const int n_r = rings_for(R - r_in, target_h);
    const int n_phi = std::max(
        8, static_cast<int>(std::ceil(kTwoPi * R / target_h - 1e-9)));
    TriMesh m;
    for (int i = 0; i <= n_r; ++i) {
        const double r = r_in + (R - r_in) * i / n_r;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = kTwoPi * j / n_phi;
            m.vertices.push_back({r * std::cos(phi), r * std::sin(phi)});
        }
    }
    auto id = [n_phi](int ring, int j) { return ring * n_phi + (j % n_phi); };
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    m.dirichlet.assign(m.vertices.size(), 0);
    for (int j = 0; j < n_phi; ++j) {
        m.dirichlet[id(0, j)] = 1;
        m.dirichlet[id(n_r, j)] = 1;
    }
    m.finalize();
    return m;
}

}  // namespace

TriMesh generate_mesh(const Domain& domain, double target_h) {
    if (!(target_h > 0.0)) {
        throw std::invalid_argument("generate_mesh: target_h must be > 0");
    }
    switch (domain.shape) {
        case Domain::Shape::Disk:
            return mapped_disk_mesh(domain.R, target_h);
        case Domain::Shape::Sector: {
            if (domain.theta >= kTwoPi - 1e-12) {
                return polar_mesh(domain.R, rings_for(domain.R, target_h), 6,
                                  kTwoPi, true);
            }
            const int c = std::max(
                1, static_cast<int>(std::ceil(3.0 * domain.theta /
                                                  std::numbers::pi -
                                              1e-9)));
            return polar_mesh(domain.R, rings_for(domain.R, target_h), c,
                              domain.theta, false);
        }
        case Domain::Shape::Square:
            return square_mesh(domain.L, target_h);
        case Domain::Shape::Annulus:
            return annulus_mesh(domain.r_inner, domain.R, target_h);
    }
    throw std::logic_error("generate_mesh: unknown domain");
}

TriMesh TriMesh::import_off(std::istream& in) {
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        tokens.push_back(tok);
    }
    std::size_t pos = 0;
    if (!tokens.empty() && (tokens[0] == "OFF" || tokens[0] == "off")) ++pos;
    auto next_int = [&]() {
        if (pos >= tokens.size()) throw std::runtime_error("off: truncated");
        return std::stoi(tokens[pos++]);
    };
    auto next_double = [&]() {
        if (pos >= tokens.size()) throw std::runtime_error("off: truncated");
        return std::stod(tokens[pos++]);
    };

    const int nv = next_int();
    const int nt = next_int();
    // Optional edge count (real OFF headers carry one).
    if (pos + 2 * static_cast<std::size_t>(nv) + 3 * static_cast<std::size_t>(nt) <
        tokens.size()) {
        ++pos;
    }

    TriMesh m;
    m.vertices.resize(nv);
    for (int i = 0; i < nv; ++i) {
        m.vertices[i][0] = next_double();
        m.vertices[i][1] = next_double();
    }
    const std::size_t remaining = tokens.size() - pos;
    const bool counted_rows = remaining >= 4 * static_cast<std::size_t>(nt);
    m.triangles.resize(nt);
    for (int i = 0; i < nt; ++i) {
        if (counted_rows) {
            const int k = next_int();
            if (k != 3) throw std::runtime_error("off: non-triangle face");
        }
        m.triangles[i] = {next_int(), next_int(), next_int()};
        for (int v : m.triangles[i]) {
            if (v < 0 || v >= nv) {
                throw std::runtime_error("off: vertex index out of range");
            }
        }
    }

    // Boundary = edges referenced by exactly one triangle.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : m.triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    }
    m.dirichlet.assign(m.vertices.size(), 0);
    for (const auto& [edge, count] : edge_count) {
        if (count == 1) {
            m.dirichlet[edge.first] = 1;
            m.dirichlet[edge.second] = 1;
        }
    }
    m.finalize();
    return m;
}

TriMesh TriMesh::import_off_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_off: cannot open " + path);
    return import_off(in);
}

}  // namespace talenti
