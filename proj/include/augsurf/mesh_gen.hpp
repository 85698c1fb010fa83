// Copyright 2026 The augsurf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <augsurf/quad_mesh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace augsurf::gen {

/// Open nx x ny grid of unit squares in the z = 0 plane.
inline QuadMesh plane_grid(int nx, int ny, double spacing = 1.0) {
    QuadMesh m;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            m.vertices.emplace_back(i * spacing, j * spacing, 0.0);
        }
    }
    auto id = [nx](int i, int j) { return i + (nx + 1) * j; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return m;
}

/// Torus with n segments around the main axis and m around the tube. The
/// optional warp in [0, 1) makes the angular sampling uneven.
inline QuadMesh torus_grid(int n, int m, double major = 3.0, double minor = 1.0, double warp = 0.0) {
    QuadMesh mesh;
    const double two_pi = 2.0 * std::numbers::pi;
    auto angle = [&](int i, int count) {
        const double s = static_cast<double>(i) / count;
        return two_pi * s + warp * std::sin(two_pi * s);
    };
    for (int j = 0; j < m; ++j) {
        const double phi = angle(j, m);
        for (int i = 0; i < n; ++i) {
            const double theta = angle(i, n);
            const double rr = major + minor * std::cos(phi);
            mesh.vertices.emplace_back(rr * std::cos(theta), rr * std::sin(theta), minor * std::sin(phi));
        }
    }
    auto id = [n, m](int i, int j) { return (i % n) + n * (j % m); };
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return mesh;
}

/// Torus whose spacing around the main axis is uneven on the outer side
/// and even on the inner side: theta_ij = 2 pi s + amount w_j sin(2 pi s)
/// with w_j = (1 + cos phi_j) / 2. Parallel edges of one ribbon then have
/// different relative lengths.
inline QuadMesh torus_uneven(int n, int m, double amount, double major = 3.0, double minor = 1.0) {
    QuadMesh mesh;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < m; ++j) {
        const double phi = two_pi * j / m;
        const double w = 0.5 * (1.0 + std::cos(phi));
        for (int i = 0; i < n; ++i) {
            const double s = static_cast<double>(i) / n;
            const double theta = two_pi * s + amount * w * std::sin(two_pi * s);
            const double rr = major + minor * std::cos(phi);
            mesh.vertices.emplace_back(rr * std::cos(theta), rr * std::sin(theta), minor * std::sin(phi));
        }
    }
    auto id = [n, m](int i, int j) { return (i % n) + n * (j % m); };
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return mesh;
}

/// Nearest point on the torus of torus_grid.
inline Vec3 project_to_torus(const Vec3& p, double major = 3.0, double minor = 1.0) {
    Vec3 radial(p.x(), p.y(), 0.0);
    const double len = radial.norm();
    radial = len > 0.0 ? Vec3(radial / len) : Vec3(1.0, 0.0, 0.0);
    const Vec3 centre = major * radial;
    const Vec3 off = p - centre;
    return centre + minor * off.normalized();
}

inline QuadMesh cube(double size = 1.0) {
    QuadMesh m;
    for (int k = 0; k < 8; ++k) {
        m.vertices.emplace_back(size * (k & 1), size * ((k >> 1) & 1), size * ((k >> 2) & 1));
    }
    m.faces = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    return m;
}

/// Cube with every face split n x n, projected to the sphere. Eight
/// valence-3 vertices, all other vertices regular.
inline QuadMesh quad_sphere(int n, double radius = 1.0) {
    QuadMesh m;
    std::map<std::array<int, 3>, int> index;
    auto vertex = [&](std::array<int, 3> g) {
        auto it = index.find(g);
        if (it != index.end()) {
            return it->second;
        }
        const Vec3 c(2.0 * g[0] / n - 1.0, 2.0 * g[1] / n - 1.0, 2.0 * g[2] / n - 1.0);
        m.vertices.push_back(radius * c.normalized());
        const int id = static_cast<int>(m.vertices.size()) - 1;
        index.emplace(g, id);
        return id;
    };
    // Each cube face: fixed axis, value, and an (s, t) frame with outward normal s x t.
    struct Side {
        int axis, value, s, t;
    };
    const Side sides[6] = {{0, 0, 2, 1}, {0, 1, 1, 2}, {1, 0, 0, 2}, {1, 1, 2, 0}, {2, 0, 1, 0}, {2, 1, 0, 1}};
    for (const Side& sd : sides) {
        auto g = [&](int a, int b) {
            std::array<int, 3> r{};
            r[sd.axis] = sd.value * n;
            r[sd.s] = a;
            r[sd.t] = b;
            return vertex(r);
        };
        for (int b = 0; b < n; ++b) {
            for (int a = 0; a < n; ++a) {
                m.faces.push_back({g(a, b), g(a + 1, b), g(a + 1, b + 1), g(a, b + 1)});
            }
        }
    }
    return m;
}

/// Turns the edge between two quads to the next diagonal of their hexagon.
/// The endpoints lose one valence, the two hexagon vertices gain one.
/// Needs connectivity; returns a mesh without it.
inline QuadMesh rotate_edge(const QuadMesh& mesh, int edge) {
    require_connectivity(mesh);
    const Edge& e = mesh.edges[edge];
    if (e.boundary()) {
        throw Error(ErrorKind::Domain, "cannot rotate a boundary edge");
    }
    const int h = e.he0;
    const int t = e.he1;
    // Hexagon a, e1, f1, b, c, d with h = a -> b in face [a b c d], t = b -> a.
    const int a = mesh.origin(h);
    const int b = mesh.dest(h);
    const int c = mesh.dest(QuadMesh::next(h));
    const int d = mesh.origin(QuadMesh::prev(h));
    const int e1 = mesh.dest(QuadMesh::next(t));
    const int f1 = mesh.origin(QuadMesh::prev(t));
    QuadMesh out;
    out.vertices = mesh.vertices;
    out.faces = mesh.faces;
    out.faces[mesh.halfedges[h].face] = {d, a, e1, f1};
    out.faces[mesh.halfedges[t].face] = {f1, b, c, d};
    return out;
}

/// Laplacian smoothing of interior vertices, restricted to `only` when it
/// is non-empty. `project` maps the result back onto a reference surface.
template <class Project>
QuadMesh smooth_interior(const QuadMesh& mesh, int iterations, Project project, const std::vector<int>& only = {}) {
    require_connectivity(mesh);
    QuadMesh out = mesh;
    std::vector<int> targets = only;
    if (targets.empty()) {
        targets.resize(out.vertices.size());
        std::iota(targets.begin(), targets.end(), 0);
    }
    for (int it = 0; it < iterations; ++it) {
        std::vector<Vec3> next = out.vertices;
        for (int v : targets) {
            if (out.is_boundary(v) || out.valence(v) == 0) {
                continue;
            }
            Vec3 sum = Vec3::Zero();
            for (const Spoke& s : out.fans[v]) {
                sum += out.vertices[s.neighbor];
            }
            next[v] = project(Vec3(sum / out.valence(v)));
        }
        out.vertices = std::move(next);
    }
    return out;
}

inline QuadMesh smooth_interior(const QuadMesh& mesh, int iterations) {
    return smooth_interior(mesh, iterations, [](const Vec3& p) { return p; });
}

/// Vertices within `rings` edge hops of the seeds, sorted.
inline std::vector<int> vertex_rings(const QuadMesh& mesh, std::vector<int> seeds, int rings) {
    require_connectivity(mesh);
    std::vector<char> seen(mesh.vertices.size(), 0);
    for (int v : seeds) {
        seen[v] = 1;
    }
    for (int r = 0; r < rings; ++r) {
        std::vector<int> grown;
        for (int v : seeds) {
            for (const Spoke& s : mesh.fans[v]) {
                if (!seen[s.neighbor]) {
                    seen[s.neighbor] = 1;
                    grown.push_back(s.neighbor);
                }
            }
        }
        seeds.insert(seeds.end(), grown.begin(), grown.end());
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

/// Adds uniform noise of the given amplitude to every coordinate.
inline QuadMesh jitter(QuadMesh mesh, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    for (Vec3& p : mesh.vertices) {
        for (int k = 0; k < 3; ++k) {
            p[k] += u(rng);
        }
    }
    return mesh;
}

/// Planar grid with a rotated edge near the middle: two valence-3 and two
/// valence-5 interior vertices, smoothed so every quad stays convex.
inline QuadMesh planar_irregular(int n = 8) {
    QuadMesh g = build_connectivity(plane_grid(n, n));
    const int a = n / 2 + (n + 1) * (n / 2);
    const int b = a + 1;
    const int h = g.find_halfedge(a, b);
    QuadMesh r = build_connectivity(rotate_edge(g, g.edge_of(h)));
    return smooth_interior(r, 50);
}

/// Torus grid with one rotated edge, relaxed on the torus near that edge.
inline QuadMesh torus_irregular(int n = 12, int m = 8, double major = 3.0, double minor = 1.0) {
    QuadMesh g = build_connectivity(torus_grid(n, m, major, minor));
    const int a = n / 2 + n * (m / 2);
    const int h = g.find_halfedge(a, a + 1);
    QuadMesh r = build_connectivity(rotate_edge(g, g.edge_of(h)));
    const auto region = vertex_rings(r, {a, a + 1}, 2);
    return smooth_interior(r, 20, [&](const Vec3& p) { return project_to_torus(p, major, minor); }, region);
}

} // namespace augsurf::gen
