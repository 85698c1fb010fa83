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

#include <augsurf/errors.hpp>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace augsurf {

using Vec3 = Eigen::Vector3d;

struct HalfEdge {
    int origin = -1;
    int twin = -1; // -1 on the boundary
    int face = -1;
    int edge = -1;
};

/// Undirected edge. he0 starts at v0; he1 is -1 for boundary edges.
struct Edge {
    int v0 = -1;
    int v1 = -1;
    int he0 = -1;
    int he1 = -1;

    bool boundary() const {
        return he1 < 0;
    }

    int other(int v) const {
        return v == v0 ? v1 : v0;
    }
};

/// One outgoing edge of a vertex fan, listed counter-clockwise. `face` is the
/// face between this spoke and the next one (-1 past the last spoke of a
/// boundary vertex). `out` is the half-edge leaving the vertex along this
/// spoke, -1 when only the incoming half-edge exists.
struct Spoke {
    int neighbor = -1;
    int edge = -1;
    int face = -1;
    int out = -1;
};

/// Quad-only polygon mesh. Half-edge h = 4 * face + corner, so next/prev are
/// index arithmetic. Connectivity arrays are empty until build_connectivity.
struct QuadMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> faces;
    int load_warnings = 0;

    std::vector<HalfEdge> halfedges;
    std::vector<Edge> edges;
    std::vector<std::vector<Spoke>> fans;
    std::vector<char> boundary_vertex;

    static int next(int h) {
        return (h & ~3) | ((h + 1) & 3);
    }

    static int prev(int h) {
        return (h & ~3) | ((h + 3) & 3);
    }

    bool has_connectivity() const {
        return halfedges.size() == 4 * faces.size() && fans.size() == vertices.size();
    }

    int origin(int h) const {
        return halfedges[h].origin;
    }

    int dest(int h) const {
        return halfedges[next(h)].origin;
    }

    int twin(int h) const {
        return halfedges[h].twin;
    }

    int edge_of(int h) const {
        return halfedges[h].edge;
    }

    int valence(int v) const {
        return static_cast<int>(fans[v].size());
    }

    bool is_boundary(int v) const {
        return boundary_vertex[v] != 0;
    }

    /// Interior vertex of valence 4.
    bool is_regular_vertex(int v) const {
        return !is_boundary(v) && valence(v) == 4;
    }

    /// Half-edge from a to b, -1 if none.
    int find_halfedge(int a, int b) const {
        for (const Spoke& s : fans[a]) {
            if (s.neighbor == b && s.out >= 0) {
                return s.out;
            }
        }
        return -1;
    }

    int boundary_halfedge_count() const {
        return static_cast<int>(std::count_if(halfedges.begin(), halfedges.end(),
                                              [](const HalfEdge& h) { return h.twin < 0; }));
    }

    double bbox_diagonal() const {
        if (vertices.empty()) {
            return 0.0;
        }
        Vec3 lo = vertices[0];
        Vec3 hi = vertices[0];
        for (const Vec3& p : vertices) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        return (hi - lo).norm();
    }
};

// ---------------------------------------------------------------------------
// OBJ input / output

inline QuadMesh read_obj(std::istream& in) {
    QuadMesh mesh;
    std::string line;
    int line_no = 0;
    struct RawFace {
        std::vector<long> idx;
        int line;
    };
    std::vector<RawFace> raw;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') {
            continue;
        }
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) {
                throw Error(ErrorKind::Io, "malformed vertex record on line " + std::to_string(line_no));
            }
            mesh.vertices.push_back(p);
        }
        else if (tag == "f") {
            RawFace f{{}, line_no};
            std::string tok;
            while (ls >> tok) {
                const std::string head = tok.substr(0, tok.find('/'));
                try {
                    std::size_t used = 0;
                    const long v = std::stol(head, &used);
                    if (used != head.size() || v == 0) {
                        throw std::invalid_argument(head);
                    }
                    f.idx.push_back(v);
                }
                catch (const std::exception&) {
                    throw Error(ErrorKind::Io, "malformed face index '" + tok + "' on line " + std::to_string(line_no),
                                static_cast<int>(raw.size()));
                }
            }
            if (f.idx.size() != 4) {
                throw Error(ErrorKind::UnsupportedFace,
                            "face with " + std::to_string(f.idx.size()) + " vertices on line " + std::to_string(line_no)
                                + "; only quads are supported",
                            static_cast<int>(raw.size()));
            }
            // Relative indices refer to the vertices read so far.
            for (long& v : f.idx) {
                if (v < 0) {
                    v = static_cast<long>(mesh.vertices.size()) + v + 1;
                }
            }
            raw.push_back(std::move(f));
        }
        else {
            ++mesh.load_warnings;
        }
    }
    const long nv = static_cast<long>(mesh.vertices.size());
    for (std::size_t fi = 0; fi < raw.size(); ++fi) {
        std::array<int, 4> q{};
        for (int k = 0; k < 4; ++k) {
            const long v = raw[fi].idx[k];
            if (v < 1 || v > nv) {
                throw Error(ErrorKind::Structural, "vertex index out of range on line " + std::to_string(raw[fi].line),
                            static_cast<int>(fi));
            }
            q[k] = static_cast<int>(v - 1);
        }
        mesh.faces.push_back(q);
    }
    const double tol = 1e-12 * mesh.bbox_diagonal();
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const auto& q = mesh.faces[fi];
        for (int k = 0; k < 4; ++k) {
            if ((mesh.vertices[q[(k + 1) % 4]] - mesh.vertices[q[k]]).norm() <= tol) {
                throw Error(ErrorKind::DegenerateEdge,
                            "edge " + std::to_string(q[k]) + "-" + std::to_string(q[(k + 1) % 4]) + " is shorter than the tolerance",
                            static_cast<int>(fi), q[k]);
            }
        }
    }
    return mesh;
}

inline QuadMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    }
    return read_obj(in);
}

inline void write_obj(const QuadMesh& mesh, std::ostream& out) {
    char buf[128];
    for (const Vec3& p : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    for (const auto& f : mesh.faces) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
    }
}

inline void save_obj(const QuadMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    write_obj(mesh, out);
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for '" + path + "'");
    }
}

// ---------------------------------------------------------------------------
// Connectivity

inline QuadMesh build_connectivity(QuadMesh mesh) {
    const int nv = static_cast<int>(mesh.vertices.size());
    const int nf = static_cast<int>(mesh.faces.size());
    mesh.halfedges.assign(4 * static_cast<std::size_t>(nf), HalfEdge{});
    mesh.edges.clear();
    auto key = [nv](int a, int b) { return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nv) + b; };
    std::unordered_map<std::uint64_t, int> directed;
    std::unordered_map<std::uint64_t, int> undirected;
    directed.reserve(4 * nf);
    undirected.reserve(2 * nf);
    for (int f = 0; f < nf; ++f) {
        const auto& q = mesh.faces[f];
        for (int k = 0; k < 4; ++k) {
            if (q[k] < 0 || q[k] >= nv) {
                throw Error(ErrorKind::Structural, "vertex index out of range", f);
            }
            for (int l = k + 1; l < 4; ++l) {
                if (q[k] == q[l]) {
                    throw Error(ErrorKind::Structural, "face repeats a vertex", f, q[k]);
                }
            }
        }
        for (int k = 0; k < 4; ++k) {
            const int h = 4 * f + k;
            mesh.halfedges[h].origin = q[k];
            mesh.halfedges[h].face = f;
        }
    }
    for (int h = 0; h < 4 * nf; ++h) {
        const int a = mesh.halfedges[h].origin;
        const int b = mesh.halfedges[QuadMesh::next(h)].origin;
        const int f = h / 4;
        const auto [lo, hi] = std::minmax(a, b);
        auto ue = undirected.find(key(lo, hi));
        if (ue != undirected.end() && !mesh.edges[ue->second].boundary()) {
            throw Error(ErrorKind::Structural, "non-manifold edge " + std::to_string(a) + "-" + std::to_string(b), f, a);
        }
        if (!directed.emplace(key(a, b), h).second) {
            throw Error(ErrorKind::Structural,
                        "inconsistent orientation at edge " + std::to_string(a) + "-" + std::to_string(b), f, a);
        }
        if (ue == undirected.end()) {
            const int e = static_cast<int>(mesh.edges.size());
            mesh.edges.push_back(Edge{a, b, h, -1});
            undirected.emplace(key(lo, hi), e);
            mesh.halfedges[h].edge = e;
        }
        else {
            Edge& edge = mesh.edges[ue->second];
            edge.he1 = h;
            mesh.halfedges[h].edge = ue->second;
            mesh.halfedges[h].twin = edge.he0;
            mesh.halfedges[edge.he0].twin = h;
        }
    }

    // Vertex fans, counter-clockwise.
    std::vector<std::vector<int>> outgoing(nv);
    for (int h = 0; h < 4 * nf; ++h) {
        outgoing[mesh.halfedges[h].origin].push_back(h);
    }
    mesh.fans.assign(nv, {});
    mesh.boundary_vertex.assign(nv, 0);
    for (int v = 0; v < nv; ++v) {
        const auto& out = outgoing[v];
        if (out.empty()) {
            continue;
        }
        int start = out[0];
        for (int h : out) {
            if (mesh.halfedges[h].twin < 0) {
                start = h;
                mesh.boundary_vertex[v] = 1;
                break;
            }
        }
        auto& fan = mesh.fans[v];
        int h = start;
        std::size_t visited = 0;
        while (true) {
            fan.push_back(Spoke{mesh.dest(h), mesh.halfedges[h].edge, mesh.halfedges[h].face, h});
            ++visited;
            const int p = QuadMesh::prev(h);
            const int t = mesh.halfedges[p].twin;
            if (t < 0) {
                fan.push_back(Spoke{mesh.halfedges[p].origin, mesh.halfedges[p].edge, -1, -1});
                break;
            }
            if (t == start) {
                break;
            }
            if (visited > out.size()) {
                break;
            }
            h = t;
        }
        if (visited != out.size()) {
            throw Error(ErrorKind::Structural, "non-manifold vertex", -1, v);
        }
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// Edge parameter intervals

enum class ParamMethod {
    Uniform,
    Chordal,
    Centripetal,
    Mean,
};

inline ParamMethod param_method_from_name(std::string_view name) {
    if (name == "uniform") {
        return ParamMethod::Uniform;
    }
    if (name == "chordal") {
        return ParamMethod::Chordal;
    }
    if (name == "centripetal") {
        return ParamMethod::Centripetal;
    }
    if (name == "mean") {
        return ParamMethod::Mean;
    }
    throw Error(ErrorKind::Domain, "unknown parametrization '" + std::string(name) + "'");
}

inline std::string_view param_method_name(ParamMethod m) {
    switch (m) {
    case ParamMethod::Uniform:
        return "uniform";
    case ParamMethod::Chordal:
        return "chordal";
    case ParamMethod::Centripetal:
        return "centripetal";
    case ParamMethod::Mean:
        return "mean";
    }
    return "?";
}

/// One positive interval per undirected edge, indexed by edge id.
struct EdgeParams {
    std::vector<double> d;

    double operator[](int e) const {
        return d[static_cast<std::size_t>(e)];
    }
};

inline void require_connectivity(const QuadMesh& mesh) {
    if (!mesh.has_connectivity()) {
        throw Error(ErrorKind::Contract, "mesh connectivity has not been built");
    }
}

/// First vertex that keeps the mesh from being regular, or -1. Interior
/// vertices must have valence 4; boundary vertices one or two faces.
inline int first_irregular_vertex(const QuadMesh& mesh) {
    require_connectivity(mesh);
    for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
        const int n = mesh.valence(v);
        if (n == 0) {
            continue;
        }
        if (mesh.is_boundary(v) ? (n != 2 && n != 3) : n != 4) {
            return v;
        }
    }
    return -1;
}

/// Ribbon id per edge: edges linked through opposite sides of faces.
inline std::vector<int> edge_ribbons(const QuadMesh& mesh) {
    require_connectivity(mesh);
    std::vector<int> parent(mesh.edges.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int e) {
        while (parent[e] != e) {
            parent[e] = parent[parent[e]];
            e = parent[e];
        }
        return e;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    };
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const int h = 4 * static_cast<int>(f);
        unite(mesh.edge_of(h), mesh.edge_of(h + 2));
        unite(mesh.edge_of(h + 1), mesh.edge_of(h + 3));
    }
    std::vector<int> id(mesh.edges.size(), -1);
    std::vector<int> compact(mesh.edges.size(), -1);
    int next = 0;
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const int r = find(static_cast<int>(e));
        if (compact[r] < 0) {
            compact[r] = next++;
        }
        id[e] = compact[r];
    }
    return id;
}

/// Per-edge intervals |p_j - p_i|^alpha; uniform uses alpha = 0, chordal
/// alpha = 1, centripetal the given alpha (1/2 by default). Mean replaces each
/// interval by the average over its edge ribbon and needs a regular mesh.
inline EdgeParams assign_edge_params(const QuadMesh& mesh, ParamMethod method, double alpha = 0.5) {
    require_connectivity(mesh);
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorKind::Domain, "alpha must lie in [0, 1]");
    }
    if (method == ParamMethod::Mean) {
        const int v = first_irregular_vertex(mesh);
        if (v >= 0) {
            throw Error(ErrorKind::Unsupported,
                        "mean parametrization needs a regular mesh; vertex has valence " + std::to_string(mesh.valence(v)), -1, v);
        }
    }
    const double a = method == ParamMethod::Uniform ? 0.0 : method == ParamMethod::Chordal ? 1.0 : alpha;
    EdgeParams params;
    params.d.resize(mesh.edges.size());
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const Edge& edge = mesh.edges[e];
        const double len = (mesh.vertices[edge.v1] - mesh.vertices[edge.v0]).norm();
        if (!(len > 0.0)) {
            throw Error(ErrorKind::DegenerateEdge, "zero-length edge " + std::to_string(edge.v0) + "-" + std::to_string(edge.v1),
                        mesh.halfedges[edge.he0].face, edge.v0);
        }
        params.d[e] = std::pow(len, a);
    }
    if (method == ParamMethod::Mean) {
        const auto ribbon = edge_ribbons(mesh);
        const int nr = ribbon.empty() ? 0 : *std::max_element(ribbon.begin(), ribbon.end()) + 1;
        std::vector<double> sum(nr, 0.0);
        std::vector<int> count(nr, 0);
        for (std::size_t e = 0; e < ribbon.size(); ++e) {
            sum[ribbon[e]] += params.d[e];
            ++count[ribbon[e]];
        }
        for (std::size_t e = 0; e < ribbon.size(); ++e) {
            params.d[e] = sum[ribbon[e]] / count[ribbon[e]];
        }
    }
    return params;
}

// ---------------------------------------------------------------------------
// Local grids and classification

/// Vertex window around a face. Indices i, j run over [lo, lo + w - 1] with
/// lo = 1 - w/2; the face itself spans (0,0), (1,0), (1,1), (0,1).
struct LocalGrid {
    int w = 4;
    int face = -1;
    int anchor = -1; // half-edge from p_{0,0} to p_{1,0}
    std::vector<Vec3> p;
    std::vector<int> vertex;
    std::vector<double> d0; // d_{i,0}, i in [lo, lo + w - 2]
    std::vector<double> d1; // d_{i,1}
    std::vector<double> e0; // e_{0,j}, j in [lo, lo + w - 2]
    std::vector<double> e1; // e_{1,j}
    /// Edge ids of the face sides: v = 0, u = 1, v = 1, u = 0.
    std::array<int, 4> side_edge{};

    int lo() const {
        return 1 - w / 2;
    }

    const Vec3& at(int i, int j) const {
        return p[static_cast<std::size_t>((i - lo()) + w * (j - lo()))];
    }

    int vertex_at(int i, int j) const {
        return vertex[static_cast<std::size_t>((i - lo()) + w * (j - lo()))];
    }

    double d(int i, int j) const {
        return (j == 0 ? d0 : d1)[static_cast<std::size_t>(i - lo())];
    }

    double e(int i, int j) const {
        return (i == 0 ? e0 : e1)[static_cast<std::size_t>(j - lo())];
    }
};

namespace detail {

/// Walks the (w-1) x (w-1) face window around the face of `anchor`. Returns
/// the bottom half-edge of every window face, row-major from (lo, lo), or
/// nothing when the window does not exist as a regular grid.
inline std::optional<std::vector<int>> walk_face_window(const QuadMesh& mesh, int anchor, int w) {
    const int lo = 1 - w / 2;
    const int hi = w / 2 - 1;
    const int span = hi - lo + 1;
    std::vector<int> bottom(static_cast<std::size_t>(span * span), -1);
    auto at = [&](int i, int j) -> int& { return bottom[static_cast<std::size_t>((i - lo) + span * (j - lo))]; };
    at(0, 0) = anchor;
    for (int i = 0; i < hi; ++i) {
        const int t = mesh.twin(QuadMesh::next(at(i, 0)));
        if (t < 0) {
            return std::nullopt;
        }
        at(i + 1, 0) = QuadMesh::next(t);
    }
    for (int i = 0; i > lo; --i) {
        const int t = mesh.twin(QuadMesh::prev(at(i, 0)));
        if (t < 0) {
            return std::nullopt;
        }
        at(i - 1, 0) = QuadMesh::prev(t);
    }
    for (int i = lo; i <= hi; ++i) {
        for (int j = 0; j < hi; ++j) {
            const int t = mesh.twin(QuadMesh::next(QuadMesh::next(at(i, j))));
            if (t < 0) {
                return std::nullopt;
            }
            at(i, j + 1) = t;
        }
        for (int j = 0; j > lo; --j) {
            const int t = mesh.twin(at(i, j));
            if (t < 0) {
                return std::nullopt;
            }
            at(i, j - 1) = QuadMesh::next(QuadMesh::next(t));
        }
    }
    // Every vertex strictly inside the window must be a regular interior vertex.
    for (int i = lo + 1; i <= hi; ++i) {
        for (int j = lo + 1; j <= hi; ++j) {
            if (!mesh.is_regular_vertex(mesh.origin(at(i, j)))) {
                return std::nullopt;
            }
        }
    }
    return bottom;
}

} // namespace detail

/// Half-edge of a face whose origin has the smallest vertex index.
inline int anchor_halfedge(const QuadMesh& mesh, int face) {
    int best = 4 * face;
    for (int k = 1; k < 4; ++k) {
        if (mesh.origin(4 * face + k) < mesh.origin(best)) {
            best = 4 * face + k;
        }
    }
    return best;
}

inline bool face_has_grid(const QuadMesh& mesh, int face, int w) {
    return detail::walk_face_window(mesh, anchor_halfedge(mesh, face), w).has_value();
}

struct FaceClassification {
    std::vector<int> regular;
    std::vector<int> extraordinary;
    std::vector<char> is_regular;
};

/// A face is regular when its w x w vertex grid exists.
inline FaceClassification classify_faces(const QuadMesh& mesh, int w = 4) {
    require_connectivity(mesh);
    if (w < 4 || w % 2 != 0) {
        throw Error(ErrorKind::Domain, "support width must be even and at least 4");
    }
    FaceClassification c;
    c.is_regular.assign(mesh.faces.size(), 0);
    for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
        if (face_has_grid(mesh, f, w)) {
            c.is_regular[f] = 1;
            c.regular.push_back(f);
        }
        else {
            c.extraordinary.push_back(f);
        }
    }
    return c;
}

/// Grid with p_{0,0} -> p_{1,0} along the given half-edge.
inline LocalGrid extract_local_grid_at(const QuadMesh& mesh, const EdgeParams& params, int anchor, int w = 4) {
    require_connectivity(mesh);
    const int face = mesh.halfedges[anchor].face;
    const auto window = detail::walk_face_window(mesh, anchor, w);
    if (!window) {
        throw Error(ErrorKind::Contract, "face has no regular vertex grid", face);
    }
    LocalGrid g;
    g.w = w;
    g.face = face;
    g.anchor = anchor;
    const int lo = g.lo();
    const int hi = w / 2 - 1;
    const int span = w - 1;
    auto bottom = [&](int i, int j) { return (*window)[static_cast<std::size_t>((i - lo) + span * (j - lo))]; };
    g.vertex.assign(static_cast<std::size_t>(w * w), -1);
    auto vid = [&](int i, int j) -> int& { return g.vertex[static_cast<std::size_t>((i - lo) + w * (j - lo))]; };
    for (int j = lo; j <= hi; ++j) {
        for (int i = lo; i <= hi; ++i) {
            const int h = bottom(i, j);
            vid(i, j) = mesh.origin(h);
            vid(i + 1, j) = mesh.origin(QuadMesh::next(h));
            vid(i + 1, j + 1) = mesh.origin(QuadMesh::next(QuadMesh::next(h)));
            vid(i, j + 1) = mesh.origin(QuadMesh::prev(h));
        }
    }
    g.p.reserve(g.vertex.size());
    for (int v : g.vertex) {
        g.p.push_back(mesh.vertices[v]);
    }
    for (int i = lo; i <= hi; ++i) {
        const int h = bottom(i, 0);
        g.d0.push_back(params[mesh.edge_of(h)]);
        g.d1.push_back(params[mesh.edge_of(QuadMesh::next(QuadMesh::next(h)))]);
    }
    for (int j = lo; j <= hi; ++j) {
        const int h = bottom(0, j);
        g.e0.push_back(params[mesh.edge_of(QuadMesh::prev(h))]);
        g.e1.push_back(params[mesh.edge_of(QuadMesh::next(h))]);
    }
    g.side_edge = {mesh.edge_of(anchor), mesh.edge_of(QuadMesh::next(anchor)),
                   mesh.edge_of(QuadMesh::next(QuadMesh::next(anchor))), mesh.edge_of(QuadMesh::prev(anchor))};
    return g;
}

inline LocalGrid extract_local_grid(const QuadMesh& mesh, const EdgeParams& params, int face, int w = 4) {
    return extract_local_grid_at(mesh, params, anchor_halfedge(mesh, face), w);
}

// ---------------------------------------------------------------------------
// Section polylines

struct SectionPolyline {
    std::vector<int> vertices;
    std::vector<int> edges; // edge i joins vertices[i] and vertices[i + 1] (cyclically when closed)
    bool closed = false;
};

/// Edge continuing `edge` straight through vertex v, or -1 where section
/// polylines end: at regular interior vertices the opposite spoke, along a
/// straight boundary the other boundary edge.
inline int continue_through(const QuadMesh& mesh, int v, int edge) {
    const auto& fan = mesh.fans[v];
    const int n = static_cast<int>(fan.size());
    int k = -1;
    for (int i = 0; i < n; ++i) {
        if (fan[i].edge == edge) {
            k = i;
            break;
        }
    }
    if (k < 0) {
        return -1;
    }
    if (!mesh.is_boundary(v)) {
        return n == 4 ? fan[(k + 2) % 4].edge : -1;
    }
    if (n == 3 && (k == 0 || k == 2)) {
        return fan[2 - k].edge;
    }
    return -1;
}

inline std::vector<SectionPolyline> trace_section_polylines(const QuadMesh& mesh) {
    require_connectivity(mesh);
    std::vector<char> used(mesh.edges.size(), 0);
    std::vector<SectionPolyline> out;
    for (int e0 = 0; e0 < static_cast<int>(mesh.edges.size()); ++e0) {
        if (used[e0]) {
            continue;
        }
        used[e0] = 1;
        SectionPolyline pl;
        std::vector<int> fwd_v{mesh.edges[e0].v0, mesh.edges[e0].v1};
        std::vector<int> fwd_e{e0};
        int v = mesh.edges[e0].v1;
        int cur = e0;
        while (true) {
            const int nx = continue_through(mesh, v, cur);
            if (nx < 0) {
                break;
            }
            if (nx == e0) {
                pl.closed = true;
                break;
            }
            if (used[nx]) {
                break;
            }
            used[nx] = 1;
            v = mesh.edges[nx].other(v);
            cur = nx;
            fwd_e.push_back(nx);
            fwd_v.push_back(v);
        }
        if (pl.closed) {
            fwd_v.pop_back();
            pl.vertices = std::move(fwd_v);
            pl.edges = std::move(fwd_e);
            out.push_back(std::move(pl));
            continue;
        }
        std::vector<int> back_v;
        std::vector<int> back_e;
        v = mesh.edges[e0].v0;
        cur = e0;
        while (true) {
            const int nx = continue_through(mesh, v, cur);
            if (nx < 0 || used[nx]) {
                break;
            }
            used[nx] = 1;
            v = mesh.edges[nx].other(v);
            cur = nx;
            back_e.push_back(nx);
            back_v.push_back(v);
        }
        pl.vertices.assign(back_v.rbegin(), back_v.rend());
        pl.vertices.insert(pl.vertices.end(), fwd_v.begin(), fwd_v.end());
        pl.edges.assign(back_e.rbegin(), back_e.rend());
        pl.edges.insert(pl.edges.end(), fwd_e.begin(), fwd_e.end());
        out.push_back(std::move(pl));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Boundary extrapolation

/// Mesh with one layer of phantom faces around every boundary. Vertices,
/// faces and edges of the input keep their ids; phantom elements follow.
struct ExtendedMesh {
    QuadMesh mesh;
    EdgeParams params;
    int original_vertex_count = 0;
    int original_face_count = 0;
    int original_edge_count = 0;
};

inline ExtendedMesh extrapolate_boundary_layer(const QuadMesh& mesh, const EdgeParams& params) {
    require_connectivity(mesh);
    ExtendedMesh out;
    out.original_vertex_count = static_cast<int>(mesh.vertices.size());
    out.original_face_count = static_cast<int>(mesh.faces.size());
    out.original_edge_count = static_cast<int>(mesh.edges.size());
    if (mesh.boundary_halfedge_count() == 0) {
        out.mesh = mesh;
        out.params = params;
        return out;
    }
    QuadMesh ext;
    ext.vertices = mesh.vertices;
    ext.faces = mesh.faces;
    const int nv = static_cast<int>(mesh.vertices.size());
    std::map<std::pair<int, int>, double> phantom_interval;
    auto set_interval = [&](int a, int b, double d) { phantom_interval[std::minmax(a, b)] = d; };
    auto add_vertex = [&](const Vec3& p) {
        ext.vertices.push_back(p);
        return static_cast<int>(ext.vertices.size()) - 1;
    };
    std::vector<int> shared(nv, -1);
    std::vector<int> corner_out(nv, -1);
    std::vector<int> corner_in(nv, -1);
    for (int c = 0; c < nv; ++c) {
        if (!mesh.is_boundary(c)) {
            continue;
        }
        const auto& fan = mesh.fans[c];
        const int m = static_cast<int>(fan.size()) - 1; // faces around c
        const Vec3& pc = mesh.vertices[c];
        if (m >= 2) {
            Vec3 mean = Vec3::Zero();
            double dmean = 0.0;
            for (int i = 1; i < m; ++i) {
                mean += mesh.vertices[fan[i].neighbor];
                dmean += params[fan[i].edge];
            }
            mean /= (m - 1);
            dmean /= (m - 1);
            shared[c] = add_vertex(2.0 * pc - mean);
            set_interval(c, shared[c], dmean);
        }
        else {
            // Open corner: fan = [a (outgoing boundary), b (incoming boundary)].
            const int a = fan[0].neighbor;
            const int b = fan[1].neighbor;
            const int diag = mesh.dest(QuadMesh::next(fan[0].out));
            corner_out[c] = add_vertex(2.0 * pc - mesh.vertices[b]);
            corner_in[c] = add_vertex(2.0 * pc - mesh.vertices[a]);
            const int corner = add_vertex(2.0 * pc - mesh.vertices[diag]);
            set_interval(c, corner_out[c], params[fan[1].edge]);
            set_interval(c, corner_in[c], params[fan[0].edge]);
            set_interval(corner_out[c], corner, params[fan[0].edge]);
            set_interval(corner_in[c], corner, params[fan[1].edge]);
            ext.faces.push_back({corner_out[c], c, corner_in[c], corner});
        }
    }
    for (int h = 0; h < static_cast<int>(mesh.halfedges.size()); ++h) {
        if (mesh.twin(h) >= 0) {
            continue;
        }
        const int a = mesh.origin(h);
        const int b = mesh.dest(h);
        const int as = shared[a] >= 0 ? shared[a] : corner_out[a];
        const int bs = shared[b] >= 0 ? shared[b] : corner_in[b];
        ext.faces.push_back({b, a, as, bs});
        set_interval(as, bs, params[mesh.edge_of(h)]);
    }
    out.mesh = build_connectivity(std::move(ext));
    out.params.d.resize(out.mesh.edges.size());
    for (std::size_t e = 0; e < out.mesh.edges.size(); ++e) {
        if (static_cast<int>(e) < out.original_edge_count) {
            out.params.d[e] = params.d[e];
        }
        else {
            const Edge& edge = out.mesh.edges[e];
            out.params.d[e] = phantom_interval.at(std::minmax(edge.v0, edge.v1));
        }
    }
    return out;
}

} // namespace augsurf
