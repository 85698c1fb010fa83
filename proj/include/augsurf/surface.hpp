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

#include <augsurf/coons_gregory.hpp>
#include <augsurf/curve_metrics.hpp>
#include <augsurf/curve_network.hpp>
#include <augsurf/errors.hpp>
#include <augsurf/quad_mesh.hpp>
#include <augsurf/regular_patch.hpp>
#include <augsurf/spline_core.hpp>
#include <augsurf/vec_poly.hpp>

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace augsurf {

struct BuildOptions {
    SplineFamily family;
    PatchMode mode = PatchMode::G2;
    ParamMethod param = ParamMethod::Centripetal;
    double alpha = 0.5; // exponent for centripetal intervals
    int r_degree = 2;
    RadiusRule radius = RadiusRule::Interval;
    TwistRule twist = TwistRule::Gregory;
    std::optional<EdgeParams> params; // overrides param/alpha
};

/// One patch per input face. Corners are p00, p10, p11, p01 and sides are
/// v = 0, u = 1, v = 1, u = 0, as in LocalGrid and BoundaryDataSet.
struct FacePatch {
    int face = -1;
    std::array<int, 4> corner{};
    std::array<int, 4> side_edge{};
    std::shared_ptr<const RegularPatch> regular;
    std::shared_ptr<const GregoryPatch> gregory;
    double mismatch = 0.0; // corner compatibility of the Gregory data

    bool is_regular() const {
        return regular != nullptr;
    }
};

struct BuildStats {
    int regular_patches = 0;
    int gregory_patches = 0;
    int spline_edges = 0;
    int hermite_edges = 0;
    int sampled_sides = 0;
    int constructed_sides = 0;
    int bessel_fallbacks = 0;
    double max_mismatch = 0.0;
    double max_w_adjust = 0.0;
};

struct CompositeSurface {
    QuadMesh mesh; // input with connectivity
    EdgeParams params;
    ExtendedMesh ext;
    FaceClassification classes; // over ext.mesh
    BuildOptions options;
    std::vector<FacePatch> patches;
    BuildStats stats;
};

/// Start and end vertex of a patch side in its running direction.
inline std::pair<int, int> side_vertices(const FacePatch& P, int side) {
    check_side(side);
    switch (side) {
    case SideBottom:
        return {P.corner[0], P.corner[1]};
    case SideRight:
        return {P.corner[1], P.corner[2]};
    case SideTop:
        return {P.corner[3], P.corner[2]};
    default:
        return {P.corner[0], P.corner[3]};
    }
}

/// Domain point at fraction t along a side.
inline std::pair<double, double> side_uv(int side, double t) {
    check_side(side);
    switch (side) {
    case SideBottom:
        return {t, 0.0};
    case SideRight:
        return {1.0, t};
    case SideTop:
        return {t, 1.0};
    default:
        return {0.0, t};
    }
}

inline int side_of_edge(const FacePatch& P, int edge) {
    for (int s = 0; s < 4; ++s) {
        if (P.side_edge[s] == edge) {
            return s;
        }
    }
    return -1;
}

inline CurvatureFrame flipped(const CurvatureFrame& f) {
    CurvatureFrame g;
    g.normal = -f.normal;
    g.k1 = -f.k2;
    g.k2 = -f.k1;
    g.K1 = f.K2;
    g.K2 = f.K1;
    return g;
}

namespace detail {

inline Error with_ids(const Error& e, int face, int vertex) {
    return Error(e.kind(), e.message(), e.face() >= 0 ? e.face() : face, e.vertex() >= 0 ? e.vertex() : vertex);
}

inline int spoke_index(const QuadMesh& m, int v, int edge) {
    const auto& fan = m.fans[v];
    for (int i = 0; i < static_cast<int>(fan.size()); ++i) {
        if (fan[i].edge == edge) {
            return i;
        }
    }
    throw Error(ErrorKind::Contract, "edge is not incident to the vertex", -1, v);
}

/// f(len - x) with the sign of odd derivatives flipped.
inline BoundaryFn reverse_fn(BoundaryFn f, double len) {
    return [f = std::move(f), len](double x, int r) { return (r % 2 ? -1.0 : 1.0) * f(len - x, r); };
}

inline BoundaryFn poly_fn(VecPoly p) {
    return [p = std::move(p)](double x, int r) { return p.eval(x, r); };
}

inline Vec3 face_normal(const QuadMesh& m, int f) {
    const auto& q = m.faces[f];
    return (m.vertices[q[2]] - m.vertices[q[0]]).cross(m.vertices[q[3]] - m.vertices[q[1]]);
}

class SurfaceBuilder {
public:
    explicit SurfaceBuilder(CompositeSurface& s)
        : S_(s)
        , M_(s.ext.mesh)
        , d_(s.ext.params)
        , vertex_(M_.vertices.size()) {
    }

    void run() {
        const int nf = S_.ext.original_face_count;
        S_.patches.resize(nf);
        for (int f = 0; f < nf; ++f) {
            FacePatch& fp = S_.patches[f];
            fp.face = f;
            if (!S_.classes.is_regular[f]) {
                continue;
            }
            try {
                auto R = std::make_shared<RegularPatch>(make_regular_patch(extract_local_grid(M_, d_, f), S_.options.family));
                fp.corner = {R->grid.vertex_at(0, 0), R->grid.vertex_at(1, 0), R->grid.vertex_at(1, 1),
                             R->grid.vertex_at(0, 1)};
                fp.side_edge = R->grid.side_edge;
                fp.regular = std::move(R);
                ++S_.stats.regular_patches;
            }
            catch (const Error& e) {
                throw with_ids(e, f, -1);
            }
        }
        for (int f = 0; f < nf; ++f) {
            if (S_.classes.is_regular[f]) {
                continue;
            }
            try {
                build_gregory(S_.patches[f]);
                ++S_.stats.gregory_patches;
            }
            catch (const Error& e) {
                throw with_ids(e, f, -1);
            }
        }
    }

private:
    CompositeSurface& S_;
    const QuadMesh& M_;
    const EdgeParams& d_;
    std::vector<std::optional<VertexDerivatives>> vertex_;
    std::map<int, VecPoly> curve_;
    std::map<int, EdgeFrame> frame_;

    const Vec3& P(int v) const {
        return M_.vertices[v];
    }

    const RegularPatch* regular_patch(int f) const {
        if (f < 0 || f >= S_.ext.original_face_count) {
            return nullptr;
        }
        return S_.patches[f].regular.get();
    }

    /// Regular patch on the other side of an edge, or null.
    const FacePatch* regular_across(int face, int edge) const {
        const Edge& E = M_.edges[edge];
        for (int h : {E.he0, E.he1}) {
            if (h < 0) {
                continue;
            }
            const int g = M_.halfedges[h].face;
            if (g != face && regular_patch(g)) {
                return &S_.patches[g];
            }
        }
        return nullptr;
    }

    /// Derivative at neighbour q of the edge toward v, oriented from v to q.
    Vec3 far_derivative(int v, int spoke) {
        const auto& sp = M_.fans[v][spoke];
        const int q = sp.neighbor;
        if (M_.is_boundary(q)) {
            return (P(q) - P(v)) / d_[sp.edge];
        }
        const int k = spoke_index(M_, q, sp.edge);
        const auto& fq = M_.fans[q];
        if (M_.is_regular_vertex(q)) {
            const auto& opp = fq[(k + 2) % 4];
            return -knot_derivatives(P(opp.neighbor), P(q), P(v), d_[opp.edge], d_[sp.edge]).first;
        }
        std::vector<Vec3> nbrs;
        std::vector<double> d;
        for (const auto& s : fq) {
            nbrs.push_back(P(s.neighbor));
            d.push_back(d_[s.edge]);
        }
        int fallbacks = 0;
        const Vec3 t = estimate_tangent_or_chord(P(q), nbrs, d, k, &fallbacks);
        S_.stats.bessel_fallbacks += fallbacks;
        return -t;
    }

    const VertexDerivatives& vertex(int v) {
        if (vertex_[v]) {
            return *vertex_[v];
        }
        try {
            vertex_[v] = compute_vertex(v);
        }
        catch (const Error& e) {
            throw with_ids(e, -1, v);
        }
        return *vertex_[v];
    }

    VertexDerivatives compute_vertex(int v) {
        if (M_.is_boundary(v)) {
            throw Error(ErrorKind::Contract, "curve network vertex lies on the extrapolated boundary", -1, v);
        }
        const auto& fan = M_.fans[v];
        const int n = static_cast<int>(fan.size());
        if (M_.is_regular_vertex(v)) {
            VertexDerivatives vd;
            for (int k = 0; k < 4; ++k) {
                const auto& opp = fan[(k + 2) % 4];
                const auto [t1, t2] =
                    knot_derivatives(P(opp.neighbor), P(v), P(fan[k].neighbor), d_[opp.edge], d_[fan[k].edge]);
                vd.tau1.push_back(t1);
                vd.tau2.push_back(t2);
            }
            const Vec3 nn = vd.tau1[0].cross(vd.tau1[1]);
            if (!(nn.norm() > 0.0) || !nn.allFinite()) {
                throw Error(ErrorKind::DegenerateEstimate, "section tangents are parallel", -1, v);
            }
            const Vec3 normal = nn.normalized();
            bool found = false;
            for (int k = 0; k < 4 && !found; ++k) {
                const RegularPatch* R = regular_patch(fan[k].face);
                if (!R) {
                    continue;
                }
                for (int c = 0; c < 4 && !found; ++c) {
                    const int i = c == 1 || c == 2 ? 1 : 0;
                    const int j = c >= 2 ? 1 : 0;
                    if (R->grid.vertex_at(i, j) == v) {
                        const CurvatureFrame f = curvature_frame(eval_patch_derivatives(*R, i, j));
                        vd.frame = f.normal.dot(normal) < 0.0 ? flipped(f) : f;
                        found = true;
                    }
                }
            }
            if (!found) {
                vd.frame = fit_curvature_frame(normal, vd.tau1, vd.tau2);
            }
            return vd;
        }
        std::vector<Vec3> nbrs;
        std::vector<double> d;
        for (const auto& s : fan) {
            nbrs.push_back(P(s.neighbor));
            d.push_back(d_[s.edge]);
        }
        VertexDerivatives vd;
        if (S_.options.mode == PatchMode::G1) {
            vd = g1_vertex_derivatives(P(v), nbrs, d);
        }
        else {
            std::vector<Vec3> far(n);
            for (int i = 0; i < n; ++i) {
                far[i] = far_derivative(v, i);
            }
            GuideOptions opt;
            opt.radius = S_.options.radius;
            opt.alpha = S_.options.param == ParamMethod::Uniform   ? 0.0
                        : S_.options.param == ParamMethod::Chordal ? 1.0
                                                                   : S_.options.alpha;
            vd = g2_vertex_derivatives(P(v), nbrs, d, far, opt);
        }
        S_.stats.bessel_fallbacks += vd.bessel_fallbacks;
        return vd;
    }

    /// Boundary curve of an edge from v0 to v1 on [0, d].
    const VecPoly& curve(int e) {
        auto it = curve_.find(e);
        if (it != curve_.end()) {
            return it->second;
        }
        const Edge& E = M_.edges[e];
        const double len = d_[e];
        VecPoly g;
        const int pe = M_.is_regular_vertex(E.v0) ? continue_through(M_, E.v0, e) : -1;
        const int ne = M_.is_regular_vertex(E.v1) ? continue_through(M_, E.v1, e) : -1;
        if (pe >= 0 && ne >= 0) {
            g = section_segment_poly(S_.options.family, P(M_.edges[pe].other(E.v0)), P(E.v0), P(E.v1),
                                     P(M_.edges[ne].other(E.v1)), d_[pe], len, d_[ne]);
            ++S_.stats.spline_edges;
        }
        else {
            const auto& a = vertex(E.v0);
            const auto& b = vertex(E.v1);
            const int k0 = spoke_index(M_, E.v0, e);
            const int k1 = spoke_index(M_, E.v1, e);
            g = build_missing_boundary_curve(P(E.v0), a.tau1[k0], a.tau2[k0], P(E.v1), -b.tau1[k1], b.tau2[k1], len,
                                             S_.options.mode)
                    .gamma;
            ++S_.stats.hermite_edges;
        }
        return curve_.emplace(e, std::move(g)).first->second;
    }

    const EdgeFrame& frame(int e) {
        auto it = frame_.find(e);
        if (it != frame_.end()) {
            return it->second;
        }
        const Edge& E = M_.edges[e];
        const VecPoly& g = curve(e);
        const auto& a = vertex(E.v0);
        const auto& b = vertex(E.v1);
        Vec3 nm = Vec3::Zero();
        for (int h : {E.he0, E.he1}) {
            if (h >= 0) {
                nm += face_normal(M_, M_.halfedges[h].face).normalized();
            }
        }
        std::optional<Vec3> mid;
        if (nm.norm() > 0.0) {
            mid = nm.normalized();
        }
        else if (S_.options.r_degree == 2) {
            mid = (a.normal() + b.normal()).normalized();
        }
        EdgeFrame f = make_edge_frame(g, d_[e], a.normal(), b.normal(), mid, S_.options.r_degree);
        if (S_.options.mode == PatchMode::G2) {
            attach_curvature(f, g, a.frame, b.frame);
        }
        return frame_.emplace(e, std::move(f)).first->second;
    }

    void build_gregory(FacePatch& fp) {
        const int f = fp.face;
        const int h0 = anchor_halfedge(M_, f);
        int h = h0;
        for (int k = 0; k < 4; ++k) {
            fp.corner[k] = M_.origin(h);
            fp.side_edge[k] = M_.edge_of(h);
            h = QuadMesh::next(h);
        }
        BoundaryDataSet data;
        for (int k = 0; k < 4; ++k) {
            data.p[k] = P(fp.corner[k]);
        }
        data.d0 = d_[fp.side_edge[0]];
        data.e1 = d_[fp.side_edge[1]];
        data.d1 = d_[fp.side_edge[2]];
        data.e0 = d_[fp.side_edge[3]];
        data.k = S_.options.family.k;
        const bool g2 = S_.options.mode == PatchMode::G2;

        std::array<const FacePatch*, 4> R{};
        std::array<bool, 4> forward{};
        for (int s = 0; s < 4; ++s) {
            const int e = fp.side_edge[s];
            const double len = data.side_length(s);
            forward[s] = side_vertices(fp, s).first == M_.edges[e].v0;
            R[s] = regular_across(f, e);
            if (R[s]) {
                const int sr = side_of_edge(*R[s], e);
                const bool same = side_vertices(*R[s], sr).first == side_vertices(fp, s).first;
                const auto patch = R[s]->regular;
                auto sample = [patch, sr](int order) -> BoundaryFn {
                    return [patch, sr, order](double x, int r) { return sample_boundary_data(*patch, sr, x, order, r); };
                };
                // Cross directions agree when exactly one of the two sides is a
                // far side (1 or 2).
                const bool far_r = sr == SideRight || sr == SideTop;
                const bool far_f = s == SideRight || s == SideTop;
                const double sigma = far_r != far_f ? 1.0 : -1.0;
                BoundaryFn gam = sample(0);
                BoundaryFn chi = sample(1);
                BoundaryFn chi_signed = [chi, sigma](double x, int r) { return sigma * chi(x, r); };
                data.gamma[s] = same ? gam : reverse_fn(gam, len);
                data.chi[s] = same ? chi_signed : reverse_fn(chi_signed, len);
                if (g2) {
                    BoundaryFn xi = sample(2);
                    data.xi[s] = same ? xi : reverse_fn(xi, len);
                }
                ++S_.stats.sampled_sides;
            }
            else {
                const VecPoly& g = curve(e);
                data.gamma[s] = poly_fn(forward[s] ? g : g.reversed(len));
            }
        }
        // Corner targets for side s at its start and end, read off the
        // adjacent sides.
        auto targets = [&](int s, int r) -> std::pair<Vec3, Vec3> {
            switch (s) {
            case 0:
                return {data.gamma[3](0.0, r), data.gamma[1](0.0, r)};
            case 1:
                return {data.gamma[0](data.d0, r), data.gamma[2](data.d1, r)};
            case 2:
                return {data.gamma[3](data.e0, r), data.gamma[1](data.e1, r)};
            default:
                return {data.gamma[0](0.0, r), data.gamma[2](0.0, r)};
            }
        };
        for (int s = 0; s < 4; ++s) {
            if (R[s]) {
                continue;
            }
            const int e = fp.side_edge[s];
            const double len = data.side_length(s);
            const VecPoly g = forward[s] ? curve(e) : curve(e).reversed(len);
            const EdgeFrame fr = forward[s] ? frame(e) : frame(e).reversed();
            const auto [t0, t1] = targets(s, 1);
            CrossField cf = build_cross_field_chi(g, len, fr, t0, t1);
            if (g2) {
                const auto [a0, a1] = targets(s, 2);
                build_cross_field_xi(cf, g, fr, a0, a1);
                S_.stats.max_w_adjust = std::max(S_.stats.max_w_adjust, cf.w_adjust);
                data.xi[s] = poly_fn(cf.xi);
            }
            data.chi[s] = poly_fn(cf.chi);
            ++S_.stats.constructed_sides;
        }
        fp.mismatch = boundary_data_mismatch(data);
        S_.stats.max_mismatch = std::max(S_.stats.max_mismatch, fp.mismatch);
        fp.gregory = std::make_shared<GregoryPatch>(make_gregory_patch(std::move(data), S_.options.mode, S_.options.twist));
    }
};

} // namespace detail

inline double param_alpha(ParamMethod m, double alpha) {
    return m == ParamMethod::Uniform ? 0.0 : m == ParamMethod::Chordal ? 1.0 : alpha;
}

/// Classifies the faces, builds regular patches, the curve network around
/// extraordinary faces and their Gregory patches. Open meshes get one layer
/// of extrapolated faces first.
inline CompositeSurface build_surface(const QuadMesh& mesh, const BuildOptions& options = {}) {
    if (options.mode == PatchMode::G2 && options.family.k < 2) {
        throw Error(ErrorKind::Domain, "G2 patches need a family with continuity k >= 2");
    }
    if (options.r_degree != 1 && options.r_degree != 2) {
        throw Error(ErrorKind::Domain, "r degree must be 1 or 2");
    }
    CompositeSurface S;
    S.options = options;
    S.mesh = mesh.has_connectivity() ? mesh : build_connectivity(mesh);
    if (options.params) {
        if (options.params->d.size() != S.mesh.edges.size()) {
            throw Error(ErrorKind::Contract, "edge parameter count does not match the mesh");
        }
        S.params = *options.params;
    }
    else {
        S.params = assign_edge_params(S.mesh, options.param, options.alpha);
    }
    S.ext = extrapolate_boundary_layer(S.mesh, S.params);
    S.classes = classify_faces(S.ext.mesh, options.family.w);
    detail::SurfaceBuilder(S).run();
    return S;
}

inline Vec3 eval_surface(const CompositeSurface& S, int face, double u, double v) {
    const FacePatch& P = S.patches.at(static_cast<std::size_t>(face));
    return P.regular ? eval_patch(*P.regular, u, v) : eval_gregory(*P.gregory, u, v);
}

/// Exact first and second partials in the uv domain.
inline PatchDerivatives eval_surface_derivatives(const CompositeSurface& S, int face, double u, double v) {
    const FacePatch& P = S.patches.at(static_cast<std::size_t>(face));
    return P.regular ? eval_patch_derivatives(*P.regular, u, v) : eval_gregory_derivatives(*P.gregory, u, v);
}

namespace detail {

struct Stencil {
    std::vector<int> off;
    std::vector<double> w;
};

// Second-order accurate weights, central inside and one-sided near the
// ends of [0, 1].
inline Stencil fd_stencil(double t, double h, int order) {
    const bool lo = t - h < 0.0;
    const bool hi = t + h > 1.0;
    if (order == 0) {
        return {{0}, {1.0}};
    }
    if (order == 1) {
        if (lo) {
            return {{0, 1, 2}, {-1.5 / h, 2.0 / h, -0.5 / h}};
        }
        if (hi) {
            return {{0, -1, -2}, {1.5 / h, -2.0 / h, 0.5 / h}};
        }
        return {{-1, 1}, {-0.5 / h, 0.5 / h}};
    }
    const double h2 = h * h;
    if (lo || hi) {
        const int s = lo ? 1 : -1;
        return {{0, s, 2 * s, 3 * s}, {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2}};
    }
    return {{-1, 0, 1}, {1.0 / h2, -2.0 / h2, 1.0 / h2}};
}

} // namespace detail

/// Partials by finite differences with step h in uv.
inline PatchDerivatives fd_surface_derivatives(const CompositeSurface& S, int face, double u, double v, double h = 1e-4) {
    auto apply = [&](int ru, int rv) {
        const auto su = detail::fd_stencil(u, h, ru);
        const auto sv = detail::fd_stencil(v, h, rv);
        Vec3 acc = Vec3::Zero();
        for (std::size_t i = 0; i < su.off.size(); ++i) {
            for (std::size_t j = 0; j < sv.off.size(); ++j) {
                const double uu = std::clamp(u + su.off[i] * h, 0.0, 1.0);
                const double vv = std::clamp(v + sv.off[j] * h, 0.0, 1.0);
                acc += su.w[i] * sv.w[j] * eval_surface(S, face, uu, vv);
            }
        }
        return acc;
    };
    PatchDerivatives D;
    D.s = eval_surface(S, face, u, v);
    D.su = apply(1, 0);
    D.sv = apply(0, 1);
    D.suu = apply(2, 0);
    D.suv = apply(1, 1);
    D.svv = apply(0, 2);
    return D;
}

/// Unit normal su x sv, or nullopt when |su x sv| < 1e-12.
inline std::optional<Vec3> surface_normal(const PatchDerivatives& D) {
    const Vec3 n = D.su.cross(D.sv);
    if (!(n.norm() >= 1e-12)) {
        return std::nullopt;
    }
    return n.normalized();
}

/// Mean curvature with respect to su x sv; NaN where the normal degenerates.
inline double mean_curvature(const PatchDerivatives& D) {
    const auto n = surface_normal(D);
    if (!n) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double E = D.su.dot(D.su);
    const double F = D.su.dot(D.sv);
    const double G = D.sv.dot(D.sv);
    const double L = n->dot(D.suu);
    const double M = n->dot(D.suv);
    const double N = n->dot(D.svv);
    return (E * N - 2.0 * F * M + G * L) / (2.0 * (E * G - F * F));
}

// ---------------------------------------------------------------------------
// Tessellation

struct Channel {
    std::string name;
    std::vector<double> values;
};

struct SourcePoint {
    int face = -1;
    double u = 0.0;
    double v = 0.0;
};

struct TriangleMesh {
    std::vector<Vec3> positions;
    std::vector<std::array<int, 3>> triangles;
    std::vector<SourcePoint> source;
    std::vector<Channel> channels;
    int weld_failures = 0; // shared samples farther apart than the weld tolerance

    const Channel* channel(const std::string& name) const {
        for (const auto& c : channels) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }
};

/// (n+1) x (n+1) samples per patch, two triangles per cell. Samples on
/// shared vertices and edges are welded when the patches agree to within
/// 1e-9 times the bounding-box diagonal.
inline TriangleMesh tessellate(const CompositeSurface& S, int n) {
    if (n < 1) {
        throw Error(ErrorKind::Domain, "tessellation needs n >= 1");
    }
    TriangleMesh T;
    const double tol = 1e-9 * S.mesh.bbox_diagonal();
    std::map<std::tuple<int, int, int>, int> shared;
    std::vector<int> local(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (const FacePatch& P : S.patches) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const double u = static_cast<double>(i) / n;
                const double v = static_cast<double>(j) / n;
                const Vec3 p = eval_surface(S, P.face, u, v);
                std::optional<std::tuple<int, int, int>> key;
                const bool iu = i == 0 || i == n;
                const bool jv = j == 0 || j == n;
                if (iu && jv) {
                    const int c = i == 0 ? (j == 0 ? 0 : 3) : (j == 0 ? 1 : 2);
                    key = std::make_tuple(0, P.corner[c], 0);
                }
                else if (iu || jv) {
                    const int side = jv ? (j == 0 ? SideBottom : SideTop) : (i == 0 ? SideLeft : SideRight);
                    const int t = jv ? i : j;
                    const int e = P.side_edge[side];
                    const bool fwd = side_vertices(P, side).first == S.mesh.edges[e].v0;
                    key = std::make_tuple(1, e, fwd ? t : n - t);
                }
                int id = -1;
                if (key) {
                    auto it = shared.find(*key);
                    if (it != shared.end()) {
                        if ((T.positions[it->second] - p).norm() <= tol) {
                            id = it->second;
                        }
                        else {
                            ++T.weld_failures;
                        }
                    }
                }
                if (id < 0) {
                    id = static_cast<int>(T.positions.size());
                    T.positions.push_back(p);
                    T.source.push_back({P.face, u, v});
                    if (key) {
                        shared.emplace(*key, id);
                    }
                }
                local[static_cast<std::size_t>(i + (n + 1) * j)] = id;
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int a = local[static_cast<std::size_t>(i + (n + 1) * j)];
                const int b = local[static_cast<std::size_t>(i + 1 + (n + 1) * j)];
                const int c = local[static_cast<std::size_t>(i + 1 + (n + 1) * (j + 1))];
                const int d = local[static_cast<std::size_t>(i + (n + 1) * (j + 1))];
                T.triangles.push_back({a, b, c});
                T.triangles.push_back({a, c, d});
            }
        }
    }
    return T;
}

struct AnalysisOptions {
    bool finite_differences = false; // exact partials otherwise
    double h = 1e-4;
    Vec3 light = Vec3(1.0, 1.0, 1.0).normalized();
};

/// Adds "mean_curvature" and "isophote" channels at the tessellation
/// sources. Returns the number of samples with a degenerate normal (NaN).
inline int analysis_fields(const CompositeSurface& S, TriangleMesh& T, const AnalysisOptions& opt = {}) {
    Channel H{"mean_curvature", {}};
    Channel I{"isophote", {}};
    const Vec3 light = opt.light.normalized();
    int degenerate = 0;
    for (const SourcePoint& s : T.source) {
        const PatchDerivatives D = opt.finite_differences ? fd_surface_derivatives(S, s.face, s.u, s.v, opt.h)
                                                          : eval_surface_derivatives(S, s.face, s.u, s.v);
        const auto n = surface_normal(D);
        if (!n) {
            ++degenerate;
            H.values.push_back(std::numeric_limits<double>::quiet_NaN());
            I.values.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        H.values.push_back(mean_curvature(D));
        I.values.push_back(std::clamp(n->dot(light), -1.0, 1.0));
    }
    for (Channel* c : {&H, &I}) {
        auto it = std::find_if(T.channels.begin(), T.channels.end(), [&](const Channel& x) { return x.name == c->name; });
        if (it != T.channels.end()) {
            *it = std::move(*c);
        }
        else {
            T.channels.push_back(std::move(*c));
        }
    }
    return degenerate;
}

// ---------------------------------------------------------------------------
// Continuity

struct EdgeContinuity {
    int edge = -1;
    std::array<int, 2> faces{-1, -1};
    std::string kind; // regular-regular, regular-gregory, gregory-gregory
    double position_gap = 0.0;
    double normal_angle_deg = 0.0;
    double mean_curvature_gap = 0.0;
    std::vector<double> join_residual; // r = 1..k, regular-regular only
};

struct ContinuityReport {
    int samples = 0;
    std::vector<EdgeContinuity> edges;

    double max_position_gap() const {
        double m = 0.0;
        for (const auto& e : edges) {
            m = std::max(m, e.position_gap);
        }
        return m;
    }
};

struct Percentiles {
    int count = 0;
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
};

/// Nearest-rank percentiles; NaN entries are skipped.
inline Percentiles percentiles(std::vector<double> x) {
    x.erase(std::remove_if(x.begin(), x.end(), [](double a) { return std::isnan(a); }), x.end());
    Percentiles p;
    p.count = static_cast<int>(x.size());
    if (x.empty()) {
        return p;
    }
    std::sort(x.begin(), x.end());
    auto rank = [&](double q) {
        const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(x.size())));
        return x[std::clamp<std::size_t>(k, 1, x.size()) - 1];
    };
    p.p50 = rank(0.5);
    p.p90 = rank(0.9);
    p.p99 = rank(0.99);
    p.max = x.back();
    return p;
}

/// Samples every edge shared by two patches at `samples` matched boundary
/// parameters (corners included). Derivatives are exact; regular-regular
/// edges also get the relative residual of the cross-derivative scaling law
/// for r = 1..k.
inline ContinuityReport continuity_report(const CompositeSurface& S, int samples = 16) {
    if (samples < 2) {
        throw Error(ErrorKind::Domain, "continuity report needs at least 2 samples per edge");
    }
    ContinuityReport rep;
    rep.samples = samples;
    const QuadMesh& M = S.mesh;
    const double scale = std::max(M.bbox_diagonal(), 1e-300);
    for (int e = 0; e < static_cast<int>(M.edges.size()); ++e) {
        const Edge& E = M.edges[e];
        if (E.he0 < 0 || E.he1 < 0) {
            continue;
        }
        const int fa = M.halfedges[E.he0].face;
        const int fb = M.halfedges[E.he1].face;
        const FacePatch& A = S.patches[fa];
        const FacePatch& B = S.patches[fb];
        EdgeContinuity rec;
        rec.edge = e;
        rec.faces = {fa, fb};
        rec.kind = A.is_regular() && B.is_regular()   ? "regular-regular"
                   : A.is_regular() || B.is_regular() ? "regular-gregory"
                                                      : "gregory-gregory";
        const int sa = side_of_edge(A, e);
        const int sb = side_of_edge(B, e);
        const bool fa_fwd = side_vertices(A, sa).first == E.v0;
        const bool fb_fwd = side_vertices(B, sb).first == E.v0;
        for (int k = 0; k < samples; ++k) {
            const double t = static_cast<double>(k) / (samples - 1);
            const auto [ua, va] = side_uv(sa, fa_fwd ? t : 1.0 - t);
            const auto [ub, vb] = side_uv(sb, fb_fwd ? t : 1.0 - t);
            const PatchDerivatives Da = eval_surface_derivatives(S, fa, ua, va);
            const PatchDerivatives Db = eval_surface_derivatives(S, fb, ub, vb);
            rec.position_gap = std::max(rec.position_gap, (Da.s - Db.s).norm());
            const auto na = surface_normal(Da);
            const auto nb = surface_normal(Db);
            if (na && nb) {
                const double c = std::clamp(na->dot(*nb), -1.0, 1.0);
                const double s = na->cross(*nb).norm();
                rec.normal_angle_deg = std::max(rec.normal_angle_deg, std::atan2(s, c) * 180.0 / std::numbers::pi);
                rec.mean_curvature_gap = std::max(rec.mean_curvature_gap, std::abs(mean_curvature(Da) - mean_curvature(Db)));
            }
        }
        if (rec.kind == "regular-regular") {
            // Re-anchor so that the edge is the left side of one patch and the
            // right side of the other, both running the same way.
            const int h = E.he0;
            const RegularPatch P =
                make_regular_patch(extract_local_grid_at(S.ext.mesh, S.ext.params, QuadMesh::next(h)), S.options.family);
            const RegularPatch L = make_regular_patch(
                extract_local_grid_at(S.ext.mesh, S.ext.params, QuadMesh::prev(M.twin(h))), S.options.family);
            rec.join_residual.assign(static_cast<std::size_t>(P.k()), 0.0);
            for (int k = 0; k < samples; ++k) {
                const double v = static_cast<double>(k) / (samples - 1);
                const double delta = boundary_scaling_delta(P, L, v);
                for (int r = 1; r <= P.k(); ++r) {
                    const Vec3 a = eval_patch_boundary_deriv(P, SideLeft, v, r);
                    const Vec3 b = std::pow(delta, r) * eval_patch_boundary_deriv(L, SideRight, v, r);
                    const double den = std::max({a.norm(), b.norm(), 1e-9 * scale});
                    auto& slot = rec.join_residual[static_cast<std::size_t>(r - 1)];
                    slot = std::max(slot, (a - b).norm() / den);
                }
            }
        }
        rep.edges.push_back(std::move(rec));
    }
    return rep;
}

inline nlohmann::ordered_json percentiles_json(const Percentiles& p) {
    nlohmann::ordered_json j;
    j["count"] = p.count;
    j["p50"] = p.p50;
    j["p90"] = p.p90;
    j["p99"] = p.p99;
    j["max"] = p.max;
    return j;
}

inline nlohmann::ordered_json continuity_report_json(const ContinuityReport& rep) {
    nlohmann::ordered_json j;
    j["samples_per_edge"] = rep.samples;
    std::vector<double> gap;
    std::vector<double> angle;
    std::vector<double> curv;
    std::vector<double> join1;
    std::vector<double> join2;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    std::map<std::string, std::pair<double, double>> by_kind;
    for (const auto& e : rep.edges) {
        nlohmann::ordered_json r;
        r["edge"] = e.edge;
        r["faces"] = {e.faces[0], e.faces[1]};
        r["kind"] = e.kind;
        r["position_gap"] = e.position_gap;
        r["normal_angle_deg"] = e.normal_angle_deg;
        r["mean_curvature_gap"] = e.mean_curvature_gap;
        r["join_residual"] = e.join_residual;
        edges.push_back(std::move(r));
        gap.push_back(e.position_gap);
        angle.push_back(e.normal_angle_deg);
        curv.push_back(e.mean_curvature_gap);
        if (!e.join_residual.empty()) {
            join1.push_back(e.join_residual[0]);
        }
        if (e.join_residual.size() > 1) {
            join2.push_back(e.join_residual[1]);
        }
        auto& k = by_kind[e.kind];
        k.first = std::max(k.first, e.position_gap);
        k.second = std::max(k.second, e.normal_angle_deg);
    }
    nlohmann::ordered_json summary;
    summary["position_gap"] = percentiles_json(percentiles(gap));
    summary["normal_angle_deg"] = percentiles_json(percentiles(angle));
    summary["mean_curvature_gap"] = percentiles_json(percentiles(curv));
    summary["join_residual_r1"] = percentiles_json(percentiles(join1));
    summary["join_residual_r2"] = percentiles_json(percentiles(join2));
    j["summary"] = std::move(summary);
    nlohmann::ordered_json kinds = nlohmann::ordered_json::object();
    for (const auto& [name, v] : by_kind) {
        kinds[name] = {{"max_position_gap", v.first}, {"max_normal_angle_deg", v.second}};
    }
    j["by_kind"] = std::move(kinds);
    j["edges"] = std::move(edges);
    return j;
}

inline nlohmann::ordered_json build_stats_json(const CompositeSurface& S) {
    const BuildStats& s = S.stats;
    nlohmann::ordered_json j;
    j["family"] = S.options.family.k == 1 ? "d3c1p2s4" : "d5c2p2s4";
    j["mode"] = S.options.mode == PatchMode::G1 ? "g1" : "g2";
    j["param"] = std::string(param_method_name(S.options.param));
    j["r_degree"] = S.options.r_degree;
    j["faces"] = static_cast<int>(S.patches.size());
    j["regular_patches"] = s.regular_patches;
    j["gregory_patches"] = s.gregory_patches;
    j["spline_edges"] = s.spline_edges;
    j["hermite_edges"] = s.hermite_edges;
    j["sampled_sides"] = s.sampled_sides;
    j["constructed_sides"] = s.constructed_sides;
    j["bessel_fallbacks"] = s.bessel_fallbacks;
    j["max_corner_mismatch"] = s.max_mismatch;
    j["max_w_adjust"] = s.max_w_adjust;
    return j;
}

// ---------------------------------------------------------------------------
// Section curves of the surface

struct SectionCurvatureStats {
    int curves = 0;
    int sign_changes = 0;
    double max_abs_curvature = 0.0;
    double min_curvature = 0.0;
    double max_curvature = 0.0;
};

/// Univariate section curves of the input mesh under the given intervals,
/// sampled with signed curvature in the plane of each polyline. Open
/// polylines need at least 4 vertices.
inline SectionCurvatureStats section_curvature_stats(const QuadMesh& mesh, const EdgeParams& params,
                                                     const SplineFamily& family, int samples_per_segment = 32) {
    SectionCurvatureStats st;
    bool first = true;
    for (const SectionPolyline& pl : trace_section_polylines(mesh)) {
        const std::size_t min_points = pl.closed ? 3 : 4;
        if (pl.vertices.size() < min_points) {
            continue;
        }
        std::vector<Vec3> pts;
        for (int v : pl.vertices) {
            pts.push_back(mesh.vertices[v]);
        }
        std::vector<double> d;
        for (int e : pl.edges) {
            d.push_back(params[e]);
        }
        const auto curve = make_curve_with_knots(pts, knots_from_intervals(d, pl.closed), family);
        const int segments = static_cast<int>(pl.closed ? pts.size() : pts.size() - 3);
        const auto samples = sample_curve(curve, segments * samples_per_segment, best_fit_normal(pts));
        std::vector<double> k;
        for (const auto& s : samples) {
            k.push_back(s.kappa);
            st.max_abs_curvature = std::max(st.max_abs_curvature, std::abs(s.kappa));
            st.min_curvature = first ? s.kappa : std::min(st.min_curvature, s.kappa);
            st.max_curvature = first ? s.kappa : std::max(st.max_curvature, s.kappa);
            first = false;
        }
        st.sign_changes += count_sign_changes(k, pl.closed);
        ++st.curves;
    }
    return st;
}

// ---------------------------------------------------------------------------
// Export

namespace detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

/// ASCII PLY with one double property per channel (in the given order, all
/// channels when names is empty).
inline void write_ply(const TriangleMesh& T, std::ostream& out, const std::vector<std::string>& names = {}) {
    std::vector<const Channel*> ch;
    if (names.empty()) {
        for (const auto& c : T.channels) {
            ch.push_back(&c);
        }
    }
    else {
        for (const auto& n : names) {
            const Channel* c = T.channel(n);
            if (!c) {
                throw Error(ErrorKind::Contract, "unknown channel '" + n + "'");
            }
            ch.push_back(c);
        }
    }
    for (const Channel* c : ch) {
        if (c->values.size() != T.positions.size()) {
            throw Error(ErrorKind::Contract, "channel '" + c->name + "' has the wrong length");
        }
    }
    out << "ply\nformat ascii 1.0\ncomment augsurf tessellation\n";
    out << "element vertex " << T.positions.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    for (const Channel* c : ch) {
        out << "property double " << c->name << "\n";
    }
    out << "element face " << T.triangles.size() << "\n";
    out << "property list uchar int vertex_indices\nend_header\n";
    for (std::size_t i = 0; i < T.positions.size(); ++i) {
        const Vec3& p = T.positions[i];
        out << detail::fmt_double(p.x()) << ' ' << detail::fmt_double(p.y()) << ' ' << detail::fmt_double(p.z());
        for (const Channel* c : ch) {
            out << ' ' << detail::fmt_double(c->values[i]);
        }
        out << '\n';
    }
    for (const auto& t : T.triangles) {
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
}

/// Reads the ASCII PLY subset written by write_ply: one vertex element with
/// scalar properties, one face element of triangles.
inline TriangleMesh read_ply(std::istream& in) {
    auto fail = [](const std::string& msg) { return Error(ErrorKind::Io, "PLY: " + msg); };
    std::string line;
    if (!std::getline(in, line) || line != "ply") {
        throw fail("missing magic");
    }
    std::size_t nv = 0;
    std::size_t nf = 0;
    std::vector<std::string> props;
    std::string element;
    bool ascii = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string w;
        ls >> w;
        if (w == "format") {
            std::string f;
            ls >> f;
            ascii = f == "ascii";
        }
        else if (w == "element") {
            std::size_t n = 0;
            ls >> element >> n;
            (element == "vertex" ? nv : nf) = n;
        }
        else if (w == "property" && element == "vertex") {
            std::string type;
            std::string name;
            ls >> type >> name;
            props.push_back(name);
        }
        else if (w == "end_header") {
            break;
        }
    }
    if (!ascii) {
        throw fail("only ascii files are supported");
    }
    if (props.size() < 3 || props[0] != "x" || props[1] != "y" || props[2] != "z") {
        throw fail("vertex properties must start with x y z");
    }
    TriangleMesh T;
    for (std::size_t k = 3; k < props.size(); ++k) {
        T.channels.push_back({props[k], {}});
    }
    for (std::size_t i = 0; i < nv; ++i) {
        std::vector<double> row(props.size());
        for (auto& x : row) {
            std::string tok;
            if (!(in >> tok)) {
                throw fail("truncated vertex list");
            }
            x = std::strtod(tok.c_str(), nullptr);
        }
        T.positions.emplace_back(row[0], row[1], row[2]);
        for (std::size_t k = 3; k < row.size(); ++k) {
            T.channels[k - 3].values.push_back(row[k]);
        }
    }
    for (std::size_t i = 0; i < nf; ++i) {
        int n = 0;
        std::array<int, 3> t{};
        if (!(in >> n >> t[0] >> t[1] >> t[2]) || n != 3) {
            throw fail("faces must be triangles");
        }
        for (int x : t) {
            if (x < 0 || static_cast<std::size_t>(x) >= nv) {
                throw fail("face index out of range");
            }
        }
        T.triangles.push_back(t);
    }
    return T;
}

inline void write_obj(const TriangleMesh& T, std::ostream& out) {
    for (const Vec3& p : T.positions) {
        out << "v " << detail::fmt_double(p.x()) << ' ' << detail::fmt_double(p.y()) << ' ' << detail::fmt_double(p.z())
            << '\n';
    }
    for (const auto& t : T.triangles) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
}

inline void export_ply(const TriangleMesh& T, const std::string& path, const std::vector<std::string>& names = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    write_ply(T, out, names);
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for '" + path + "'");
    }
}

inline void export_obj(const TriangleMesh& T, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    write_obj(T, out);
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for '" + path + "'");
    }
}

} // namespace augsurf
