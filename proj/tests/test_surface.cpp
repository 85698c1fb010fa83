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

#include "support.hpp"

#include <augsurf/mesh_gen.hpp>
#include <augsurf/surface.hpp>

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace augsurf;
using namespace testsupport;

namespace {

BuildOptions options(PatchMode mode, ParamMethod param = ParamMethod::Centripetal) {
    BuildOptions o;
    o.mode = mode;
    o.param = param;
    return o;
}

int original_extraordinary_faces(const CompositeSurface& S) {
    int n = 0;
    for (int f : S.classes.extraordinary) {
        n += f < S.ext.original_face_count ? 1 : 0;
    }
    return n;
}

double max_gap(const ContinuityReport& r, const std::string& kind) {
    double m = 0.0;
    for (const auto& e : r.edges) {
        if (e.kind == kind) {
            m = std::max(m, e.position_gap);
        }
    }
    return m;
}

double max_angle(const ContinuityReport& r, const std::string& kind) {
    double m = 0.0;
    for (const auto& e : r.edges) {
        if (e.kind == kind) {
            m = std::max(m, e.normal_angle_deg);
        }
    }
    return m;
}

int count_kind(const ContinuityReport& r, const std::string& kind) {
    return static_cast<int>(std::count_if(r.edges.begin(), r.edges.end(), [&](const auto& e) { return e.kind == kind; }));
}

} // namespace

TEST_CASE("patch counts follow the face classification") {
    SECTION("torus grid is all regular") {
        const auto S = build_surface(gen::torus_grid(12, 8), options(PatchMode::G2));
        CHECK(S.stats.regular_patches == 96);
        CHECK(S.stats.gregory_patches == 0);
    }
    SECTION("cube is all Gregory") {
        const auto S = build_surface(gen::cube(), options(PatchMode::G2));
        CHECK(S.stats.regular_patches == 0);
        CHECK(S.stats.gregory_patches == 6);
        CHECK(S.stats.hermite_edges == 12);
    }
    SECTION("irregular torus matches classify_faces") {
        const QuadMesh m = gen::torus_irregular(12, 8);
        const auto S = build_surface(m, options(PatchMode::G2));
        const auto c = classify_faces(build_connectivity(m));
        CHECK(S.stats.gregory_patches == static_cast<int>(c.extraordinary.size()));
        CHECK(S.stats.gregory_patches == 10);
        CHECK(S.stats.regular_patches + S.stats.gregory_patches == 96);
    }
    SECTION("open meshes are extrapolated first") {
        const auto S = build_surface(gen::planar_irregular(), options(PatchMode::G1));
        CHECK(S.stats.gregory_patches == original_extraordinary_faces(S));
        CHECK(S.stats.gregory_patches == 10);
        CHECK(static_cast<int>(S.patches.size()) == 64);
    }
}

TEST_CASE("build options are validated") {
    BuildOptions o;
    o.family = family_from_name("d3c1p2s4");
    o.mode = PatchMode::G2;
    CHECK_THROWS_AS(build_surface(gen::torus_grid(8, 6), o), Error);
    o.mode = PatchMode::G1;
    CHECK_NOTHROW(build_surface(gen::torus_grid(8, 6), o));
    try {
        build_surface(gen::cube(), options(PatchMode::G2, ParamMethod::Mean));
        FAIL("mean parametrization accepted an irregular mesh");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unsupported);
        CHECK(e.vertex() >= 0);
    }
}

TEST_CASE("regular surfaces join by the scaling law") {
    Rng rng(11);
    const QuadMesh m = gen::jitter(gen::torus_grid(12, 8, 3.0, 1.0, 0.3), 0.05, 5);
    const auto S = build_surface(m, options(PatchMode::G2));
    const auto rep = continuity_report(S, 16);
    REQUIRE(count_kind(rep, "regular-regular") == 192);
    for (const auto& e : rep.edges) {
        CHECK(e.position_gap < 1e-10);
        REQUIRE(e.join_residual.size() == 2);
        CHECK(e.join_residual[0] < 1e-8);
        CHECK(e.join_residual[1] < 1e-8);
    }
}

TEST_CASE("patch boundaries lie on the section curves") {
    const QuadMesh m = gen::jitter(gen::torus_grid(12, 8, 3.0, 1.0, 0.3), 0.05, 9);
    const auto S = build_surface(m, options(PatchMode::G2));
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const FacePatch& P = S.patches[rng.integer(0, 95)];
        const LocalGrid& g = P.regular->grid;
        for (int j : {0, 1}) {
            const VecPoly c = section_segment_poly(S.options.family, g.at(-1, j), g.at(0, j), g.at(1, j), g.at(2, j),
                                                   g.d(-1, j), g.d(0, j), g.d(1, j));
            for (int k = 0; k < 5; ++k) {
                const double u = rng.uniform(0.0, 1.0);
                CHECK((eval_surface(S, P.face, u, j) - c(u * g.d(0, j))).norm() < 1e-10);
            }
        }
    }
}

TEST_CASE("patches meet along Gregory boundaries") {
    for (const PatchMode mode : {PatchMode::G1, PatchMode::G2}) {
        for (const QuadMesh& m : {gen::torus_irregular(12, 8), gen::quad_sphere(3), gen::cube()}) {
            const auto S = build_surface(m, options(mode));
            CHECK(S.stats.max_mismatch < 1e-10);
            const auto rep = continuity_report(S, 10);
            CHECK(rep.max_position_gap() < 1e-8);
            CHECK(max_angle(rep, "regular-gregory") < 0.1);
            CHECK(max_angle(rep, "gregory-gregory") < 0.1);
            CHECK(max_gap(rep, "regular-gregory") < 1e-8);
        }
    }
}

TEST_CASE("G2 surfaces have continuous mean curvature across Gregory joins") {
    const auto S = build_surface(gen::quad_sphere(4), options(PatchMode::G2));
    const auto rep = continuity_report(S, 12);
    REQUIRE(count_kind(rep, "regular-gregory") > 0);
    for (const auto& e : rep.edges) {
        CHECK(e.mean_curvature_gap < 1e-8);
    }
    CHECK(S.stats.max_w_adjust < 1e-10);
}

TEST_CASE("planar meshes stay planar") {
    for (const PatchMode mode : {PatchMode::G1, PatchMode::G2}) {
        const auto S = build_surface(gen::planar_irregular(), options(mode));
        auto T = tessellate(S, 6);
        CHECK(analysis_fields(S, T) == 0);
        for (const Vec3& p : T.positions) {
            CHECK(std::abs(p.z()) < 1e-10);
        }
        for (double h : T.channel("mean_curvature")->values) {
            CHECK(std::abs(h) < 1e-6);
        }
        AnalysisOptions fd;
        fd.finite_differences = true;
        analysis_fields(S, T, fd);
        for (double h : T.channel("mean_curvature")->values) {
            CHECK(std::abs(h) < 1e-6);
        }
    }
}

TEST_CASE("tessellation counts and welding") {
    SECTION("single patch") {
        const auto S = build_surface(gen::plane_grid(1, 1), options(PatchMode::G2));
        const auto T = tessellate(S, 4);
        CHECK(T.positions.size() == 25);
        CHECK(T.triangles.size() == 32);
    }
    SECTION("closed surfaces weld into a closed triangle mesh") {
        const auto S = build_surface(gen::torus_irregular(12, 8), options(PatchMode::G2));
        const int n = 5;
        const auto T = tessellate(S, n);
        CHECK(T.weld_failures == 0);
        CHECK(T.triangles.size() == 96u * 2 * n * n);
        // A torus has Euler characteristic 0: V - E + F = 0 with E = 3F/2.
        CHECK(static_cast<long>(T.positions.size()) * 2 == static_cast<long>(T.triangles.size()));
        CHECK(tessellate(S, 2 * n).triangles.size() == 4 * T.triangles.size());
    }
    CHECK_THROWS_AS(tessellate(build_surface(gen::cube(), options(PatchMode::G1)), 0), Error);
}

TEST_CASE("mean curvature converges on a torus") {
    // |H| = (R + 2 r cos t) / (2 r (R + r cos t)) with r cos t = rho - R.
    std::vector<double> err;
    for (int n : {12, 24}) {
        const auto S = build_surface(gen::torus_grid(2 * n, n, 3.0, 1.0), options(PatchMode::G2));
        auto T = tessellate(S, 4);
        analysis_fields(S, T);
        double e = 0.0;
        for (std::size_t i = 0; i < T.positions.size(); ++i) {
            const double c = std::hypot(T.positions[i].x(), T.positions[i].y()) - 3.0;
            const double h = (3.0 + 2.0 * c) / (2.0 * (3.0 + c));
            e = std::max(e, std::abs(std::abs(T.channel("mean_curvature")->values[i]) - h));
        }
        err.push_back(e);
    }
    CHECK(err[0] < 0.1);
    CHECK(err[1] < 0.3 * err[0]);
}

TEST_CASE("mean curvature of a quad sphere") {
    const auto S = build_surface(gen::quad_sphere(6, 2.0), options(PatchMode::G2));
    auto T = tessellate(S, 4);
    analysis_fields(S, T);
    double sum = 0.0;
    for (double h : T.channel("mean_curvature")->values) {
        // Outward normals: H = -1/R. The valence-3 corners carry the
        // largest error.
        CHECK(h < -0.2);
        CHECK(h > -0.8);
        sum += h;
    }
    CHECK(std::abs(sum / T.positions.size() + 0.5) < 0.02);
    for (double x : T.channel("isophote")->values) {
        CHECK(x >= -1.0);
        CHECK(x <= 1.0);
    }
}

TEST_CASE("finite-difference curvature agrees with exact partials") {
    const auto S = build_surface(gen::torus_irregular(12, 8), options(PatchMode::G2));
    Rng rng(21);
    for (int k = 0; k < 30; ++k) {
        const int f = rng.integer(0, 95);
        const double u = rng.uniform(0.05, 0.95);
        const double v = rng.uniform(0.05, 0.95);
        const double he = mean_curvature(eval_surface_derivatives(S, f, u, v));
        const double hf = mean_curvature(fd_surface_derivatives(S, f, u, v));
        CHECK(std::abs(he - hf) < 1e-5);
    }
    // One-sided stencils on the domain edges.
    for (const double u : {0.0, 1.0}) {
        const double he = mean_curvature(eval_surface_derivatives(S, 3, u, 0.0));
        const double hf = mean_curvature(fd_surface_derivatives(S, 3, u, 0.0));
        CHECK(std::abs(he - hf) < 1e-4);
    }
}

TEST_CASE("reflection preserves |H|") {
    const QuadMesh m = gen::jitter(gen::torus_irregular(12, 8), 0.02, 3);
    QuadMesh r = m;
    for (Vec3& p : r.vertices) {
        p.x() = -p.x();
    }
    const auto S = build_surface(m, options(PatchMode::G2));
    const auto R = build_surface(r, options(PatchMode::G2));
    Rng rng(8);
    for (int k = 0; k < 40; ++k) {
        const int f = rng.integer(0, 95);
        const double u = rng.uniform(0.0, 1.0);
        const double v = rng.uniform(0.0, 1.0);
        const auto a = eval_surface_derivatives(S, f, u, v);
        const auto b = eval_surface_derivatives(R, f, u, v);
        CHECK((Vec3(-a.s.x(), a.s.y(), a.s.z()) - b.s).norm() < 1e-10);
        CHECK(std::abs(std::abs(mean_curvature(a)) - std::abs(mean_curvature(b))) < 1e-8);
    }
}

TEST_CASE("continuity report of identical patches") {
    const auto S = build_surface(gen::torus_grid(8, 6), options(PatchMode::G2));
    // The same regular patch evaluated through both of its anchorings.
    const auto rep = continuity_report(S, 8);
    for (const auto& e : rep.edges) {
        CHECK(e.position_gap < 1e-12);
        CHECK(e.position_gap >= 0.0);
    }
    const auto j = continuity_report_json(rep);
    CHECK(j["edges"].size() == rep.edges.size());
    CHECK(j["summary"]["position_gap"]["count"] == static_cast<int>(rep.edges.size()));
    const auto p = percentiles({4.0, 1.0, 3.0, 2.0});
    CHECK(p.p50 == 2.0);
    CHECK(p.p90 == 4.0);
    CHECK(p.max == 4.0);
}

TEST_CASE("PLY and OBJ export") {
    const auto S = build_surface(gen::quad_sphere(2), options(PatchMode::G2));
    auto T = tessellate(S, 3);
    analysis_fields(S, T);
    std::stringstream ply;
    write_ply(T, ply, {"mean_curvature"});
    const std::string text = ply.str();
    CHECK(text.find("property double mean_curvature") != std::string::npos);
    CHECK(text.find("property double isophote") == std::string::npos);
    const TriangleMesh back = read_ply(ply);
    REQUIRE(back.positions.size() == T.positions.size());
    CHECK(back.triangles == T.triangles);
    REQUIRE(back.channels.size() == 1);
    for (std::size_t i = 0; i < T.positions.size(); ++i) {
        CHECK(back.positions[i] == T.positions[i]);
        CHECK(back.channels[0].values[i] == T.channel("mean_curvature")->values[i]);
    }
    std::stringstream all;
    write_ply(T, all);
    CHECK(read_ply(all).channels.size() == 2);

    std::stringstream empty;
    write_ply(TriangleMesh{}, empty);
    const TriangleMesh e = read_ply(empty);
    CHECK(e.positions.empty());
    CHECK(e.triangles.empty());

    std::stringstream obj;
    write_obj(T, obj);
    std::string line;
    std::size_t v = 0;
    std::size_t f = 0;
    while (std::getline(obj, line)) {
        v += line.rfind("v ", 0) == 0 ? 1 : 0;
        f += line.rfind("f ", 0) == 0 ? 1 : 0;
    }
    CHECK(v == T.positions.size());
    CHECK(f == T.triangles.size());
    CHECK_THROWS_AS(write_ply(T, obj, {"nope"}), Error);
}

TEST_CASE("builds are deterministic") {
    auto run = [] {
        const auto S = build_surface(gen::torus_irregular(12, 8), options(PatchMode::G2));
        auto T = tessellate(S, 4);
        analysis_fields(S, T);
        std::stringstream out;
        write_ply(T, out);
        out << continuity_report_json(continuity_report(S, 6)).dump(1);
        return out.str();
    };
    CHECK(run() == run());
}

TEST_CASE("section curvature statistics") {
    const QuadMesh m = build_connectivity(gen::torus_grid(12, 8));
    const auto d = assign_edge_params(m, ParamMethod::Uniform);
    const auto st = section_curvature_stats(m, d, SplineFamily{});
    CHECK(st.curves == 20);
    // Circles around the axis are convex; tube circles too.
    CHECK(st.sign_changes == 0);
    CHECK(st.max_abs_curvature > 0.9);
}
