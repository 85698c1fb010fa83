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

#include "support_boundary.hpp"

#include <augsurf/coons_gregory.hpp>
#include <augsurf/jet.hpp>

#include <catch_amalgamated.hpp>

using namespace augsurf;
using namespace testsupport;

namespace {

/// Random polynomial surface of degree 3 in each variable, with its
/// derivatives.
struct Bicubic {
    std::array<std::array<Vec3, 4>, 4> c;

    template <class T>
    std::array<T, 3> at(const T& u, const T& v) const {
        std::array<T, 3> out{T(0.0), T(0.0), T(0.0)};
        T ui(1.0);
        for (int i = 0; i < 4; ++i) {
            T vj(1.0);
            for (int j = 0; j < 4; ++j) {
                const T w = ui * vj;
                for (int k = 0; k < 3; ++k) {
                    out[k] = out[k] + w * c[i][j][k];
                }
                vj = vj * v;
            }
            ui = ui * u;
        }
        return out;
    }

    Vec3 operator()(double u, double v) const {
        const auto p = at(u, v);
        return {p[0], p[1], p[2]};
    }
};

Bicubic random_bicubic(Rng& rng) {
    Bicubic b;
    for (auto& row : b.c) {
        for (auto& v : row) {
            v = 0.4 * rng.vec3();
        }
    }
    b.c[1][0] += Vec3(1, 0, 0);
    b.c[0][1] += Vec3(0, 1, 0);
    return b;
}

/// Boundary data sampled from a surface F(u, v): chi and xi are the uv
/// cross derivatives divided by the local parametrization functions.
BoundaryDataSet sample_surface(const Bicubic& F, double d0, double d1, double e0, double e1, int k) {
    BoundaryDataSet b;
    b.d0 = d0;
    b.d1 = d1;
    b.e0 = e0;
    b.e1 = e1;
    b.k = k;
    b.p = {F(0, 0), F(1, 0), F(1, 1), F(0, 1)};
    const LocalParamFn delta = b.delta();
    const LocalParamFn eps = b.eps();
    using J = Jet<4>;
    // side: 0 v=0, 1 u=1, 2 v=1, 3 u=0. order: cross derivative order.
    auto field = [=](int side, int order) -> BoundaryFn {
        const double len = side == 0 ? d0 : side == 1 ? e1 : side == 2 ? d1 : e0;
        return [=](double x, int r) {
            // t along the side as a jet in x; cross derivative via a jet in the cross variable.
            J t = J::variable(x) / len;
            Vec3 out;
            for (int comp = 0; comp < 3; ++comp) {
                // Taylor coefficients in the cross direction at each point t are needed; use nested
                // evaluation: expand in the cross variable at fixed along jet by finite polynomial algebra.
                // F is a polynomial so the cross derivative is a polynomial in t as well.
                J acc(0.0);
                for (int i = 0; i < 4; ++i) {
                    for (int j = 0; j < 4; ++j) {
                        const bool along_u = side == 0 || side == 2;
                        const int pa = along_u ? i : j; // power of the along variable
                        const int pc = along_u ? j : i; // power of the cross variable
                        if (pc < order) {
                            continue;
                        }
                        double f = 1.0;
                        for (int q = pc - order + 1; q <= pc; ++q) {
                            f *= q;
                        }
                        const double s = (side == 1 || side == 2) ? 1.0 : 0.0;
                        const double cross = f * std::pow(s, pc - order);
                        J term(cross * F.c[i][j][comp]);
                        for (int q = 0; q < pa; ++q) {
                            term = term * t;
                        }
                        acc = acc + term;
                    }
                }
                if (order > 0) {
                    const J scale = (side == 0 || side == 2) ? eps(t) : delta(t);
                    for (int q = 0; q < order; ++q) {
                        acc = acc / scale;
                    }
                }
                out[comp] = acc.derivative(r);
            }
            return out;
        };
    };
    for (int s = 0; s < 4; ++s) {
        b.gamma[s] = field(s, 0);
        b.chi[s] = field(s, 1);
        b.xi[s] = field(s, 2);
    }
    return b;
}

Vec3 gamma_at(const BoundaryDataSet& b, int side, double t) {
    return b.gamma[side](t * b.side_length(side), 0);
}

} // namespace

TEST_CASE("Hermite vectors", "[coons_gregory]") {
    CHECK(hermite_basis(3, 0.0) == std::vector<double>{-1, 1, 0, 0, 0});
    CHECK(hermite_basis(3, 1.0) == std::vector<double>{-1, 0, 1, 0, 0});
    CHECK(hermite_basis(5, 0.0) == std::vector<double>{-1, 1, 0, 0, 0, 0, 0});
    CHECK(hermite_basis(5, 1.0) == std::vector<double>{-1, 0, 1, 0, 0, 0, 0});
    // Derivative conditions by finite differences.
    const double h = 1e-6;
    for (int deg : {3, 5}) {
        const auto a = hermite_basis(deg, h);
        const auto b = hermite_basis(deg, 0.0);
        CHECK((a[3] - b[3]) / h == Catch::Approx(1.0).epsilon(1e-5));
        CHECK(std::abs((a[1] - b[1]) / h) < 1e-5);
    }
    CHECK_THROWS_AS(hermite_basis(4, 0.5), Error);
}

TEST_CASE("Gregory patches interpolate their boundary data", "[coons_gregory]") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        for (PatchMode mode : {PatchMode::G1, PatchMode::G2}) {
            const int k = mode == PatchMode::G2 ? 2 : 1 + trial % 2;
            const BoundaryDataSet data = random_boundary_data(rng, k);
            CHECK(boundary_data_mismatch(data) < 1e-12);
            const GregoryPatch g = make_gregory_patch(data, mode);
            CHECK((eval_gregory(g, 0, 0) - data.p[0]).norm() < 1e-12);
            CHECK((eval_gregory(g, 1, 0) - data.p[1]).norm() < 1e-12);
            CHECK((eval_gregory(g, 1, 1) - data.p[2]).norm() < 1e-12);
            CHECK((eval_gregory(g, 0, 1) - data.p[3]).norm() < 1e-12);
            const LocalParamFn delta = data.delta();
            const LocalParamFn eps = data.eps();
            for (int i = 0; i < 10; ++i) {
                const double t = rng.uniform(0, 1);
                CHECK((eval_gregory(g, t, 0) - gamma_at(data, 0, t)).norm() < 1e-10);
                CHECK((eval_gregory(g, 1, t) - gamma_at(data, 1, t)).norm() < 1e-10);
                CHECK((eval_gregory(g, t, 1) - gamma_at(data, 2, t)).norm() < 1e-10);
                CHECK((eval_gregory(g, 0, t) - gamma_at(data, 3, t)).norm() < 1e-10);
                // Exact cross derivatives from jets.
                const auto b0 = eval_gregory_derivatives(g, t, 0);
                const auto b1 = eval_gregory_derivatives(g, 1, t);
                const auto b2 = eval_gregory_derivatives(g, t, 1);
                const auto b3 = eval_gregory_derivatives(g, 0, t);
                CHECK(rel_err_vec(b0.sv, Vec3(eps.eval(t) * data.chi[0](t * data.d0, 0))) < 1e-10);
                CHECK(rel_err_vec(b1.su, Vec3(delta.eval(t) * data.chi[1](t * data.e1, 0))) < 1e-10);
                CHECK(rel_err_vec(b2.sv, Vec3(eps.eval(t) * data.chi[2](t * data.d1, 0))) < 1e-10);
                CHECK(rel_err_vec(b3.su, Vec3(delta.eval(t) * data.chi[3](t * data.e0, 0))) < 1e-10);
                if (mode == PatchMode::G2) {
                    const double e2 = eps.eval(t) * eps.eval(t);
                    const double d2 = delta.eval(t) * delta.eval(t);
                    CHECK(rel_err_vec(b0.svv, Vec3(e2 * data.xi[0](t * data.d0, 0))) < 1e-9);
                    CHECK(rel_err_vec(b1.suu, Vec3(d2 * data.xi[1](t * data.e1, 0))) < 1e-9);
                    CHECK(rel_err_vec(b2.svv, Vec3(e2 * data.xi[2](t * data.d1, 0))) < 1e-9);
                    CHECK(rel_err_vec(b3.suu, Vec3(d2 * data.xi[3](t * data.e0, 0))) < 1e-9);
                }
                // Finite-difference oracle on side 0. The Gregory weights vary on the
                // scale of the distance to the nearest corner, so the step follows it.
                const double h = std::clamp(0.01 * std::min(t, 1.0 - t), 2e-6, 1e-3);
                const Vec3 fd1 = one_sided_d1([&](double s) { return eval_gregory(g, t, s); }, h);
                CHECK(rel_err_vec(fd1, Vec3(eps.eval(t) * data.chi[0](t * data.d0, 0))) < 1e-4);
                if (mode == PatchMode::G2) {
                    const Vec3 fd2 = one_sided_d2([&](double s) { return eval_gregory(g, t, s); }, h);
                    CHECK(rel_err_vec(fd2, Vec3(eps.eval(t) * eps.eval(t) * data.xi[0](t * data.d0, 0))) < 1e-3);
                }
            }
        }
    }
}

TEST_CASE("Gregory patches reproduce polynomial surfaces", "[coons_gregory]") {
    Rng rng(103);
    for (int trial = 0; trial < 5; ++trial) {
        const Bicubic F = random_bicubic(rng);
        const double d0 = rng.uniform(0.5, 2), d1 = rng.uniform(0.5, 2), e0 = rng.uniform(0.5, 2),
                     e1 = rng.uniform(0.5, 2);
        for (PatchMode mode : {PatchMode::G1, PatchMode::G2}) {
            const int k = mode == PatchMode::G2 ? 2 : 1;
            const BoundaryDataSet data = sample_surface(F, d0, d1, e0, e1, k);
            REQUIRE(boundary_data_mismatch(data) < 1e-12);
            for (TwistRule rule : {TwistRule::Gregory, TwistRule::AlongU, TwistRule::AlongV}) {
                const GregoryPatch g = make_gregory_patch(data, mode, rule);
                for (int i = 0; i < 20; ++i) {
                    const double u = rng.uniform(0, 1);
                    const double v = rng.uniform(0, 1);
                    CHECK(rel_err_vec(eval_gregory(g, u, v), F(u, v)) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("bilinear data give the bilinear surface", "[coons_gregory]") {
    Rng rng(107);
    Bicubic F;
    for (auto& row : F.c) {
        row.fill(Vec3::Zero());
    }
    const Vec3 p0 = rng.vec3(), p1 = rng.vec3() + Vec3(2, 0, 0), p2 = rng.vec3() + Vec3(2, 2, 0), p3 = rng.vec3() + Vec3(0, 2, 0);
    F.c[0][0] = p0;
    F.c[1][0] = p1 - p0;
    F.c[0][1] = p3 - p0;
    F.c[1][1] = p0 - p1 + p2 - p3;
    const BoundaryDataSet data = sample_surface(F, 0.7, 1.9, 1.3, 0.6, 1);
    const GregoryPatch g = make_gregory_patch(data, PatchMode::G1);
    for (int i = 0; i < 20; ++i) {
        const double u = rng.uniform(0, 1);
        const double v = rng.uniform(0, 1);
        const Vec3 bilinear = (1 - u) * (1 - v) * p0 + u * (1 - v) * p1 + u * v * p2 + (1 - u) * v * p3;
        CHECK(rel_err_vec(eval_g1(g, u, v), bilinear) < 1e-10);
    }
}

TEST_CASE("twist rule matters only for incompatible twists", "[coons_gregory]") {
    Rng rng(109);
    const BoundaryDataSet data = random_boundary_data(rng, 1);
    const GregoryPatch a = make_gregory_patch(data, PatchMode::G1, TwistRule::AlongU);
    const GregoryPatch b = make_gregory_patch(data, PatchMode::G1, TwistRule::AlongV);
    CHECK((eval_gregory(a, 0.4, 0.3) - eval_gregory(b, 0.4, 0.3)).norm() > 1e-6);
}

TEST_CASE("affine equivariance", "[coons_gregory]") {
    Rng rng(113);
    Eigen::Matrix3d A;
    A << 0.8, 0.2, -0.3, 0.1, 1.1, 0.4, -0.5, 0.3, 0.9;
    const Vec3 shift(1.0, -2.0, 0.5);
    for (int trial = 0; trial < 5; ++trial) {
        BoundaryDataSet data = random_boundary_data(rng, 2);
        BoundaryDataSet moved = data;
        for (int i = 0; i < 4; ++i) {
            moved.p[i] = A * data.p[i] + shift;
            moved.gamma[i] = [f = data.gamma[i], A, shift](double x, int r) {
                return Vec3(r == 0 ? Vec3(A * f(x, r) + shift) : Vec3(A * f(x, r)));
            };
            moved.chi[i] = [f = data.chi[i], A](double x, int r) { return Vec3(A * f(x, r)); };
            moved.xi[i] = [f = data.xi[i], A](double x, int r) { return Vec3(A * f(x, r)); };
        }
        for (PatchMode mode : {PatchMode::G1, PatchMode::G2}) {
            const GregoryPatch g = make_gregory_patch(data, mode);
            const GregoryPatch m = make_gregory_patch(moved, mode);
            for (int i = 0; i < 10; ++i) {
                const double u = rng.uniform(0, 1);
                const double v = rng.uniform(0, 1);
                CHECK(rel_err_vec(eval_gregory(m, u, v), Vec3(A * eval_gregory(g, u, v) + shift)) < 1e-12);
            }
        }
    }
}

TEST_CASE("shared boundary data join with a common tangent plane", "[coons_gregory]") {
    Rng rng(127);
    // Patch A over corners q0 q1 q2 q3, patch B over q1 q4 q5 q2; A's side 1 is B's side 3.
    std::array<CornerJet, 6> q;
    const Vec3 base[6] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {2, 0, 0}, {2, 1, 0}};
    for (int i = 0; i < 6; ++i) {
        q[i] = random_corner(rng, base[i]);
    }
    const SideBump shared = random_bump(rng);
    const double e_shared = 1.4;
    const BoundaryDataSet A = make_boundary_data({q[0], q[1], q[2], q[3]}, 1.1, 0.8, 0.9, e_shared,
                                                 {random_bump(rng), shared, random_bump(rng), random_bump(rng)}, 2);
    const BoundaryDataSet B = make_boundary_data({q[1], q[4], q[5], q[2]}, 0.7, 1.6, e_shared, 1.2,
                                                 {random_bump(rng), random_bump(rng), random_bump(rng), shared}, 2);
    for (PatchMode mode : {PatchMode::G1, PatchMode::G2}) {
        const GregoryPatch a = make_gregory_patch(A, mode);
        const GregoryPatch b = make_gregory_patch(B, mode);
        for (int i = 0; i < 10; ++i) {
            const double v = rng.uniform(0, 1);
            const auto da = eval_gregory_derivatives(a, 1, v);
            const auto db = eval_gregory_derivatives(b, 0, v);
            CHECK((da.s - db.s).norm() < 1e-12);
            const Vec3 na = da.su.cross(da.sv).normalized();
            const Vec3 nb = db.su.cross(db.sv).normalized();
            CHECK(na.cross(nb).norm() < 1e-6);
            CHECK(na.dot(nb) > 0.0);
        }
    }
}

TEST_CASE("patch construction errors", "[coons_gregory]") {
    Rng rng(131);
    BoundaryDataSet data = random_boundary_data(rng, 1);
    CHECK_THROWS_AS(make_gregory_patch(data, PatchMode::G2), Error);
    BoundaryDataSet bad = data;
    bad.p[2] += Vec3(0.1, 0, 0);
    CHECK_THROWS_AS(make_gregory_patch(bad, PatchMode::G1), Error);
    bad = data;
    bad.d0 = 0.0;
    CHECK_THROWS_AS(make_gregory_patch(bad, PatchMode::G1), Error);
    const GregoryPatch g = make_gregory_patch(data, PatchMode::G1);
    CHECK_THROWS_AS(eval_g2(g, 0.5, 0.5), Error);
    CHECK_THROWS_AS(eval_g1(g, 1.5, 0.5), Error);
}
