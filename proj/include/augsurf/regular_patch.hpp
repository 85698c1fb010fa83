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
#include <augsurf/jet.hpp>
#include <augsurf/quad_mesh.hpp>
#include <augsurf/spline_core.hpp>

#include <array>
#include <string>

namespace augsurf {

/// Hermite blend B_k with B_k(0) = 0, B_k(1) = 1 and vanishing derivatives
/// through order k at both ends. r-th derivative at t.
inline double blend_basis(int k, double t, int r = 0) {
    if (k == 1) {
        switch (r) {
        case 0:
            return t * t * (3.0 - 2.0 * t);
        case 1:
            return 6.0 * t * (1.0 - t);
        case 2:
            return 6.0 - 12.0 * t;
        case 3:
            return -12.0;
        default:
            return 0.0;
        }
    }
    switch (r) {
    case 0:
        return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    case 1:
        return 30.0 * t * t * (1.0 - t) * (1.0 - t);
    case 2:
        return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    case 3:
        return 60.0 * (1.0 + t * (-6.0 + 6.0 * t));
    case 4:
        return 60.0 * (-6.0 + 12.0 * t);
    case 5:
        return 720.0;
    default:
        return 0.0;
    }
}

/// a + (b - a) B_k(t): blends two opposite edge intervals of a face.
struct LocalParamFn {
    int k = 1;
    double a = 1.0;
    double b = 1.0;

    double eval(double t, int r = 0) const {
        const double base = blend_basis(k, t, r) * (b - a);
        return r == 0 ? a + base : base;
    }

    template <class T>
    T operator()(const T& t) const {
        const T t2 = t * t;
        const T B = k == 1 ? t2 * (3.0 - 2.0 * t) : t2 * t * (10.0 + t * (-15.0 + 6.0 * t));
        return a + (b - a) * B;
    }
};

inline LocalParamFn smooth_blend(int k, double a, double b) {
    if (k != 1 && k != 2) {
        throw Error(ErrorKind::Unsupported, "local parametrization functions exist for k = 1, 2 only");
    }
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorKind::Domain, "local parametrization endpoints must be positive");
    }
    return {k, a, b};
}

/// Augmented patch over a regular face. delta[i + 1] blends d_{i,0} -> d_{i,1}
/// in v and eps[j + 1] blends e_{0,j} -> e_{1,j} in u, for i, j in [-1, 1].
struct RegularPatch {
    LocalGrid grid;
    SplineFamily family;
    std::array<LocalParamFn, 3> delta;
    std::array<LocalParamFn, 3> eps;

    int k() const {
        return family.k;
    }
};

inline RegularPatch make_regular_patch(const LocalGrid& grid, const SplineFamily& family) {
    if (grid.w != 4) {
        throw Error(ErrorKind::Unsupported, "patch evaluation supports width 4 only", grid.face);
    }
    RegularPatch p;
    p.grid = grid;
    p.family = family;
    for (int i = 0; i < 3; ++i) {
        p.delta[i] = smooth_blend(family.k, grid.d0[i], grid.d1[i]);
        p.eps[i] = smooth_blend(family.k, grid.e0[i], grid.e1[i]);
    }
    return p;
}

/// Sides in the order v = 0, u = 1, v = 1, u = 0. Sides 0 and 2 run along u,
/// sides 1 and 3 along v; the cross direction is +v or +u respectively.
enum PatchSide : int {
    SideBottom = 0,
    SideRight = 1,
    SideTop = 2,
    SideLeft = 3,
};

inline void check_side(int side) {
    if (side < 0 || side > 3) {
        throw Error(ErrorKind::Domain, "patch side must be 0..3");
    }
}

namespace detail {

template <class T>
using Point3 = std::array<T, 3>;

template <class T>
Point3<T> combine(const RegularPatch& P, const std::array<T, 4>& wu, const std::array<T, 4>& wv) {
    Point3<T> out{T(0.0), T(0.0), T(0.0)};
    for (int j = 0; j < 4; ++j) {
        Point3<T> row{T(0.0), T(0.0), T(0.0)};
        for (int i = 0; i < 4; ++i) {
            const Vec3& p = P.grid.at(i - 1, j - 1);
            for (int c = 0; c < 3; ++c) {
                row[c] = row[c] + wu[i] * p[c];
            }
        }
        for (int c = 0; c < 3; ++c) {
            out[c] = out[c] + row[c] * wv[j];
        }
    }
    return out;
}

template <class T>
LocalParamVector<T> param_vector_at(const std::array<LocalParamFn, 3>& f, const T& t) {
    return {{f[0](t), f[1](t), f[2](t)}};
}

template <class T>
Point3<T> eval_patch_generic(const RegularPatch& P, const T& u, const T& v) {
    const LocalParamVector<T> d = param_vector_at(P.delta, v);
    const LocalParamVector<T> e = param_vector_at(P.eps, u);
    const T x = u * d.d[1];
    const T y = v * e.d[1];
    return combine(P, fundamental_values(P.family, x, d), fundamental_values(P.family, y, e));
}

/// r-th cross derivative on a side in local variables, as a function of the
/// side parameter t in [0, 1].
template <class T>
Point3<T> side_cross_generic(const RegularPatch& P, int side, const T& t, int r) {
    const bool along_u = side == SideBottom || side == SideTop;
    const bool far = side == SideRight || side == SideTop;
    const double s = far ? 1.0 : 0.0;
    if (along_u) {
        // v fixed at s: d = d(s) constant, e = e(t) varies.
        const LocalParamVector<T> d = param_vector_at(P.delta, T(s));
        const LocalParamVector<T> e = param_vector_at(P.eps, t);
        const T x = t * d.d[1];
        const T y = far ? e.d[1] : T(0.0);
        return combine(P, fundamental_values(P.family, x, d), fundamental_values(P.family, y, e, r));
    }
    const LocalParamVector<T> d = param_vector_at(P.delta, t);
    const LocalParamVector<T> e = param_vector_at(P.eps, T(s));
    const T x = far ? d.d[1] : T(0.0);
    const T y = t * e.d[1];
    return combine(P, fundamental_values(P.family, x, d, r), fundamental_values(P.family, y, e));
}

inline Vec3 to_vec(const Point3<double>& p) {
    return {p[0], p[1], p[2]};
}

template <int N>
Vec3 jet_derivative(const Point3<Jet<N>>& p, int r) {
    return {p[0].derivative(r), p[1].derivative(r), p[2].derivative(r)};
}

inline void check_uv(double u, double v) {
    const double slack = 1e-12;
    if (!(u >= -slack && u <= 1.0 + slack && v >= -slack && v <= 1.0 + slack)) {
        throw Error(ErrorKind::Domain, "patch parameters outside [0, 1]^2");
    }
}

} // namespace detail

inline Vec3 eval_patch(const RegularPatch& P, double u, double v) {
    detail::check_uv(u, v);
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    if ((u == 0.0 || u == 1.0) && (v == 0.0 || v == 1.0)) {
        return P.grid.at(static_cast<int>(u), static_cast<int>(v));
    }
    return detail::to_vec(detail::eval_patch_generic(P, u, v));
}

struct PatchDerivatives {
    Vec3 s = Vec3::Zero();
    Vec3 su = Vec3::Zero();
    Vec3 sv = Vec3::Zero();
    Vec3 suu = Vec3::Zero();
    Vec3 suv = Vec3::Zero();
    Vec3 svv = Vec3::Zero();
};

/// Position and derivatives through order two at (u, v), exact.
inline PatchDerivatives eval_patch_derivatives(const RegularPatch& P, double u, double v) {
    detail::check_uv(u, v);
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    using J = Jet<2>;
    auto along = [&](double a, double b) {
        J ju = J::variable(u);
        J jv = J::variable(v);
        ju.c[1] = a;
        jv.c[1] = b;
        return detail::eval_patch_generic(P, ju, jv);
    };
    const auto du = along(1.0, 0.0);
    const auto dv = along(0.0, 1.0);
    const auto dd = along(1.0, 1.0);
    PatchDerivatives out;
    out.s = detail::jet_derivative(du, 0);
    out.su = detail::jet_derivative(du, 1);
    out.sv = detail::jet_derivative(dv, 1);
    out.suu = detail::jet_derivative(du, 2);
    out.svv = detail::jet_derivative(dv, 2);
    out.suv = 0.5 * (detail::jet_derivative(dd, 2) - out.suu - out.svv);
    return out;
}

/// Local parametrization value on a side: eps_{0,0} along sides 0 and 2,
/// delta_{0,0} along sides 1 and 3, at side parameter t.
inline double side_cross_scale(const RegularPatch& P, int side, double t) {
    check_side(side);
    return side == SideBottom || side == SideTop ? P.eps[1].eval(t) : P.delta[1].eval(t);
}

/// d^{r_along}/dt^{r_along} of the r_cross-th cross derivative of S in the
/// uv domain, on the given side at t in [0, 1]. Cross derivatives point in +u
/// (sides 1, 3) or +v (sides 0, 2).
inline Vec3 eval_patch_boundary_deriv(const RegularPatch& P, int side, double t, int r_cross, int r_along = 0) {
    check_side(side);
    if (r_cross < 0 || r_cross > P.k()) {
        throw Error(ErrorKind::Unsupported,
                    "cross derivative order " + std::to_string(r_cross) + " exceeds the patch continuity",
                    P.grid.face);
    }
    if (r_along < 0 || r_along > 2) {
        throw Error(ErrorKind::Domain, "along-boundary derivative order must be 0..2");
    }
    detail::check_uv(t, 0.0);
    t = std::clamp(t, 0.0, 1.0);
    using J = Jet<2>;
    const bool along_u = side == SideBottom || side == SideTop;
    const auto& scale = along_u ? P.eps[1] : P.delta[1];
    const auto local = detail::side_cross_generic(P, side, J::variable(t), r_cross);
    J f(1.0);
    for (int i = 0; i < r_cross; ++i) {
        f = f * scale(J::variable(t));
    }
    detail::Point3<J> scaled{local[0] * f, local[1] * f, local[2] * f};
    return detail::jet_derivative(scaled, r_along);
}

/// Ratio delta_{0,0}(v) / delta_{-1,0}(v) relating cross derivatives of a
/// patch and its left neighbour. The neighbour's side u = 1 must be the
/// patch's side u = 0, traversed in the same direction.
inline double boundary_scaling_delta(const RegularPatch& P, const RegularPatch& left, double v) {
    const bool adjacent = P.grid.side_edge[SideLeft] == left.grid.side_edge[SideRight]
                          && P.grid.vertex_at(0, 0) == left.grid.vertex_at(1, 0)
                          && P.grid.vertex_at(0, 1) == left.grid.vertex_at(1, 1);
    if (!adjacent) {
        throw Error(ErrorKind::Contract, "patches do not share the left side with matching orientation", P.grid.face);
    }
    return P.delta[1].eval(v) / left.delta[1].eval(v);
}

/// Edge interval of a side: the length of its local boundary variable.
inline double side_interval(const RegularPatch& P, int side) {
    check_side(side);
    switch (side) {
    case SideBottom:
        return P.grid.d(0, 0);
    case SideRight:
        return P.grid.e(1, 0);
    case SideTop:
        return P.grid.d(0, 1);
    default:
        return P.grid.e(0, 0);
    }
}

/// Data of one side in its local boundary variable x in [0, side_interval]:
/// r_cross = 0 gives the curve, 1 and 2 the cross fields chi and xi (the uv
/// cross derivatives divided by the local parametrization function to the
/// r_cross-th power). r_along differentiates in x.
inline Vec3 sample_boundary_data(const RegularPatch& P, int side, double x, int r_cross, int r_along = 0) {
    check_side(side);
    if (r_cross < 0 || r_cross > P.k()) {
        throw Error(ErrorKind::Unsupported, "cross field order exceeds the patch continuity", P.grid.face);
    }
    if (r_along < 0 || r_along > 2) {
        throw Error(ErrorKind::Domain, "along-boundary derivative order must be 0..2");
    }
    const double len = side_interval(P, side);
    const double t = std::clamp(x / len, 0.0, 1.0);
    using J = Jet<2>;
    const auto local = detail::side_cross_generic(P, side, J::variable(t), r_cross);
    return detail::jet_derivative(local, r_along) / std::pow(len, r_along);
}

} // namespace augsurf
