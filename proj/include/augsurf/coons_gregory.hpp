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
#include <augsurf/regular_patch.hpp>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace augsurf {

/// Field along one side, in the side's local variable: f(x, r) is the r-th
/// derivative at x. Orders 0..2 must be supported.
using BoundaryFn = std::function<Vec3(double, int)>;

enum class PatchMode {
    G1,
    G2,
};

/// Input of a Coons-Gregory patch. Corners p0 = S(0,0), p1 = S(1,0),
/// p2 = S(1,1), p3 = S(0,1). gamma0 runs p0 -> p1 on [0, d0], gamma1 p1 -> p2
/// on [0, e1], gamma2 p3 -> p2 on [0, d1], gamma3 p0 -> p3 on [0, e0]. chi and
/// xi are the first and second cross derivatives in local variables, in +v
/// for sides 0 and 2 and in +u for sides 1 and 3.
struct BoundaryDataSet {
    std::array<Vec3, 4> p;
    std::array<BoundaryFn, 4> gamma;
    std::array<BoundaryFn, 4> chi;
    std::array<BoundaryFn, 4> xi; // empty for G1
    double d0 = 1.0;
    double d1 = 1.0;
    double e0 = 1.0;
    double e1 = 1.0;
    int k = 1;

    LocalParamFn delta() const {
        return smooth_blend(k, d0, d1);
    }

    LocalParamFn eps() const {
        return smooth_blend(k, e0, e1);
    }

    double side_length(int side) const {
        switch (side) {
        case 0:
            return d0;
        case 1:
            return e1;
        case 2:
            return d1;
        default:
            return e0;
        }
    }

    bool has_xi() const {
        return xi[0] && xi[1] && xi[2] && xi[3];
    }
};

/// How the corner twists are blended. Gregory is the rational blend; the
/// other two keep a single numerator term and exist for testing.
enum class TwistRule {
    Gregory,
    AlongU,
    AlongV,
};

/// Cubic (5 entries) or quintic (7 entries) Hermite vector with the leading -1.
template <class T>
std::array<T, 7> hermite_vector(int degree, const T& u) {
    const T u2 = u * u;
    const T u3 = u2 * u;
    std::array<T, 7> h{T(-1.0), T(0.0), T(0.0), T(0.0), T(0.0), T(0.0), T(0.0)};
    if (degree == 3) {
        h[1] = 2.0 * u3 - 3.0 * u2 + 1.0;
        h[2] = -2.0 * u3 + 3.0 * u2;
        h[3] = u3 - 2.0 * u2 + u;
        h[4] = u3 - u2;
        return h;
    }
    const T u4 = u3 * u;
    const T u5 = u4 * u;
    h[1] = -6.0 * u5 + 15.0 * u4 - 10.0 * u3 + 1.0;
    h[2] = 6.0 * u5 - 15.0 * u4 + 10.0 * u3;
    h[3] = -3.0 * u5 + 8.0 * u4 - 6.0 * u3 + u;
    h[4] = -3.0 * u5 + 7.0 * u4 - 4.0 * u3;
    h[5] = -0.5 * u5 + 1.5 * u4 - 1.5 * u3 + 0.5 * u2;
    h[6] = 0.5 * u5 - u4 + 0.5 * u3;
    return h;
}

inline std::vector<double> hermite_basis(int degree, double u) {
    if (degree != 3 && degree != 5) {
        throw Error(ErrorKind::Domain, "Hermite basis degree must be 3 or 5");
    }
    const auto h = hermite_vector(degree, u);
    return {h.begin(), h.begin() + (degree == 3 ? 5 : 7)};
}

struct GregoryPatch {
    BoundaryDataSet data;
    PatchMode mode = PatchMode::G1;
    TwistRule twist = TwistRule::Gregory;

    // Endpoint derivatives, cached at construction: [side][end][order].
    std::array<std::array<std::array<Vec3, 3>, 2>, 4> gamma_end{};
    std::array<std::array<std::array<Vec3, 3>, 2>, 4> chi_end{};
    std::array<std::array<std::array<Vec3, 3>, 2>, 4> xi_end{};
};

/// Largest violation of the compatibility conditions the patch needs for
/// exact interpolation: curve ends at the corners, cross fields at the
/// corners equal to the adjacent curve derivatives.
inline double boundary_data_mismatch(const BoundaryDataSet& b) {
    double worst = 0.0;
    auto upd = [&](const Vec3& a, const Vec3& c) { worst = std::max(worst, (a - c).norm()); };
    upd(b.gamma[0](0.0, 0), b.p[0]);
    upd(b.gamma[0](b.d0, 0), b.p[1]);
    upd(b.gamma[1](0.0, 0), b.p[1]);
    upd(b.gamma[1](b.e1, 0), b.p[2]);
    upd(b.gamma[2](0.0, 0), b.p[3]);
    upd(b.gamma[2](b.d1, 0), b.p[2]);
    upd(b.gamma[3](0.0, 0), b.p[0]);
    upd(b.gamma[3](b.e0, 0), b.p[3]);
    const int orders = b.has_xi() ? 2 : 1;
    for (int r = 1; r <= orders; ++r) {
        const auto& f = r == 1 ? b.chi : b.xi;
        upd(f[3](0.0, 0), b.gamma[0](0.0, r));
        upd(f[3](b.e0, 0), b.gamma[2](0.0, r));
        upd(f[1](0.0, 0), b.gamma[0](b.d0, r));
        upd(f[1](b.e1, 0), b.gamma[2](b.d1, r));
        upd(f[0](0.0, 0), b.gamma[3](0.0, r));
        upd(f[0](b.d0, 0), b.gamma[1](0.0, r));
        upd(f[2](0.0, 0), b.gamma[3](b.e0, r));
        upd(f[2](b.d1, 0), b.gamma[1](b.e1, r));
    }
    return worst;
}

inline GregoryPatch make_gregory_patch(BoundaryDataSet data, PatchMode mode, TwistRule twist = TwistRule::Gregory) {
    for (double d : {data.d0, data.d1, data.e0, data.e1}) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error(ErrorKind::Domain, "boundary intervals must be positive");
        }
    }
    if (data.k != 1 && data.k != 2) {
        throw Error(ErrorKind::Unsupported, "smoothness order must be 1 or 2");
    }
    for (int s = 0; s < 4; ++s) {
        if (!data.gamma[s] || !data.chi[s]) {
            throw Error(ErrorKind::Contract, "boundary data set is missing a curve or a first-order field");
        }
    }
    if (mode == PatchMode::G2 && (!data.has_xi() || data.k < 2)) {
        throw Error(ErrorKind::Contract, "G2 patches need second-order cross fields and k = 2");
    }
    GregoryPatch g;
    g.mode = mode;
    g.twist = twist;
    for (int s = 0; s < 4; ++s) {
        const double len = data.side_length(s);
        for (int end = 0; end < 2; ++end) {
            const double x = end == 0 ? 0.0 : len;
            for (int r = 0; r <= 2; ++r) {
                g.gamma_end[s][end][r] = data.gamma[s](x, r);
                g.chi_end[s][end][r] = data.chi[s](x, r);
                if (mode == PatchMode::G2) {
                    g.xi_end[s][end][r] = data.xi[s](x, r);
                }
            }
        }
    }
    double scale = 0.0;
    for (const Vec3& p : data.p) {
        scale = std::max(scale, p.norm());
    }
    const auto& ge = g.gamma_end;
    const std::array<std::pair<Vec3, Vec3>, 8> ends = {{{ge[0][0][0], data.p[0]},
                                                         {ge[0][1][0], data.p[1]},
                                                         {ge[1][0][0], data.p[1]},
                                                         {ge[1][1][0], data.p[2]},
                                                         {ge[2][0][0], data.p[3]},
                                                         {ge[2][1][0], data.p[2]},
                                                         {ge[3][0][0], data.p[0]},
                                                         {ge[3][1][0], data.p[3]}}};
    for (const auto& [a, b] : ends) {
        if ((a - b).norm() > 1e-8 * std::max(1.0, scale)) {
            throw Error(ErrorKind::Contract, "boundary curve does not end at its corner");
        }
    }
    g.data = std::move(data);
    return g;
}

namespace detail {

template <class T>
Point3<T> lift(const Vec3& p) {
    return {T(p[0]), T(p[1]), T(p[2])};
}

template <class T>
Point3<T> scaled(const Point3<T>& p, const T& s) {
    return {p[0] * s, p[1] * s, p[2] * s};
}

template <class T>
Point3<T> scaled(const Vec3& p, const T& s) {
    return {s * p[0], s * p[1], s * p[2]};
}

/// f(x) for a plain or jet argument; jets expand f around value_of(x).
template <class T>
Point3<T> compose(const BoundaryFn& f, const T& x, double len) {
    const double x0 = std::clamp(value_of(x), 0.0, len);
    if constexpr (std::is_same_v<T, double>) {
        return lift<T>(f(x0, 0));
    }
    else {
        const T dx = x - x0;
        Point3<T> out = lift<T>(f(x0, 0));
        T pw = dx;
        double fact = 1.0;
        for (int r = 1; r <= std::min(2, T::order); ++r) {
            fact *= r;
            const Vec3 fr = f(x0, r) / fact;
            for (int c = 0; c < 3; ++c) {
                out[c] = out[c] + fr[c] * pw;
            }
            pw = pw * dx;
        }
        return out;
    }
}

/// Rational blend (wa A + wb B) / (wa + wb), with the mean of A and B where
/// both weights vanish.
template <class T>
Point3<T> blend_twist(const T& wa, const Vec3& A, const T& wb, const Vec3& B, TwistRule rule) {
    if (rule == TwistRule::AlongU) {
        return lift<T>(A);
    }
    if (rule == TwistRule::AlongV) {
        return lift<T>(B);
    }
    const T den = wa + wb;
    if (value_of(den) < 1e-12) {
        return lift<T>(Vec3(0.5 * (A + B)));
    }
    const T ta = wa / den;
    const T tb = wb / den;
    return {ta * A[0] + tb * B[0], ta * A[1] + tb * B[1], ta * A[2] + tb * B[2]};
}

template <class T>
Point3<T> eval_gregory_generic(const GregoryPatch& g, const T& u, const T& v) {
    const BoundaryDataSet& b = g.data;
    const bool g2 = g.mode == PatchMode::G2;
    const int n = g2 ? 7 : 5;
    const T x0 = u * b.d0;
    const T x1 = u * b.d1;
    const T y0 = v * b.e0;
    const T y1 = v * b.e1;
    const LocalParamFn dfn = b.delta();
    const LocalParamFn efn = b.eps();
    const T dv = dfn(v);
    const T eu = efn(u);
    const T U = u;
    const T V = v;
    const T Um = 1.0 - u;
    const T Vm = 1.0 - v;
    const T wu0 = g2 ? U * U : U;
    const T wu1 = g2 ? Um * Um : Um;
    const T wv0 = g2 ? V * V : V;
    const T wv1 = g2 ? Vm * Vm : Vm;
    const auto& ge = g.gamma_end;
    const auto& ce = g.chi_end;
    const auto& xe = g.xi_end;

    std::array<std::array<Point3<T>, 7>, 7> M;
    for (auto& row : M) {
        row.fill(lift<T>(Vec3::Zero()));
    }
    // Row 0 and column 0: boundary curves and cross fields.
    M[0][1] = compose(b.gamma[0], x0, b.d0);
    M[0][2] = compose(b.gamma[2], x1, b.d1);
    M[0][3] = scaled(compose(b.chi[0], x0, b.d0), eu);
    M[0][4] = scaled(compose(b.chi[2], x1, b.d1), eu);
    M[1][0] = compose(b.gamma[3], y0, b.e0);
    M[2][0] = compose(b.gamma[1], y1, b.e1);
    M[3][0] = scaled(compose(b.chi[3], y0, b.e0), dv);
    M[4][0] = scaled(compose(b.chi[1], y1, b.e1), dv);
    // Corners and curve derivatives at the corners.
    M[1][1] = lift<T>(b.p[0]);
    M[1][2] = lift<T>(b.p[3]);
    M[2][1] = lift<T>(b.p[1]);
    M[2][2] = lift<T>(b.p[2]);
    M[1][3] = lift<T>(Vec3(b.e0 * ge[3][0][1]));
    M[1][4] = lift<T>(Vec3(b.e0 * ge[3][1][1]));
    M[2][3] = lift<T>(Vec3(b.e1 * ge[1][0][1]));
    M[2][4] = lift<T>(Vec3(b.e1 * ge[1][1][1]));
    M[3][1] = lift<T>(Vec3(b.d0 * ge[0][0][1]));
    M[4][1] = lift<T>(Vec3(b.d0 * ge[0][1][1]));
    M[3][2] = lift<T>(Vec3(b.d1 * ge[2][0][1]));
    M[4][2] = lift<T>(Vec3(b.d1 * ge[2][1][1]));

    // Twist block for cross orders (a, c): a along u (rows), c along v
    // (columns). The u = 0 / u = 1 fields carry the v derivatives, the
    // v = 0 / v = 1 fields the u derivatives.
    auto twist_block = [&](int a, int c, int row0, int col0) {
        const auto& fu = a == 1 ? ce : xe; // fields of sides 3 and 1, order a across
        const auto& fv = c == 1 ? ce : xe; // fields of sides 0 and 2, order c across
        const double dd[2] = {std::pow(b.d0, a), std::pow(b.d1, a)};
        const double ee[2] = {std::pow(b.e0, c), std::pow(b.e1, c)};
        // Corner (i, j): i = u end, j = v end.
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const Vec3 along_side_u = fu[i == 0 ? 3 : 1][j][c];  // d^c/dy^c of the u-side field
                const Vec3 along_side_v = fv[j == 0 ? 0 : 2][i][a];  // d^a/dx^a of the v-side field
                const T& wa = i == 0 ? wu0 : wu1;
                const T& wb = j == 0 ? wv0 : wv1;
                const double s = dd[j] * ee[i];
                M[row0 + i][col0 + j] = scaled(blend_twist(wa, along_side_u, wb, along_side_v, g.twist), T(s));
            }
        }
    };
    twist_block(1, 1, 3, 3);

    if (g2) {
        const T eu2 = eu * eu;
        const T dv2 = dv * dv;
        M[0][5] = scaled(compose(b.xi[0], x0, b.d0), eu2);
        M[0][6] = scaled(compose(b.xi[2], x1, b.d1), eu2);
        M[5][0] = scaled(compose(b.xi[3], y0, b.e0), dv2);
        M[6][0] = scaled(compose(b.xi[1], y1, b.e1), dv2);
        M[1][5] = lift<T>(Vec3(b.e0 * b.e0 * ge[3][0][2]));
        M[1][6] = lift<T>(Vec3(b.e0 * b.e0 * ge[3][1][2]));
        M[2][5] = lift<T>(Vec3(b.e1 * b.e1 * ge[1][0][2]));
        M[2][6] = lift<T>(Vec3(b.e1 * b.e1 * ge[1][1][2]));
        M[5][1] = lift<T>(Vec3(b.d0 * b.d0 * ge[0][0][2]));
        M[6][1] = lift<T>(Vec3(b.d0 * b.d0 * ge[0][1][2]));
        M[5][2] = lift<T>(Vec3(b.d1 * b.d1 * ge[2][0][2]));
        M[6][2] = lift<T>(Vec3(b.d1 * b.d1 * ge[2][1][2]));
        twist_block(1, 2, 3, 5);
        twist_block(2, 1, 5, 3);
        twist_block(2, 2, 5, 5);
    }

    const auto Hu = hermite_vector(g2 ? 5 : 3, U);
    const auto Hv = hermite_vector(g2 ? 5 : 3, V);
    Point3<T> out{T(0.0), T(0.0), T(0.0)};
    for (int i = 0; i < n; ++i) {
        Point3<T> row{T(0.0), T(0.0), T(0.0)};
        for (int j = 0; j < n; ++j) {
            for (int c = 0; c < 3; ++c) {
                row[c] = row[c] + M[i][j][c] * Hv[j];
            }
        }
        for (int c = 0; c < 3; ++c) {
            out[c] = out[c] - Hu[i] * row[c];
        }
    }
    return out;
}

} // namespace detail

inline Vec3 eval_gregory(const GregoryPatch& g, double u, double v) {
    detail::check_uv(u, v);
    return detail::to_vec(detail::eval_gregory_generic(g, std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0)));
}

inline Vec3 eval_g1(const GregoryPatch& g, double u, double v) {
    if (g.mode != PatchMode::G1) {
        throw Error(ErrorKind::Contract, "eval_g1 called on a G2 patch");
    }
    return eval_gregory(g, u, v);
}

inline Vec3 eval_g2(const GregoryPatch& g, double u, double v) {
    if (g.mode != PatchMode::G2) {
        throw Error(ErrorKind::Contract, "eval_g2 called on a G1 patch");
    }
    return eval_gregory(g, u, v);
}

/// Position and derivatives through order two, exact where the boundary
/// fields are.
inline PatchDerivatives eval_gregory_derivatives(const GregoryPatch& g, double u, double v) {
    detail::check_uv(u, v);
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    using J = Jet<2>;
    auto along = [&](double a, double b) {
        J ju = J::variable(u);
        J jv = J::variable(v);
        ju.c[1] = a;
        jv.c[1] = b;
        return detail::eval_gregory_generic(g, ju, jv);
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

} // namespace augsurf
