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
#include <augsurf/errors.hpp>
#include <augsurf/quad_mesh.hpp>
#include <augsurf/regular_patch.hpp>
#include <augsurf/spline_core.hpp>
#include <augsurf/vec_poly.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace augsurf {

namespace detail {

inline void check_star(const std::vector<Vec3>& nbrs, const std::vector<double>& d) {
    if (nbrs.size() < 3) {
        throw Error(ErrorKind::Domain, "vertex valence must be at least 3");
    }
    if (d.size() != nbrs.size()) {
        throw Error(ErrorKind::Domain, "one interval per neighbour is required");
    }
    for (double x : d) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw Error(ErrorKind::Domain, "edge intervals must be positive");
        }
    }
}

} // namespace detail

/// Generalized Bessel estimate of the first derivative at p0 of the curve
/// toward nbrs[i]. Neighbours are in fan order. Empty when the weighted
/// opposite interval is not positive.
inline std::optional<Vec3> try_estimate_tangent_bessel(const Vec3& p0, const std::vector<Vec3>& nbrs,
                                                       const std::vector<double>& d, int i) {
    detail::check_star(nbrs, d);
    const int n = static_cast<int>(nbrs.size());
    if (i < 0 || i >= n) {
        throw Error(ErrorKind::Domain, "edge index out of range");
    }
    double dbar = 0.0;
    double dmax = 0.0;
    Vec3 fbar = Vec3::Zero();
    for (int j = 0; j < n; ++j) {
        dmax = std::max(dmax, d[j]);
        if (j == i) {
            continue;
        }
        double c = std::cos(2.0 * std::numbers::pi * (j - i) / n);
        if (std::abs(c) < 1e-12) {
            c = 0.0;
        }
        dbar -= c * d[j];
        fbar += std::abs(c) * (nbrs[j] - p0);
    }
    if (!(dbar > 1e-12 * dmax)) {
        return std::nullopt;
    }
    const double alpha = dbar / (d[i] + dbar);
    return Vec3(alpha / d[i] * (nbrs[i] - p0) - (1.0 - alpha) / dbar * fbar);
}

inline Vec3 estimate_tangent_bessel(const Vec3& p0, const std::vector<Vec3>& nbrs, const std::vector<double>& d, int i) {
    if (auto t = try_estimate_tangent_bessel(p0, nbrs, d, i)) {
        return *t;
    }
    throw Error(ErrorKind::DegenerateEstimate, "opposite interval sum is not positive for edge " + std::to_string(i));
}

/// Bessel estimate, or the chord (p_i - p0) / d_i where it degenerates.
inline Vec3 estimate_tangent_or_chord(const Vec3& p0, const std::vector<Vec3>& nbrs, const std::vector<double>& d, int i,
                                      int* fallbacks = nullptr) {
    if (auto t = try_estimate_tangent_bessel(p0, nbrs, d, i)) {
        return *t;
    }
    if (fallbacks) {
        ++*fallbacks;
    }
    return (nbrs[i] - p0) / d[i];
}

/// Values at d/4 and d/2 of the cubic with lambda(0) = p0, lambda'(0) = t0,
/// lambda(d) = pi, lambda'(d) = ti.
inline std::pair<Vec3, Vec3> guide_points(const Vec3& p0, const Vec3& pi, double d, const Vec3& t0, const Vec3& ti) {
    const Vec3 q1 = (54.0 * p0 + 10.0 * pi + 3.0 * d * (3.0 * t0 - ti)) / 64.0;
    const Vec3 q2 = (4.0 * p0 + 4.0 * pi + d * (t0 - ti)) / 8.0;
    return {q1, q2};
}

/// Angles of the tangents laid out in the plane: eta_0 = 0 and consecutive
/// increments proportional to the spatial angles between neighbours.
inline std::vector<double> planar_angles(const std::vector<Vec3>& tangents) {
    const int n = static_cast<int>(tangents.size());
    if (n < 2) {
        throw Error(ErrorKind::Domain, "at least two tangents are required");
    }
    double scale = 0.0;
    for (const Vec3& t : tangents) {
        if (!t.allFinite()) {
            throw Error(ErrorKind::DegenerateEstimate, "tangent is not finite");
        }
        scale = std::max(scale, t.norm());
    }
    for (int i = 0; i < n; ++i) {
        if (!(tangents[i].norm() > 1e-14 * scale)) {
            throw Error(ErrorKind::DegenerateEstimate, "zero tangent at spoke " + std::to_string(i));
        }
    }
    std::vector<double> zeta(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec3& a = tangents[i];
        const Vec3& b = tangents[(i + 1) % n];
        zeta[i] = std::atan2(a.cross(b).norm(), a.dot(b));
        total += zeta[i];
    }
    if (!(total > 0.0)) {
        throw Error(ErrorKind::DegenerateEstimate, "all tangents are parallel");
    }
    std::vector<double> eta(n, 0.0);
    for (int i = 1; i < n; ++i) {
        eta[i] = eta[i - 1] + zeta[i - 1] * 2.0 * std::numbers::pi / total;
    }
    return eta;
}

/// Radii of the guide points in the parameter plane. PowerDistance uses
/// |q - p0|^alpha, Interval uses d/4 and d/2.
enum class RadiusRule {
    PowerDistance,
    Interval,
};

/// Parameter-plane coordinates of the 2n guide points q_0..q_{2n-1}; q_i and
/// q_{n+i} lie on the ray at angle eta_i.
inline std::vector<Eigen::Vector2d> guide_coordinates(const Vec3& p0, const std::vector<Vec3>& q,
                                                      const std::vector<double>& eta, const std::vector<double>& d,
                                                      RadiusRule rule, double alpha) {
    const std::size_t n = eta.size();
    if (q.size() != 2 * n || d.size() != n) {
        throw Error(ErrorKind::Domain, "guide coordinates need 2n points, n angles and n intervals");
    }
    std::vector<Eigen::Vector2d> xy(2 * n);
    for (std::size_t j = 0; j < 2 * n; ++j) {
        const std::size_t i = j % n;
        const double r = rule == RadiusRule::Interval ? d[i] * (j < n ? 0.25 : 0.5) : std::pow((q[j] - p0).norm(), alpha);
        xy[j] = r * Eigen::Vector2d(std::cos(eta[i]), std::sin(eta[i]));
    }
    return xy;
}

/// Bivariate polynomial p0 + sum c_m x^i y^j without constant term, monomials
/// ordered x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3.
struct GuidePolynomial {
    int degree = 2;
    Vec3 p0 = Vec3::Zero();
    std::vector<Vec3> c;
    int rank = 0;
    double residual = 0.0;

    static std::vector<double> monomials(int degree, double x, double y) {
        std::vector<double> m = {x, y, x * x, x * y, y * y};
        if (degree == 3) {
            m.insert(m.end(), {x * x * x, x * x * y, x * y * y, y * y * y});
        }
        return m;
    }

    Vec3 eval(double x, double y) const {
        const auto m = monomials(degree, x, y);
        Vec3 out = p0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            out += m[i] * c[i];
        }
        return out;
    }

    /// Position and derivatives through order two at the origin.
    PatchDerivatives at_origin() const {
        PatchDerivatives D;
        D.s = p0;
        D.su = c[0];
        D.sv = c[1];
        D.suu = 2.0 * c[2];
        D.suv = c[3];
        D.svv = 2.0 * c[4];
        return D;
    }
};

/// Cubic for valence 5 and up, quadratic below.
inline int guide_degree(int valence) {
    return valence >= 5 ? 3 : 2;
}

/// Least-squares fit through p0 (pinned at the origin) of the points q at
/// the coordinates xy. Rank-deficient systems get the minimum-norm solution;
/// collinear coordinates are rejected.
inline GuidePolynomial fit_guide_polynomial(const Vec3& p0, const std::vector<Vec3>& q,
                                            const std::vector<Eigen::Vector2d>& xy, int degree) {
    if (degree != 2 && degree != 3) {
        throw Error(ErrorKind::Domain, "guide polynomial degree must be 2 or 3");
    }
    if (q.size() != xy.size() || q.empty()) {
        throw Error(ErrorKind::Domain, "one coordinate pair per guide point is required");
    }
    const int rows = static_cast<int>(q.size());
    const int cols = degree == 3 ? 9 : 5;

    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : xy) {
        mean += p;
    }
    mean /= rows;
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : xy) {
        cov += (p - mean) * (p - mean).transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    if (!(es.eigenvalues()[0] > 1e-20 * std::max(es.eigenvalues()[1], 1e-300))) {
        throw Error(ErrorKind::Fit, "guide coordinates are collinear (" + std::to_string(rows) + " points)");
    }

    Eigen::MatrixXd A(rows, cols);
    Eigen::MatrixXd B(rows, 3);
    for (int r = 0; r < rows; ++r) {
        const auto m = GuidePolynomial::monomials(degree, xy[r][0], xy[r][1]);
        for (int k = 0; k < cols; ++k) {
            A(r, k) = m[k];
        }
        B.row(r) = (q[r] - p0).transpose();
    }
    Eigen::VectorXd scale(cols);
    for (int k = 0; k < cols; ++k) {
        const double s = A.col(k).norm();
        scale[k] = s > 0.0 ? s : 1.0;
        A.col(k) /= scale[k];
    }
    const Eigen::MatrixXd N = A.transpose() * A;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(N);
    cod.setThreshold(1e-10);
    const Eigen::MatrixXd X = cod.solve(A.transpose() * B);

    GuidePolynomial P;
    P.degree = degree;
    P.p0 = p0;
    P.rank = static_cast<int>(cod.rank());
    P.c.resize(cols);
    for (int k = 0; k < cols; ++k) {
        P.c[k] = X.row(k).transpose() / scale[k];
    }
    P.residual = (A * X - B).rowwise().norm().maxCoeff();
    return P;
}

/// First and second derivatives of P at the origin along (cos eta, sin eta).
inline std::pair<Vec3, Vec3> directional_derivs(const GuidePolynomial& P, double eta) {
    const double c = std::cos(eta);
    const double s = std::sin(eta);
    const PatchDerivatives D = P.at_origin();
    const Vec3 t1 = D.su * c + D.sv * s;
    const Vec3 t2 = D.suu * c * c + 2.0 * D.suv * c * s + D.svv * s * s;
    return {t1, t2};
}

/// Unit normal with principal curvatures k1 >= k2 and unit principal
/// directions. Curvatures are signed with respect to the normal.
struct CurvatureFrame {
    Vec3 normal = Vec3::UnitZ();
    double k1 = 0.0;
    double k2 = 0.0;
    Vec3 K1 = Vec3::UnitX();
    Vec3 K2 = Vec3::UnitY();

    /// Second fundamental form on tangent vectors.
    double second_form(const Vec3& a, const Vec3& b) const {
        return k1 * K1.dot(a) * K1.dot(b) + k2 * K2.dot(a) * K2.dot(b);
    }

    double mean_curvature() const {
        return 0.5 * (k1 + k2);
    }
};

inline CurvatureFrame curvature_frame(const PatchDerivatives& D) {
    const Vec3 nn = D.su.cross(D.sv);
    if (!(nn.norm() > 1e-14 * D.su.norm() * D.sv.norm()) || !nn.allFinite()) {
        throw Error(ErrorKind::DegenerateEstimate, "tangent vectors are parallel");
    }
    CurvatureFrame f;
    f.normal = nn.normalized();
    Eigen::Matrix2d I;
    Eigen::Matrix2d II;
    I << D.su.dot(D.su), D.su.dot(D.sv), D.su.dot(D.sv), D.sv.dot(D.sv);
    II << f.normal.dot(D.suu), f.normal.dot(D.suv), f.normal.dot(D.suv), f.normal.dot(D.svv);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(II, I);
    f.k2 = es.eigenvalues()[0];
    f.k1 = es.eigenvalues()[1];
    const Eigen::Vector2d x1 = es.eigenvectors().col(1);
    const Eigen::Vector2d x2 = es.eigenvectors().col(0);
    f.K1 = (x1[0] * D.su + x1[1] * D.sv).normalized();
    f.K2 = (x2[0] * D.su + x2[1] * D.sv).normalized();
    return f;
}

/// Curvature frame whose second fundamental form takes the values
/// normal . second[j] on tangent[j], fitted in the least-squares sense
/// (minimum norm when the directions do not determine it).
inline CurvatureFrame fit_curvature_frame(const Vec3& normal, const std::vector<Vec3>& tangent,
                                          const std::vector<Vec3>& second) {
    if (tangent.empty() || tangent.size() != second.size()) {
        throw Error(ErrorKind::Domain, "one second derivative per tangent is required");
    }
    CurvatureFrame f;
    f.normal = normal.normalized();
    Vec3 e1 = tangent[0] - tangent[0].dot(f.normal) * f.normal;
    if (!(e1.norm() > 0.0)) {
        throw Error(ErrorKind::DegenerateEstimate, "tangent is parallel to the normal");
    }
    e1.normalize();
    const Vec3 e2 = f.normal.cross(e1);
    const int m = static_cast<int>(tangent.size());
    Eigen::MatrixXd A(m, 3);
    Eigen::VectorXd b(m);
    for (int j = 0; j < m; ++j) {
        const double x = tangent[j].dot(e1);
        const double y = tangent[j].dot(e2);
        A.row(j) << x * x, 2.0 * x * y, y * y;
        b[j] = f.normal.dot(second[j]);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-10);
    const Eigen::Vector3d s = cod.solve(b);
    Eigen::Matrix2d II;
    II << s[0], s[1], s[1], s[2];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(II);
    f.k2 = es.eigenvalues()[0];
    f.k1 = es.eigenvalues()[1];
    f.K1 = es.eigenvectors()(0, 1) * e1 + es.eigenvectors()(1, 1) * e2;
    f.K2 = es.eigenvectors()(0, 0) * e1 + es.eigenvectors()(1, 0) * e2;
    return f;
}

/// Derivatives at one vertex, per outgoing edge in fan order, per unit local
/// parameter along the edge.
struct VertexDerivatives {
    std::vector<Vec3> tau1;
    std::vector<Vec3> tau2;
    std::vector<double> eta;
    std::optional<GuidePolynomial> guide;
    CurvatureFrame frame;
    int bessel_fallbacks = 0;

    const Vec3& normal() const {
        return frame.normal;
    }
};

struct GuideOptions {
    RadiusRule radius = RadiusRule::Interval;
    double alpha = 0.5;
};

/// G2-compatible derivatives at p0 from the guide polynomial. far[i] is the
/// derivative of the edge curve at nbrs[i], oriented from p0 toward nbrs[i].
inline VertexDerivatives g2_vertex_derivatives(const Vec3& p0, const std::vector<Vec3>& nbrs,
                                               const std::vector<double>& d, const std::vector<Vec3>& far,
                                               const GuideOptions& opt = {}) {
    detail::check_star(nbrs, d);
    const int n = static_cast<int>(nbrs.size());
    if (static_cast<int>(far.size()) != n) {
        throw Error(ErrorKind::Domain, "one far-end derivative per neighbour is required");
    }
    VertexDerivatives out;
    std::vector<Vec3> T(n);
    for (int i = 0; i < n; ++i) {
        T[i] = estimate_tangent_or_chord(p0, nbrs, d, i, &out.bessel_fallbacks);
    }
    std::vector<Vec3> q(2 * n);
    for (int i = 0; i < n; ++i) {
        std::tie(q[i], q[n + i]) = guide_points(p0, nbrs[i], d[i], T[i], far[i]);
    }
    out.eta = planar_angles(T);
    const auto xy = guide_coordinates(p0, q, out.eta, d, opt.radius, opt.alpha);
    out.guide = fit_guide_polynomial(p0, q, xy, guide_degree(n));
    out.tau1.resize(n);
    out.tau2.resize(n);
    for (int i = 0; i < n; ++i) {
        std::tie(out.tau1[i], out.tau2[i]) = directional_derivs(*out.guide, out.eta[i]);
    }
    out.frame = curvature_frame(out.guide->at_origin());
    return out;
}

/// G1-compatible tangents: the Bessel estimates projected on their
/// least-squares plane through p0. Second derivatives are zero.
inline VertexDerivatives g1_vertex_derivatives(const Vec3& p0, const std::vector<Vec3>& nbrs,
                                               const std::vector<double>& d) {
    detail::check_star(nbrs, d);
    const int n = static_cast<int>(nbrs.size());
    VertexDerivatives out;
    std::vector<Vec3> T(n);
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    Vec3 turn = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
        T[i] = estimate_tangent_or_chord(p0, nbrs, d, i, &out.bessel_fallbacks);
        C += T[i] * T[i].transpose();
    }
    for (int i = 0; i < n; ++i) {
        turn += T[i].cross(T[(i + 1) % n]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(C);
    Vec3 normal = es.eigenvectors().col(0);
    if (normal.dot(turn) < 0.0) {
        normal = -normal;
    }
    out.tau1.resize(n);
    out.tau2.assign(n, Vec3::Zero());
    for (int i = 0; i < n; ++i) {
        out.tau1[i] = T[i] - T[i].dot(normal) * normal;
    }
    out.eta = planar_angles(out.tau1);
    out.frame.normal = normal;
    out.frame.K1 = out.tau1[0].normalized();
    out.frame.K2 = normal.cross(out.frame.K1);
    return out;
}

/// Polynomial boundary segment on [0, d].
struct BoundaryCurve {
    VecPoly gamma;
    double d = 1.0;
    PatchMode mode = PatchMode::G1;
};

/// Hermite segment between p0 and p1: cubic from the first derivatives (G1)
/// or quintic from first and second derivatives (G2). Derivatives are with
/// respect to x in [0, d], oriented from p0 to p1.
inline BoundaryCurve build_missing_boundary_curve(const Vec3& p0, const Vec3& t0, const Vec3& a0, const Vec3& p1,
                                                  const Vec3& t1, const Vec3& a1, double d, PatchMode mode) {
    BoundaryCurve c;
    c.d = d;
    c.mode = mode;
    c.gamma = mode == PatchMode::G2 ? VecPoly::hermite5(d, p0, t0, a0, p1, t1, a1) : VecPoly::hermite3(d, p0, t0, p1, t1);
    return c;
}

/// Segment s of a section curve through prev, p0, p1, next with intervals
/// (a, b, c), as a polynomial in the local variable on [0, b].
inline VecPoly section_segment_poly(const SplineFamily& family, const Vec3& prev, const Vec3& p0, const Vec3& p1,
                                    const Vec3& next, double a, double b, double c) {
    LocalParamVector<double> lp;
    lp.d = {a, b, c};
    const auto psi = fundamental_pieces<double>(family, lp);
    const std::array<Vec3, 4> pts = {prev, p0, p1, next};
    VecPoly out;
    out.c.assign(psi[0].c.size(), Vec3::Zero());
    for (int i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < out.c.size(); ++k) {
            out.c[k] += psi[i].c[k] * pts[i];
        }
    }
    return out;
}

/// Transversal vector field r and, for G2, the field w shared by the two
/// patches along one edge, in the edge's variable x in [0, d].
struct EdgeFrame {
    double d = 1.0;
    VecPoly r;
    VecPoly w; // empty until curvature is attached

    EdgeFrame reversed() const {
        EdgeFrame f;
        f.d = d;
        f.r = r.reversed(d);
        if (!w.c.empty()) {
            f.w = w.reversed(d);
        }
        return f;
    }
};

/// r through gamma'(0) x n0 and gamma'(d) x n1, plus gamma'(d/2) x nm at the
/// midpoint when r_degree is 2.
inline EdgeFrame make_edge_frame(const VecPoly& gamma, double d, const Vec3& n0, const Vec3& n1,
                                 const std::optional<Vec3>& nm, int r_degree) {
    if (r_degree != 1 && r_degree != 2) {
        throw Error(ErrorKind::Domain, "r degree must be 1 or 2");
    }
    if (r_degree == 2 && !nm) {
        throw Error(ErrorKind::Contract, "quadratic r needs the mid-edge normal");
    }
    EdgeFrame f;
    f.d = d;
    const Vec3 r0 = gamma(0.0, 1).cross(n0);
    const Vec3 r1 = gamma(d, 1).cross(n1);
    if (r_degree == 1) {
        f.r = VecPoly::linear(r0, r1, d);
    }
    else {
        const Vec3 rm = gamma(0.5 * d, 1).cross(*nm);
        f.r = VecPoly{{r0, (4.0 * rm - 3.0 * r0 - r1) / d, (2.0 * r0 - 4.0 * rm + 2.0 * r1) / (d * d)}};
    }
    return f;
}

/// Sets w from the corner curvatures, w = II(r, r) n at each end, and adds a
/// correction to r so that n . r' = II(gamma', r) at the ends. That identity
/// holds for any field tangent to a surface and makes the second-order
/// corner conditions solvable with the shared r and w.
inline void attach_curvature(EdgeFrame& f, const VecPoly& gamma, const CurvatureFrame& c0, const CurvatureFrame& c1) {
    const double d = f.d;
    const Vec3 r0 = f.r(0.0);
    const Vec3 r1 = f.r(d);
    f.w = VecPoly::linear(c0.second_form(r0, r0) * c0.normal, c1.second_form(r1, r1) * c1.normal, d);
    const double beta0 = c0.second_form(gamma(0.0, 1), r0) - c0.normal.dot(f.r(0.0, 1));
    const double beta1 = c1.second_form(gamma(d, 1), r1) - c1.normal.dot(f.r(d, 1));
    // Bumps with unit slope at one end, zero slope at the other, vanishing at
    // both ends (and at d/2 for quadratic r).
    std::vector<double> phi0;
    std::vector<double> phi1;
    if (f.r.degree() <= 1) {
        phi0 = {0.0, 1.0, -2.0 / d, 1.0 / (d * d)};
        phi1 = {0.0, 0.0, -1.0 / d, 1.0 / (d * d)};
    }
    else {
        // x (d - x)^2 (d - 2x) / d^3 and x^2 (x - d)(2x - d) / d^3.
        const double d3 = d * d * d;
        phi0 = {0.0, 1.0, -4.0 / d, 5.0 / (d * d), -2.0 / d3};
        phi1 = {0.0, 0.0, 1.0 / d, -3.0 / (d * d), 2.0 / d3};
    }
    f.r = f.r + VecPoly::constant(beta0 * c0.normal).times(phi0) + VecPoly::constant(beta1 * c1.normal).times(phi1);
}

/// Cross-boundary fields of one patch side in its variable x in [0, d]:
/// chi = a gamma' + b r, xi = a^2 gamma'' + s gamma' + t r + 2ab r' + b^2 w
/// with a, b, s, t linear (endpoint values stored).
struct CrossField {
    double d = 1.0;
    std::array<double, 2> a{};
    std::array<double, 2> b{};
    std::array<double, 2> s{};
    std::array<double, 2> t{};
    VecPoly chi;
    VecPoly xi;
    // Largest normal component absorbed into w at an end to match the
    // second-order targets exactly; zero for consistent corner data.
    double w_adjust = 0.0;

    bool has_xi() const {
        return !xi.c.empty();
    }
};

namespace detail {

inline std::vector<double> linear_coeffs(const std::array<double, 2>& v, double d) {
    return {v[0], (v[1] - v[0]) / d};
}

inline std::vector<double> poly_product(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            out[i + j] += p[i] * q[j];
        }
    }
    return out;
}

} // namespace detail

/// chi from linear a, b given by their end values.
inline VecPoly assemble_chi(const VecPoly& gamma, const VecPoly& r, double d, const std::array<double, 2>& a,
                            const std::array<double, 2>& b) {
    return gamma.derivative().times(detail::linear_coeffs(a, d)) + r.times(detail::linear_coeffs(b, d));
}

inline VecPoly assemble_xi(const VecPoly& gamma, const VecPoly& r, const VecPoly& w, double d,
                           const std::array<double, 2>& a, const std::array<double, 2>& b,
                           const std::array<double, 2>& s, const std::array<double, 2>& t) {
    const auto A = detail::linear_coeffs(a, d);
    const auto B = detail::linear_coeffs(b, d);
    const VecPoly g1 = gamma.derivative();
    VecPoly out = g1.derivative().times(detail::poly_product(A, A)) + g1.times(detail::linear_coeffs(s, d))
                  + r.times(detail::linear_coeffs(t, d)) + r.derivative().times(detail::poly_product(A, B)).times({2.0});
    if (!w.c.empty()) {
        out = out + w.times(detail::poly_product(B, B));
    }
    return out;
}

/// chi for one side: a and b at each end solve target = a gamma' + b r in
/// the least-squares sense.
inline CrossField build_cross_field_chi(const VecPoly& gamma, double d, const EdgeFrame& frame, const Vec3& target0,
                                        const Vec3& target1) {
    CrossField cf;
    cf.d = d;
    const Vec3 targets[2] = {target0, target1};
    for (int e = 0; e < 2; ++e) {
        const double x = e == 0 ? 0.0 : d;
        const Vec3 g = gamma(x, 1);
        const Vec3 r = frame.r(x);
        if (!(g.cross(r).norm() > 1e-12 * g.norm() * r.norm()) || !(g.norm() > 0.0) || !(r.norm() > 0.0)) {
            throw Error(ErrorKind::Construction, "boundary tangent and transversal field are parallel at corner "
                                                     + std::to_string(e));
        }
        Eigen::Matrix<double, 3, 2> M;
        M.col(0) = g;
        M.col(1) = r;
        const Eigen::Vector2d ab = (M.transpose() * M).ldlt().solve(M.transpose() * targets[e]);
        cf.a[e] = ab[0];
        cf.b[e] = ab[1];
    }
    cf.chi = assemble_chi(gamma, frame.r, d, cf.a, cf.b);
    return cf;
}

/// Convenience form building r from the corner normals first.
inline CrossField build_cross_field_chi(const VecPoly& gamma, double d, const Vec3& n0, const Vec3& n1,
                                        const std::optional<Vec3>& nm, int r_degree, const Vec3& target0,
                                        const Vec3& target1) {
    return build_cross_field_chi(gamma, d, make_edge_frame(gamma, d, n0, n1, nm, r_degree), target0, target1);
}

/// Completes cf with xi: s and t at each end solve the tangential part of
/// the second-order targets; any normal remainder is absorbed into w there.
inline void build_cross_field_xi(CrossField& cf, const VecPoly& gamma, const EdgeFrame& frame, const Vec3& target0,
                                 const Vec3& target1) {
    const double d = cf.d;
    const Vec3 targets[2] = {target0, target1};
    std::array<Vec3, 2> wfix{Vec3::Zero(), Vec3::Zero()};
    cf.w_adjust = 0.0;
    for (int e = 0; e < 2; ++e) {
        const double x = e == 0 ? 0.0 : d;
        const double A = cf.a[e];
        const double B = cf.b[e];
        const Vec3 g1 = gamma(x, 1);
        const Vec3 r = frame.r(x);
        const Vec3 w = frame.w.c.empty() ? Vec3::Zero() : frame.w(x);
        const Vec3 base = A * A * gamma(x, 2) + 2.0 * A * B * frame.r(x, 1) + B * B * w;
        const Vec3 n = g1.cross(r).normalized();
        Eigen::Matrix3d M;
        M.col(0) = g1;
        M.col(1) = r;
        M.col(2) = n;
        Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
        if (!lu.isInvertible()) {
            throw Error(ErrorKind::Construction, "singular second-order system at corner " + std::to_string(e));
        }
        const Vec3 stw = lu.solve(targets[e] - base);
        cf.s[e] = stw[0];
        cf.t[e] = stw[1];
        if (std::abs(stw[2]) > 0.0) {
            if (!(B * B > 1e-14)) {
                throw Error(ErrorKind::Construction, "cross field has no transversal part at corner "
                                                         + std::to_string(e));
            }
            wfix[e] = stw[2] / (B * B) * n;
            cf.w_adjust = std::max(cf.w_adjust, std::abs(stw[2]));
        }
    }
    VecPoly w = frame.w.c.empty() ? VecPoly::constant(Vec3::Zero()) : frame.w;
    w = w + VecPoly::linear(wfix[0], wfix[1], d);
    cf.xi = assemble_xi(gamma, frame.r, w, d, cf.a, cf.b, cf.s, cf.t);
}

} // namespace augsurf
