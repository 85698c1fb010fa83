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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace augsurf {

enum class FamilyId {
    D3C1P2S4,
    D5C2P2S4,
};

/// A class D^g C^k P^m S^w of local interpolating fundamental functions.
struct SplineFamily {
    FamilyId id = FamilyId::D5C2P2S4;
    int g = 5;
    int k = 2;
    int m = 2;
    int w = 4;

    static constexpr SplineFamily d3c1p2s4() {
        return {FamilyId::D3C1P2S4, 3, 1, 2, 4};
    }

    static constexpr SplineFamily d5c2p2s4() {
        return {FamilyId::D5C2P2S4, 5, 2, 2, 4};
    }

    std::string_view name() const {
        return id == FamilyId::D3C1P2S4 ? "d3c1p2s4" : "d5c2p2s4";
    }

    friend bool operator==(const SplineFamily&, const SplineFamily&) = default;
};

inline SplineFamily family_from_name(std::string_view name) {
    if (name == "d3c1p2s4") {
        return SplineFamily::d3c1p2s4();
    }
    if (name == "d5c2p2s4") {
        return SplineFamily::d5c2p2s4();
    }
    throw Error(ErrorKind::Domain, "unknown spline family '" + std::string(name) + "'");
}

/// Interval lengths (d_{s-1}, d_s, d_{s+1}) around the segment being evaluated.
template <class T = double>
struct LocalParamVector {
    std::array<T, 3> d{};

    const T& prev() const {
        return d[0];
    }
    const T& center() const {
        return d[1];
    }
    const T& next() const {
        return d[2];
    }
};

/// Polynomial of degree <= N in power form, coefficients of scalar type T.
template <class T, int N = 5>
struct Poly {
    std::array<T, N + 1> c{};

    Poly() {
        c.fill(T(0.0));
    }

    static Poly constant(const T& v) {
        Poly p;
        p.c[0] = v;
        return p;
    }

    static Poly x() {
        Poly p;
        p.c[1] = T(1.0);
        return p;
    }

    /// r-th derivative at x, r >= 0.
    template <class X>
    X eval(const X& x, int r = 0) const {
        if (r > N) {
            return X(0.0);
        }
        X acc(0.0);
        for (int i = N; i >= r; --i) {
            double f = 1.0;
            for (int j = i - r + 1; j <= i; ++j) {
                f *= j;
            }
            acc = acc * x + c[i] * f;
        }
        return acc;
    }

    friend Poly operator+(Poly a, const Poly& b) {
        for (int i = 0; i <= N; ++i) {
            a.c[i] = a.c[i] + b.c[i];
        }
        return a;
    }
    friend Poly operator-(Poly a, const Poly& b) {
        for (int i = 0; i <= N; ++i) {
            a.c[i] = a.c[i] - b.c[i];
        }
        return a;
    }
    friend Poly operator-(const Poly& a) {
        Poly r;
        for (int i = 0; i <= N; ++i) {
            r.c[i] = -a.c[i];
        }
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (int i = 0; i <= N; ++i) {
            for (int j = 0; i + j <= N; ++j) {
                r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
            }
        }
        return r;
    }
    friend Poly operator+(Poly a, const T& s) {
        a.c[0] = a.c[0] + s;
        return a;
    }
    friend Poly operator+(const T& s, Poly a) {
        return a + s;
    }
    friend Poly operator-(Poly a, const T& s) {
        a.c[0] = a.c[0] - s;
        return a;
    }
    friend Poly operator-(const T& s, const Poly& a) {
        return -a + s;
    }
    friend Poly operator*(Poly a, const T& s) {
        for (auto& v : a.c) {
            v = v * s;
        }
        return a;
    }
    friend Poly operator*(const T& s, Poly a) {
        return a * s;
    }
    friend Poly operator/(Poly a, const T& s) {
        for (auto& v : a.c) {
            v = v / s;
        }
        return a;
    }
};

/// The four polynomial pieces psi_{s-1}, psi_s, psi_{s+1}, psi_{s+2} on the
/// central interval [0, d_s], in the local variable x.
template <class T>
std::array<Poly<T>, 4> fundamental_pieces(const SplineFamily& family, const LocalParamVector<T>& lp) {
    using P = Poly<T>;
    const T& a = lp.d[0];
    const T& b = lp.d[1];
    const T& c = lp.d[2];
    const P X = P::x();
    const P Xb = X - b;
    std::array<P, 4> psi;
    if (family.id == FamilyId::D3C1P2S4) {
        psi[0] = -(X * Xb * Xb) / (a * b * (a + b));
        psi[1] = Xb * ((X * X) / (b + c) + (X * Xb) / a - b) / (b * b);
        psi[2] = X * ((b * (a + X * T(2.0)) - X * X) / (a + b) - (X * Xb) / c) / (b * b);
        psi[3] = (X * X * Xb) / (b * c * (b + c));
    }
    else {
        const T b2 = b * b;
        const T b3 = b2 * b;
        const T b4 = b2 * b2;
        const P X2 = X * X;
        const P X3 = X2 * X;
        const P X4 = X2 * X2;
        psi[0] = (X * Xb * Xb * Xb * (X * T(2.0) + b)) / (a * b3 * (a + b));
        psi[1] = (b - X)
                 * (a * (X3 * (T(-3.0) * b) + b4 + b3 * c + X4 * T(2.0))
                    + X * (b + c) * (X * T(2.0) + b) * Xb * Xb)
                 / (a * b4 * (b + c));
        psi[2] = X
                 * ((X2 * (X * T(2.0) - b * T(3.0)) * Xb) / c
                    + (X3 * (T(-5.0) * b) + X2 * (T(3.0) * b2) + b3 * (a + X) + X4 * T(2.0)) / (a + b))
                 / b4;
        psi[3] = -(X3 * (X * T(2.0) - b * T(3.0)) * Xb) / (b3 * c * (b + c));
    }
    return psi;
}

namespace detail {

inline void check_param_vector(const LocalParamVector<double>& lp) {
    for (double v : lp.d) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorKind::Domain, "local parameter intervals must be positive and finite");
        }
    }
}

inline void check_offset(int offset) {
    if (offset < -1 || offset > 2) {
        throw Error(ErrorKind::Domain, "offset " + std::to_string(offset) + " outside the support [-1, 2]");
    }
}

inline void check_local_x(double x, double b) {
    const double slack = 1e-9 * b;
    if (!(x >= -slack && x <= b + slack)) {
        throw Error(ErrorKind::Domain, "local parameter " + std::to_string(x) + " outside [0, " + std::to_string(b) + "]");
    }
}

} // namespace detail

/// r-th derivative with respect to x of psi_{s+offset}(x; d), offset in
/// [-1, 2]. Orders above the degree give 0.
inline double eval_fundamental_deriv(const SplineFamily& family, int offset, double x,
                                     const LocalParamVector<double>& lp, int r) {
    detail::check_offset(offset);
    detail::check_param_vector(lp);
    detail::check_local_x(x, lp.center());
    if (r < 0) {
        throw Error(ErrorKind::Domain, "negative derivative order");
    }
    if (r > family.g) {
        return 0.0;
    }
    return fundamental_pieces(family, lp)[offset + 1].eval(x, r);
}

inline double eval_fundamental(const SplineFamily& family, int offset, double x, const LocalParamVector<double>& lp) {
    return eval_fundamental_deriv(family, offset, x, lp, 0);
}

/// All four fundamental functions (or their r-th derivatives) at once.
template <class T>
std::array<T, 4> fundamental_values(const SplineFamily& family, const T& x, const LocalParamVector<T>& lp, int r = 0) {
    const auto psi = fundamental_pieces(family, lp);
    std::array<T, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i] = psi[i].eval(x, r);
    }
    return out;
}

/// Strictly increasing parameter values. Closed curves carry one extra knot
/// closing the wrap-around interval.
struct KnotSequence {
    std::vector<double> x;
    bool periodic = false;

    std::size_t size() const {
        return x.size();
    }

    std::size_t interval_count() const {
        return x.empty() ? 0 : x.size() - 1;
    }

    double interval(std::size_t i) const {
        return x[i + 1] - x[i];
    }

    double period() const {
        return x.back() - x.front();
    }
};

inline KnotSequence knots_from_intervals(const std::vector<double>& intervals, bool closed, double x0 = 0.0) {
    KnotSequence k;
    k.periodic = closed;
    k.x.reserve(intervals.size() + 1);
    k.x.push_back(x0);
    for (double d : intervals) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error(ErrorKind::DegenerateEdge, "non-positive parameter interval");
        }
        k.x.push_back(k.x.back() + d);
    }
    return k;
}

/// x_0 = 0, x_{i+1} = x_i + |p_{i+1} - p_i|^alpha.
template <class Point>
KnotSequence make_knots(const std::vector<Point>& points, double alpha, bool closed) {
    if (points.size() < 2) {
        throw Error(ErrorKind::Domain, "at least two points are required");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorKind::Domain, "alpha must lie in [0, 1]");
    }
    const std::size_t n = points.size();
    const std::size_t count = closed ? n : n - 1;
    std::vector<double> d(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double len = (points[(i + 1) % n] - points[i]).norm();
        if (!(len > 0.0)) {
            throw Error(ErrorKind::DegenerateEdge,
                        "coincident consecutive points " + std::to_string(i) + " and " + std::to_string((i + 1) % n));
        }
        d[i] = std::pow(len, alpha);
    }
    return knots_from_intervals(d, closed);
}

/// Interpolating curve through a polyline.
template <class Point>
struct PolylineCurve {
    std::vector<Point> points;
    KnotSequence knots;
    SplineFamily family;
    bool closed = false;

    std::size_t segment_count() const {
        return closed ? points.size() : points.size() - 1;
    }

    /// Parameter range where a full support window exists.
    double domain_begin() const {
        return closed ? knots.x.front() : knots.x[1];
    }

    double domain_end() const {
        return closed ? knots.x.back() : knots.x[points.size() - 2];
    }

    /// First and last segment index that can be evaluated.
    std::size_t first_segment() const {
        return closed ? 0 : 1;
    }

    std::size_t last_segment() const {
        return closed ? points.size() - 1 : points.size() - 3;
    }
};

template <class Point>
PolylineCurve<Point> make_curve_with_knots(std::vector<Point> points, KnotSequence knots, const SplineFamily& family) {
    PolylineCurve<Point> c;
    const bool closed = knots.periodic;
    const std::size_t n = points.size();
    if (closed ? n < 3 : n < 4) {
        throw Error(ErrorKind::Domain, closed ? "closed curves need at least 3 points" : "open curves need at least 4 points");
    }
    if (knots.size() != (closed ? n + 1 : n)) {
        throw Error(ErrorKind::Domain, "knot count does not match point count");
    }
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots.x[i + 1] > knots.x[i])) {
            throw Error(ErrorKind::DegenerateEdge, "knots must be strictly increasing");
        }
    }
    c.points = std::move(points);
    c.knots = std::move(knots);
    c.family = family;
    c.closed = closed;
    return c;
}

template <class Point>
PolylineCurve<Point> make_curve(std::vector<Point> points, const SplineFamily& family, double alpha, bool closed) {
    KnotSequence k = make_knots(points, alpha, closed);
    return make_curve_with_knots(std::move(points), std::move(k), family);
}

/// Evaluates segment s at local parameter x in [0, d_s]; r is the derivative order.
template <class Point>
Point eval_segment(const PolylineCurve<Point>& curve, std::size_t s, double x, int r = 0) {
    const std::size_t n = curve.points.size();
    if (s < curve.first_segment() || s > curve.last_segment()) {
        throw Error(ErrorKind::Domain, "segment " + std::to_string(s) + " has no full support window");
    }
    const std::size_t m = curve.knots.interval_count();
    LocalParamVector<double> lp;
    lp.d[0] = curve.knots.interval((s + m - 1) % m);
    lp.d[1] = curve.knots.interval(s);
    lp.d[2] = curve.knots.interval((s + 1) % m);
    detail::check_local_x(x, lp.d[1]);
    x = std::clamp(x, 0.0, lp.d[1]);
    if (r == 0 && (x == 0.0 || x == lp.d[1])) {
        // Delta property, exact at the knots.
        return curve.points[(s + (x == 0.0 ? 0 : 1)) % n];
    }
    const auto w = fundamental_values(curve.family, x, lp, r);
    Point acc = curve.points[s] * 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += curve.points[(s + n + static_cast<std::size_t>(i) - 1) % n] * w[i];
    }
    return acc;
}

/// Locates the segment containing x. Returns the segment index and the
/// local parameter within it.
template <class Point>
std::pair<std::size_t, double> locate_segment(const PolylineCurve<Point>& curve, double x) {
    const auto& k = curve.knots.x;
    if (curve.closed) {
        const double period = curve.knots.period();
        double t = std::fmod(x - k.front(), period);
        if (t < 0.0) {
            t += period;
        }
        t += k.front();
        std::size_t s = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), t) - k.begin());
        s = std::clamp<std::size_t>(s, 1, k.size() - 1) - 1;
        return {s, std::clamp(t - k[s], 0.0, curve.knots.interval(s))};
    }
    const double lo = curve.domain_begin();
    const double hi = curve.domain_end();
    const double slack = 1e-12 * std::max(1.0, std::abs(hi - k.front()));
    if (!(x >= lo - slack && x <= hi + slack)) {
        throw Error(ErrorKind::Domain, "parameter " + std::to_string(x) + " outside the evaluable range of an open curve");
    }
    std::size_t s = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), x) - k.begin());
    s = std::clamp<std::size_t>(s == 0 ? 0 : s - 1, curve.first_segment(), curve.last_segment());
    return {s, std::clamp(x - k[s], 0.0, curve.knots.interval(s))};
}

/// Position (r = 0) or r-th derivative of the curve at global parameter x.
template <class Point>
Point eval_curve(const PolylineCurve<Point>& curve, double x, int r = 0) {
    if (r < 0) {
        throw Error(ErrorKind::Domain, "negative derivative order");
    }
    const auto [s, local] = locate_segment(curve, x);
    return eval_segment(curve, s, local, r);
}

/// First and second derivative at the middle knot of three consecutive
/// points (p_prev, p, p_next) with intervals a = |p_prev p|, b = |p p_next|.
/// Both families reproduce quadratics and, at a knot, only these three points
/// carry weight up to order k, so this is the derivative of the parabola
/// through the three points.
template <class Point>
std::pair<Point, Point> knot_derivatives(const Point& prev, const Point& p, const Point& next, double a, double b) {
    const Point f = (next - p) / b;
    const Point g = (p - prev) / a;
    const Point first = (a * f + b * g) / (a + b);
    const Point second = 2.0 * (f - g) / (a + b);
    return {first, second};
}

} // namespace augsurf
