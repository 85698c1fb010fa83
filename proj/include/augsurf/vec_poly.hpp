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

#include <algorithm>
#include <vector>

namespace augsurf {

/// Polynomial curve sum_i c_i x^i with vector coefficients.
struct VecPoly {
    std::vector<Eigen::Vector3d> c;

    int degree() const {
        return static_cast<int>(c.size()) - 1;
    }

    /// r-th derivative at x.
    Eigen::Vector3d eval(double x, int r = 0) const {
        Eigen::Vector3d acc = Eigen::Vector3d::Zero();
        for (int i = degree(); i >= r; --i) {
            double f = 1.0;
            for (int j = i - r + 1; j <= i; ++j) {
                f *= j;
            }
            acc = acc * x + c[i] * f;
        }
        return acc;
    }

    Eigen::Vector3d operator()(double x, int r = 0) const {
        return eval(x, r);
    }

    VecPoly derivative() const {
        VecPoly out;
        for (int i = 1; i <= degree(); ++i) {
            out.c.push_back(c[i] * static_cast<double>(i));
        }
        if (out.c.empty()) {
            out.c.push_back(Eigen::Vector3d::Zero());
        }
        return out;
    }

    /// q(x) = p(len - x).
    VecPoly reversed(double len) const {
        // Expand p(len - x) by Horner on polynomials.
        VecPoly out;
        out.c.assign(c.size(), Eigen::Vector3d::Zero());
        for (int i = degree(); i >= 0; --i) {
            // out = out * (len - x) + c_i
            std::vector<Eigen::Vector3d> next(c.size(), Eigen::Vector3d::Zero());
            for (int k = 0; k < static_cast<int>(c.size()); ++k) {
                next[k] += len * out.c[k];
                if (k + 1 < static_cast<int>(c.size())) {
                    next[k + 1] -= out.c[k];
                }
            }
            next[0] += c[i];
            out.c = std::move(next);
        }
        return out;
    }

    /// q(x) = p(s x).
    VecPoly scaled_argument(double s) const {
        VecPoly out = *this;
        double f = 1.0;
        for (auto& v : out.c) {
            v *= f;
            f *= s;
        }
        return out;
    }

    friend VecPoly operator+(const VecPoly& a, const VecPoly& b) {
        VecPoly out;
        out.c.assign(std::max(a.c.size(), b.c.size()), Eigen::Vector3d::Zero());
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            out.c[i] += a.c[i];
        }
        for (std::size_t i = 0; i < b.c.size(); ++i) {
            out.c[i] += b.c[i];
        }
        return out;
    }

    friend VecPoly operator*(double s, VecPoly a) {
        for (auto& v : a.c) {
            v *= s;
        }
        return a;
    }

    /// Product with a scalar polynomial given by its power coefficients.
    VecPoly times(const std::vector<double>& q) const {
        VecPoly out;
        if (c.empty() || q.empty()) {
            return out;
        }
        out.c.assign(c.size() + q.size() - 1, Eigen::Vector3d::Zero());
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = 0; j < q.size(); ++j) {
                out.c[i + j] += q[j] * c[i];
            }
        }
        return out;
    }

    static VecPoly constant(const Eigen::Vector3d& v) {
        return VecPoly{{v}};
    }

    /// Straight line from a (x = 0) to b (x = len).
    static VecPoly linear(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double len) {
        return VecPoly{{a, (b - a) / len}};
    }

    /// Cubic on [0, len] with values and first derivatives at both ends.
    static VecPoly hermite3(double len, const Eigen::Vector3d& p0, const Eigen::Vector3d& t0, const Eigen::Vector3d& p1,
                            const Eigen::Vector3d& t1) {
        static const double H[4][4] = {{1, 0, -3, 2}, {0, 0, 3, -2}, {0, 1, -2, 1}, {0, 0, -1, 1}};
        const Eigen::Vector3d w[4] = {p0, p1, len * t0, len * t1};
        return from_basis<4>(H, w, len);
    }

    /// Quintic on [0, len] with values, first and second derivatives at both ends.
    static VecPoly hermite5(double len, const Eigen::Vector3d& p0, const Eigen::Vector3d& t0, const Eigen::Vector3d& a0,
                            const Eigen::Vector3d& p1, const Eigen::Vector3d& t1, const Eigen::Vector3d& a1) {
        static const double H[6][6] = {{1, 0, 0, -10, 15, -6},   {0, 0, 0, 10, -15, 6},   {0, 1, 0, -6, 8, -3},
                                       {0, 0, 0, -4, 7, -3},     {0, 0, 0.5, -1.5, 1.5, -0.5}, {0, 0, 0, 0.5, -1, 0.5}};
        const Eigen::Vector3d w[6] = {p0, p1, len * t0, len * t1, len * len * a0, len * len * a1};
        return from_basis<6>(H, w, len);
    }

private:
    template <int N>
    static VecPoly from_basis(const double (&H)[N][N], const Eigen::Vector3d (&w)[N], double len) {
        if (!(len > 0.0)) {
            throw Error(ErrorKind::Domain, "Hermite interval must be positive");
        }
        VecPoly out;
        out.c.assign(N, Eigen::Vector3d::Zero());
        double f = 1.0;
        for (int k = 0; k < N; ++k) {
            for (int b = 0; b < N; ++b) {
                out.c[k] += H[b][k] * w[b];
            }
            out.c[k] /= f;
            f *= len;
        }
        return out;
    }
};

} // namespace augsurf
