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
#include <augsurf/spline_core.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace augsurf {

/// Normal of the least-squares plane through the points (z for planar
/// data in the xy plane).
inline Eigen::Vector3d best_fit_normal(const std::vector<Eigen::Vector3d>& pts) {
    if (pts.empty()) {
        return Eigen::Vector3d::UnitZ();
    }
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& p : pts) {
        mean += p;
    }
    mean /= static_cast<double>(pts.size());
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    for (const auto& p : pts) {
        C += (p - mean) * (p - mean).transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(C);
    Eigen::Vector3d n = es.eigenvectors().col(0);
    // Fix the sign so that the polygon winds counter-clockwise about n.
    Eigen::Vector3d area = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        area += (pts[i] - mean).cross(pts[(i + 1) % pts.size()] - mean);
    }
    if (area.dot(n) < 0.0 || (area.dot(n) == 0.0 && n.sum() < 0.0)) {
        n = -n;
    }
    return n;
}

struct CurveSample {
    double x = 0.0;
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Vector3d d1 = Eigen::Vector3d::Zero();
    double kappa = 0.0; // signed with respect to the plane normal
};

/// Samples evenly spaced in the curve parameter over its evaluable range
/// (the endpoint of a closed curve is not repeated).
inline std::vector<CurveSample> sample_curve(const PolylineCurve<Eigen::Vector3d>& c, int samples,
                                             const Eigen::Vector3d& normal) {
    if (samples < 1) {
        throw Error(ErrorKind::Domain, "sample count must be positive");
    }
    const double a = c.domain_begin();
    const double b = c.domain_end();
    std::vector<CurveSample> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double t = c.closed ? static_cast<double>(i) / samples
                                  : (samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1));
        CurveSample s;
        s.x = a + (b - a) * t;
        s.p = eval_curve(c, s.x, 0);
        s.d1 = eval_curve(c, s.x, 1);
        const Eigen::Vector3d d2 = eval_curve(c, s.x, 2);
        const double speed = s.d1.norm();
        s.kappa = speed > 0.0 ? s.d1.cross(d2).dot(normal) / (speed * speed * speed) : 0.0;
        out.push_back(s);
    }
    return out;
}

/// Sign changes of a sampled function, ignoring values below rel_tol times
/// the largest magnitude. Closed sequences also compare last and first.
inline int count_sign_changes(const std::vector<double>& k, bool closed, double rel_tol = 1e-6) {
    double big = 0.0;
    for (double x : k) {
        big = std::max(big, std::abs(x));
    }
    const double tol = rel_tol * big;
    std::vector<int> signs;
    for (double x : k) {
        if (std::abs(x) > tol) {
            signs.push_back(x > 0.0 ? 1 : -1);
        }
    }
    int changes = 0;
    for (std::size_t i = 1; i < signs.size(); ++i) {
        changes += signs[i] != signs[i - 1] ? 1 : 0;
    }
    if (closed && signs.size() > 1 && signs.back() != signs.front()) {
        ++changes;
    }
    return changes;
}

} // namespace augsurf
