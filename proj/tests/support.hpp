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

// Shared helpers for the unit tests: seeded generators and small oracles.

#pragma once

#include <augsurf/spline_core.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testsupport {

class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : engine_(seed) {
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    int integer(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }

    Eigen::Vector3d vec3(double lo = -1.0, double hi = 1.0) {
        return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
    }

    augsurf::LocalParamVector<double> param_vector(double lo = 0.2, double hi = 3.0) {
        return {{uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}};
    }

    std::vector<double> intervals(std::size_t n, double lo = 0.2, double hi = 3.0) {
        std::vector<double> d(n);
        for (auto& x : d) {
            x = uniform(lo, hi);
        }
        return d;
    }

private:
    std::mt19937_64 engine_;
};

inline double rel_err(double a, double b, double floor = 1.0) {
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

template <class V>
double rel_err_vec(const V& a, const V& b, double floor = 1.0) {
    return (a - b).norm() / std::max(b.norm(), floor);
}

} // namespace testsupport
