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

#include <array>
#include <cmath>

namespace augsurf {

/// Truncated Taylor series in one variable: c[k] holds f^(k)(t0) / k!.
/// Used to carry exact derivatives along patch boundaries.
template <int N>
struct Jet {
    static constexpr int order = N;

    std::array<double, N + 1> c{};

    Jet() = default;

    Jet(double value) { // NOLINT(google-explicit-constructor)
        c[0] = value;
    }

    static Jet variable(double t0) {
        Jet j(t0);
        if constexpr (N >= 1) {
            j.c[1] = 1.0;
        }
        return j;
    }

    double value() const {
        return c[0];
    }

    /// k-th derivative at the expansion point.
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) {
            f *= i;
        }
        return c[k] * f;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i <= N; ++i) {
            c[i] += o.c[i];
        }
        return *this;
    }

    Jet& operator-=(const Jet& o) {
        for (int i = 0; i <= N; ++i) {
            c[i] -= o.c[i];
        }
        return *this;
    }

    Jet& operator*=(const Jet& o) {
        std::array<double, N + 1> r{};
        for (int i = 0; i <= N; ++i) {
            for (int j = 0; i + j <= N; ++j) {
                r[i + j] += c[i] * o.c[j];
            }
        }
        c = r;
        return *this;
    }

    Jet& operator/=(const Jet& o) {
        std::array<double, N + 1> r{};
        for (int i = 0; i <= N; ++i) {
            double s = c[i];
            for (int j = 1; j <= i; ++j) {
                s -= o.c[j] * r[i - j];
            }
            r[i] = s / o.c[0];
        }
        c = r;
        return *this;
    }

    Jet operator-() const {
        Jet r;
        for (int i = 0; i <= N; ++i) {
            r.c[i] = -c[i];
        }
        return r;
    }

    friend Jet operator+(Jet a, const Jet& b) {
        return a += b;
    }
    friend Jet operator-(Jet a, const Jet& b) {
        return a -= b;
    }
    friend Jet operator*(Jet a, const Jet& b) {
        return a *= b;
    }
    friend Jet operator/(Jet a, const Jet& b) {
        return a /= b;
    }
    friend Jet operator+(Jet a, double b) {
        a.c[0] += b;
        return a;
    }
    friend Jet operator+(double a, Jet b) {
        b.c[0] += a;
        return b;
    }
    friend Jet operator-(Jet a, double b) {
        a.c[0] -= b;
        return a;
    }
    friend Jet operator-(double a, const Jet& b) {
        return Jet(a) - b;
    }
    friend Jet operator*(Jet a, double b) {
        for (auto& x : a.c) {
            x *= b;
        }
        return a;
    }
    friend Jet operator*(double a, Jet b) {
        return b * a;
    }
    friend Jet operator/(Jet a, double b) {
        for (auto& x : a.c) {
            x /= b;
        }
        return a;
    }
    friend Jet operator/(double a, const Jet& b) {
        return Jet(a) / b;
    }
};

/// Value of a plain scalar or of a jet.
inline double value_of(double x) {
    return x;
}

template <int N>
double value_of(const Jet<N>& x) {
    return x.value();
}

} // namespace augsurf
