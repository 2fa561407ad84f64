// Copyright 2026 The pvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvtele {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Nodes and weights on [-1, 1]; Newton iteration on P_n from the Chebyshev guess.
inline QuadratureRule compute_gauss_legendre(int n) {
    QuadratureRule q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        q.nodes[lo] = -z;
        q.nodes[hi] = z;
        q.weights[lo] = w;
        q.weights[hi] = w;
    }
    if (n % 2 == 1) {
        q.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return q;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], cached per n.
inline const QuadratureRule &gauss_legendre(int n) {
    if (n < 1) {
        throw std::invalid_argument("Gauss-Legendre order must be >= 1, got " + std::to_string(n));
    }
    static std::mutex mu;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    }
    return it->second;
}

/// The n-point rule mapped onto [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
    const QuadratureRule &ref = gauss_legendre(n);
    QuadratureRule q = ref;
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        q.nodes[i] = c + h * ref.nodes[i];
        q.weights[i] = h * ref.weights[i];
    }
    return q;
}

}  // namespace pvtele
