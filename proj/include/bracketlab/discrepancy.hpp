// Box-counting equidistribution diagnostic on the coordinate cube.
//
// The empirical distribution of a list of coordinate vectors in
// (-1/2, 1/2]^m is compared against Lebesgue measure (the pushforward of
// Haar measure in Mal'cev coordinates): the reported discrepancy is the
// maximum of |empirical mass - volume| over all axis-aligned boxes whose
// faces lie on a uniform grid with boxes_per_axis cells per axis.

#pragma once

#include <vector>

#include "bracketlab/scalar.hpp"

namespace bracketlab {

inline double equidistribution_discrepancy(const std::vector<std::vector<double>>& coords,
                                           int boxes_per_axis) {
    if (coords.empty()) throw Error("no coordinates given");
    if (boxes_per_axis < 1) throw Error("need at least one box per axis");
    const std::size_t m = coords.front().size();
    if (m == 0 || m > 4) throw Error("discrepancy supports dimension 1..4");
    const int B = boxes_per_axis;

    // cell counts
    std::size_t cells = 1;
    for (std::size_t i = 0; i < m; ++i) cells *= static_cast<std::size_t>(B);
    std::vector<long long> count(cells, 0);
    for (const auto& v : coords) {
        if (v.size() != m) throw Error("ragged coordinate list");
        std::size_t idx = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double x = v[i];
            if (x <= -0.5 || x > 0.5) throw Error("coordinate outside (-1/2, 1/2]");
            int c = static_cast<int>(std::floor((x + 0.5) * B));
            if (c >= B) c = B - 1;  // x == 1/2
            if (c < 0) c = 0;
            idx = idx * static_cast<std::size_t>(B) + static_cast<std::size_t>(c);
        }
        ++count[idx];
    }

    // prefix sums along each axis in turn: count becomes cumulative
    std::vector<std::size_t> stride(m);
    {
        std::size_t s = 1;
        for (std::size_t i = m; i-- > 0;) {
            stride[i] = s;
            s *= static_cast<std::size_t>(B);
        }
    }
    for (std::size_t axis = 0; axis < m; ++axis) {
        for (std::size_t idx = 0; idx < cells; ++idx) {
            std::size_t coord = (idx / stride[axis]) % static_cast<std::size_t>(B);
            if (coord > 0) count[idx] += count[idx - stride[axis]];
        }
    }

    const double total = static_cast<double>(coords.size());

    // enumerate all boxes [lo_i, hi_i] of grid cells via inclusion-exclusion
    // on the cumulative array
    auto cumulative_at = [&](const std::vector<int>& c) -> long long {
        for (std::size_t i = 0; i < m; ++i)
            if (c[i] < 0) return 0;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < m; ++i) idx += static_cast<std::size_t>(c[i]) * stride[i];
        return count[idx];
    };

    double worst = 0.0;
    std::vector<int> corner(m, 0);
    // odometer over all (lo, hi) pairs with lo <= hi per axis
    std::vector<std::pair<int, int>> ranges(m, {0, 0});
    for (;;) {
        // mass of the box via inclusion-exclusion
        long long mass = 0;
        const std::size_t corners = static_cast<std::size_t>(1) << m;
        for (std::size_t w = 0; w < corners; ++w) {
            int sign = 1;
            for (std::size_t i = 0; i < m; ++i) {
                if (w & (static_cast<std::size_t>(1) << i)) {
                    corner[i] = ranges[i].first - 1;
                    sign = -sign;
                } else {
                    corner[i] = ranges[i].second;
                }
            }
            mass += sign * cumulative_at(corner);
        }
        double vol = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            vol *= static_cast<double>(ranges[i].second - ranges[i].first + 1) / B;
        worst = std::max(worst, std::abs(static_cast<double>(mass) / total - vol));

        // advance odometer over (lo, hi) pairs
        std::size_t axis = 0;
        for (; axis < m; ++axis) {
            auto& rg = ranges[axis];
            if (rg.second + 1 < B) {
                ++rg.second;
                break;
            }
            if (rg.first + 1 < B) {
                ++rg.first;
                rg.second = rg.first;
                break;
            }
            rg = {0, 0};
        }
        if (axis == m) break;
    }
    return worst;
}

}  // namespace bracketlab
