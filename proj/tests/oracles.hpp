#pragma once

// Independent reference routes used only by tests. These deliberately avoid
// the library's own algorithms: reachability instead of the counter scan,
// level-order arrays instead of per-index recursion, full sorts instead of
// classification.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

namespace oracles {

/// Reflexive-transitive closure of the cover moves on n-bit masks.
/// Raises set a clear bit; swaps move a set bit to a higher clear position.
/// reach[x][y] says y is reachable from x, i.e. channel x+1 is no better
/// than channel y+1.
inline std::vector<std::vector<bool>> cover_closure(int n, bool raises = true,
                                                    bool swaps = true) {
    const std::uint32_t size = std::uint32_t{1} << n;
    std::vector<std::vector<bool>> reach(size, std::vector<bool>(size, false));
    for (std::uint32_t start = 0; start < size; ++start) {
        std::queue<std::uint32_t> frontier;
        frontier.push(start);
        reach[start][start] = true;
        while (!frontier.empty()) {
            const std::uint32_t x = frontier.front();
            frontier.pop();
            auto visit = [&](std::uint32_t y) {
                if (!reach[start][y]) {
                    reach[start][y] = true;
                    frontier.push(y);
                }
            };
            for (int a = 0; a < n; ++a) {
                if (!((x >> a) & 1u)) {
                    if (raises) visit(x | (std::uint32_t{1} << a));
                    continue;
                }
                if (swaps)
                    for (int b = a + 1; b < n; ++b)
                        if (!((x >> b) & 1u))
                            visit((x & ~(std::uint32_t{1} << a)) | (std::uint32_t{1} << b));
            }
        }
    }
    return reach;
}

/// Erasure parameters of all 2^n channels by the level-order array recursion,
/// natural index order. Uses the two-copy combination formulas directly, so
/// it is an arithmetic route independent of the per-index recursion.
inline std::vector<double> bec_levelwise(int n, double eps) {
    std::vector<double> z{eps};
    for (int level = 0; level < n; ++level) {
        std::vector<double> next(z.size() * 2);
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double a = z[k];
            next[2 * k] = a + a - a * a;
            next[2 * k + 1] = a * a;
        }
        z = std::move(next);
    }
    return z;
}

/// The K most reliable channel indices (1-based) by exact erasure parameter,
/// lower index first on ties, returned in ascending index order.
inline std::vector<std::uint32_t> best_k_by_erasure(const std::vector<double>& z,
                                                    std::size_t k) {
    std::vector<std::uint32_t> order(z.size());
    std::iota(order.begin(), order.end(), 1u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (z[a - 1] != z[b - 1]) return z[a - 1] < z[b - 1];
        return a < b;
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace oracles
