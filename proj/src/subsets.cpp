#include "snowfold/subsets.hpp"

#include <algorithm>
#include <random>

namespace snowfold {

namespace {

std::vector<std::vector<PointId>> mesh_adjacency(const FiniteMetricSpace& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<PointId>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && m.distance(PointId(i), PointId(j)) <= m.mesh())
                adj[i].push_back(PointId(j));
    return adj;
}

} // namespace

std::vector<std::uint32_t> connected_subset_masks(const FiniteMetricSpace& m) {
    const std::size_t n = m.size();
    if (n > 16)
        throw SizeCapError("connected-subset enumeration is limited to 16 points");

    std::vector<std::uint32_t> adj_mask(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && m.distance(PointId(i), PointId(j)) <= m.mesh())
                adj_mask[i] |= std::uint32_t(1) << j;

    std::vector<std::uint32_t> out;
    const std::uint32_t full = n == 32 ? ~0u : (std::uint32_t(1) << n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        // Flood from the lowest set bit; connected iff the flood fills mask.
        const std::uint32_t start = mask & (~mask + 1);
        std::uint32_t seen = start, frontier = start;
        while (frontier != 0) {
            std::uint32_t next = 0;
            std::uint32_t f = frontier;
            while (f != 0) {
                const int v = std::countr_zero(f);
                f &= f - 1;
                next |= adj_mask[std::size_t(v)] & mask;
            }
            frontier = next & ~seen;
            seen |= next;
        }
        if (seen == mask) out.push_back(mask);
    }
    return out;
}

std::vector<std::vector<PointId>> sample_h_connected_sets(const FiniteMetricSpace& m,
                                                          std::uint64_t seed,
                                                          std::size_t count) {
    const std::size_t n = m.size();
    std::vector<std::vector<PointId>> out;
    if (n < 2) return out;

    const auto adj = mesh_adjacency(m);
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t bound) { return std::size_t(rng() % bound); };

    std::vector<std::int64_t> parent(n);
    std::vector<PointId> order;
    auto bfs = [&](PointId src) {
        std::fill(parent.begin(), parent.end(), -1);
        parent[src] = src;
        order.clear();
        order.push_back(src);
        for (std::size_t head = 0; head < order.size(); ++head)
            for (PointId v : adj[order[head]])
                if (parent[v] < 0) {
                    parent[v] = order[head];
                    order.push_back(v);
                }
    };

    std::size_t attempts = 0;
    const std::size_t max_attempts = 64 * count + 64;
    while (out.size() < count && attempts++ < max_attempts) {
        if (out.size() % 2 == 0) {
            // Shortest mesh-path between a random pair.
            const PointId x = PointId(pick(n));
            PointId y = PointId(pick(n));
            if (x == y) y = PointId((y + 1) % n);
            bfs(x);
            if (parent[y] < 0) continue;  // disconnected input; skip quietly
            std::vector<PointId> path;
            for (PointId v = y; v != x; v = PointId(parent[v])) path.push_back(v);
            path.push_back(x);
            std::sort(path.begin(), path.end());
            out.push_back(std::move(path));
        } else {
            // Blob: all points within a random hop radius of a random center.
            const PointId z = PointId(pick(n));
            const std::size_t hops = 1 + pick(6);
            bfs(z);
            std::vector<std::size_t> depth(n, 0);
            std::vector<PointId> blob;
            for (PointId v : order) {
                if (v != z) depth[v] = depth[std::size_t(parent[v])] + 1;
                if (depth[v] <= hops) blob.push_back(v);
            }
            if (blob.size() < 2) continue;
            std::sort(blob.begin(), blob.end());
            out.push_back(std::move(blob));
        }
    }
    return out;
}

} // namespace snowfold
