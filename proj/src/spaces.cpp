#include "snowfold/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <tuple>

#include "snowfold/disjoint_set.hpp"

namespace snowfold {

namespace {

void check_cap(std::size_t n, const std::string& what) {
    if (n > kMaxPoints)
        throw SizeCapError(what + " would have " + std::to_string(n) +
                           " points; the cap is " + std::to_string(kMaxPoints));
    if (n == 0)
        throw ParameterError(what + " would be empty");
}

FiniteMetricSpace from_coords(std::vector<std::array<double, 2>> pts, double mesh,
                              std::string label) {
    const std::size_t n = pts.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    FiniteMetricSpace m(n, std::move(d), mesh, std::move(label));
    m.set_coords(std::move(pts));
    return m;
}

FiniteMetricSpace make_interval(std::uint32_t points) {
    check_cap(points, "interval");
    std::vector<std::array<double, 2>> pts(points);
    for (std::uint32_t i = 0; i < points; ++i) pts[i] = {double(i), 0.0};
    return from_coords(std::move(pts), 1.0, "interval-" + std::to_string(points));
}

FiniteMetricSpace make_grid2d(std::uint32_t side) {
    if (side == 0) throw ParameterError("grid side must be positive");
    check_cap(std::size_t{side} * side, "grid2d");
    std::vector<std::array<double, 2>> pts;
    pts.reserve(std::size_t{side} * side);
    for (std::uint32_t row = 0; row < side; ++row)
        for (std::uint32_t col = 0; col < side; ++col)
            pts.push_back({double(col), double(row)});
    return from_coords(std::move(pts), 1.0,
                       "grid2d-" + std::to_string(side) + "x" + std::to_string(side));
}

FiniteMetricSpace make_cantor(std::uint32_t level) {
    if (level > 10) throw ParameterError("cantor level capped at 10");
    // Endpoints of the surviving intervals, as integers over 3^level.
    std::vector<std::pair<std::int64_t, std::int64_t>> intervals{{0, 1}};
    std::int64_t denom = 1;
    for (std::uint32_t l = 0; l < level; ++l) {
        denom *= 3;
        std::vector<std::pair<std::int64_t, std::int64_t>> next;
        next.reserve(intervals.size() * 2);
        for (auto [a, b] : intervals) {
            // [a,b] over denom/3 becomes [3a, 3a+len] and [3b-len, 3b] over denom.
            const std::int64_t a3 = 3 * a, b3 = 3 * b, len = b - a;
            next.emplace_back(a3, a3 + len);
            next.emplace_back(b3 - len, b3);
        }
        intervals = std::move(next);
    }
    std::vector<std::int64_t> ends;
    for (auto [a, b] : intervals) {
        ends.push_back(a);
        ends.push_back(b);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    check_cap(ends.size(), "cantor");

    std::vector<std::array<double, 2>> pts;
    pts.reserve(ends.size());
    std::int64_t max_gap = 1;  // level 0 is just {0, 1}
    for (std::size_t i = 0; i < ends.size(); ++i) {
        pts.push_back({double(ends[i]) / double(denom), 0.0});
        if (i > 0) max_gap = std::max(max_gap, ends[i] - ends[i - 1]);
    }
    const double mesh = double(max_gap) / double(denom);
    return from_coords(std::move(pts), mesh, "cantor-" + std::to_string(level));
}

FiniteMetricSpace make_star_tree(std::uint32_t arms, std::uint32_t depth) {
    if (arms == 0 || depth == 0)
        throw ParameterError("star tree needs at least one arm of depth >= 1");
    const std::size_t n = 1 + std::size_t{arms} * depth;
    check_cap(n, "star_tree");
    // id 0 = center; arm a, step s (1-based) = 1 + a*depth + (s-1).
    auto arm_of = [&](std::size_t id) { return (id - 1) / depth; };
    auto step_of = [&](std::size_t id) { return (id - 1) % depth + 1; };
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v;
            if (i == 0) {
                v = double(step_of(j));
            } else if (arm_of(i) == arm_of(j)) {
                v = double(step_of(j) > step_of(i) ? step_of(j) - step_of(i)
                                                   : step_of(i) - step_of(j));
            } else {
                v = double(step_of(i) + step_of(j));
            }
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    return FiniteMetricSpace(n, std::move(d), 1.0,
                             "star_tree-" + std::to_string(arms) + "x" +
                                 std::to_string(depth));
}

// Discrete Heisenberg group: triples (a,b,c) with
// (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b'), generated by a^{+-1}, b^{+-1}.
FiniteMetricSpace make_heisenberg(std::uint32_t radius) {
    using Elt = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
    auto mul = [](const Elt& g, const Elt& h) {
        auto [a, b, c] = g;
        auto [x, y, z] = h;
        return Elt{a + x, b + y, c + z + a * y};
    };
    auto inv = [](const Elt& g) {
        auto [a, b, c] = g;
        return Elt{-a, -b, a * b - c};
    };
    const std::vector<Elt> gens{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};

    // Word norms out to 2*radius cover every quotient g^{-1} h of ball elements.
    std::map<Elt, std::uint32_t> norm;
    std::deque<Elt> queue;
    norm[{0, 0, 0}] = 0;
    queue.push_back({0, 0, 0});
    const std::uint32_t horizon = 2 * radius;
    while (!queue.empty()) {
        Elt g = queue.front();
        queue.pop_front();
        const std::uint32_t d = norm[g];
        if (d == horizon) continue;
        for (const Elt& s : gens) {
            Elt h = mul(g, s);
            if (norm.emplace(h, d + 1).second) queue.push_back(h);
        }
    }

    std::vector<Elt> ball;
    for (const auto& [g, d] : norm)
        if (d <= radius) ball.push_back(g);
    // std::map iteration is already sorted by (a,b,c); keep that ordering.
    check_cap(ball.size(), "heisenberg_ball");

    const std::size_t n = ball.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Elt q = mul(inv(ball[i]), ball[j]);
            const auto it = norm.find(q);
            if (it == norm.end())
                throw StructuralError("heisenberg norm table too small");
            dist[i * n + j] = double(it->second);
            dist[j * n + i] = double(it->second);
        }
    return FiniteMetricSpace(n, std::move(dist), 1.0,
                             "heisenberg_ball-" + std::to_string(radius));
}

FiniteMetricSpace make_random_cloud(std::uint32_t points, std::uint64_t seed) {
    check_cap(points, "random_cloud");
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::array<double, 2>> pts(points);
    for (auto& p : pts) {
        p[0] = unit();
        p[1] = unit();
    }
    // Mesh = the connectivity threshold (the largest edge of a minimum
    // spanning tree), so the cloud is a single h-component by construction.
    const std::size_t n = points;
    double mesh = 1.0;
    if (n > 1) {
        std::vector<double> best(n, std::numeric_limits<double>::infinity());
        std::vector<bool> in_tree(n, false);
        best[0] = 0.0;
        mesh = 0.0;
        for (std::size_t step = 0; step < n; ++step) {
            std::size_t u = n;
            for (std::size_t i = 0; i < n; ++i)
                if (!in_tree[i] && (u == n || best[i] < best[u])) u = i;
            in_tree[u] = true;
            mesh = std::max(mesh, best[u]);
            for (std::size_t v = 0; v < n; ++v)
                if (!in_tree[v]) {
                    const double d = std::hypot(pts[u][0] - pts[v][0], pts[u][1] - pts[v][1]);
                    best[v] = std::min(best[v], d);
                }
        }
    }
    return from_coords(std::move(pts), mesh,
                       "random_cloud-" + std::to_string(points) + "-s" +
                           std::to_string(seed));
}

} // namespace

FiniteMetricSpace generate(const SpaceRecipe& r) {
    switch (r.kind) {
        case SpaceKind::Interval: return make_interval(r.points);
        case SpaceKind::Grid2d: return make_grid2d(r.side);
        case SpaceKind::Cantor: return make_cantor(r.level);
        case SpaceKind::StarTree: return make_star_tree(r.arms, r.depth);
        case SpaceKind::HeisenbergBall: return make_heisenberg(r.radius);
        case SpaceKind::RandomCloud: return make_random_cloud(r.points, r.seed);
    }
    throw ParameterError("unknown space kind");
}

double bounded_turning_constant(const FiniteMetricSpace& m) {
    const std::size_t n = m.size();
    if (n < 2) return 1.0;
    const double h = m.mesh();

    std::vector<std::vector<PointId>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && m.distance(PointId(i), PointId(j)) <= h)
                adj[i].push_back(PointId(j));

    double worst = 1.0;
    std::vector<std::int64_t> parent(n);
    std::vector<PointId> order;
    order.reserve(n);
    for (std::size_t src = 0; src < n; ++src) {
        // BFS with ascending neighbor scan: parents (and hence witness paths)
        // are reproducible.
        std::fill(parent.begin(), parent.end(), -1);
        parent[src] = std::int64_t(src);
        order.clear();
        order.push_back(PointId(src));
        for (std::size_t head = 0; head < order.size(); ++head) {
            const PointId u = order[head];
            for (PointId v : adj[u])
                if (parent[v] < 0) {
                    parent[v] = u;
                    order.push_back(v);
                }
        }
        for (std::size_t dst = src + 1; dst < n; ++dst) {
            if (parent[dst] < 0)
                throw StructuralError("space is not one mesh-component (" + m.label() + ")");
            std::vector<PointId> path;
            for (PointId v = PointId(dst); v != PointId(src); v = PointId(parent[v]))
                path.push_back(v);
            path.push_back(PointId(src));
            double diam = 0.0;
            for (std::size_t a = 0; a < path.size(); ++a)
                for (std::size_t b = a + 1; b < path.size(); ++b)
                    diam = std::max(diam, m.distance(path[a], path[b]));
            worst = std::max(worst, diam / m.distance(PointId(src), PointId(dst)));
        }
    }
    return worst;
}

SpaceKind space_kind_from_string(const std::string& s) {
    if (s == "interval") return SpaceKind::Interval;
    if (s == "grid2d") return SpaceKind::Grid2d;
    if (s == "cantor") return SpaceKind::Cantor;
    if (s == "star_tree") return SpaceKind::StarTree;
    if (s == "heisenberg_ball") return SpaceKind::HeisenbergBall;
    if (s == "random_cloud") return SpaceKind::RandomCloud;
    throw ParameterError("unknown space kind '" + s +
                         "'; valid kinds: interval, grid2d, cantor, star_tree, "
                         "heisenberg_ball, random_cloud");
}

std::string to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::Interval: return "interval";
        case SpaceKind::Grid2d: return "grid2d";
        case SpaceKind::Cantor: return "cantor";
        case SpaceKind::StarTree: return "star_tree";
        case SpaceKind::HeisenbergBall: return "heisenberg_ball";
        case SpaceKind::RandomCloud: return "random_cloud";
    }
    return "?";
}

} // namespace snowfold
