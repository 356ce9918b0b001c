#include "snowfold/pullback.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <utility>

#include "snowfold/subsets.hpp"

namespace snowfold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kEnvelopeCap = 512;
constexpr std::size_t kQsSampleBudget = 2'000'000;
constexpr std::size_t kBranchedSetBudget = 160;

std::vector<PointId> mask_ids(std::uint32_t mask) {
    std::vector<PointId> ids;
    while (mask) {
        ids.push_back(static_cast<PointId>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return ids;
}

double image_diameter(const PointValues& f, const std::vector<PointId>& ids) {
    double d = 0.0;
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            d = std::max(d, f.image_distance(ids[a], ids[b]));
    return d;
}

// Hop-shortest path in the mesh graph, ties broken toward lower-id parents.
// Empty when t is unreachable from s.
std::vector<PointId> shortest_mesh_path(const FiniteMetricSpace& m, PointId s, PointId t) {
    const std::size_t n = m.size();
    std::vector<PointId> parent(n, static_cast<PointId>(n));
    std::queue<PointId> q;
    parent[s] = s;
    q.push(s);
    while (!q.empty() && parent[t] == n) {
        const PointId u = q.front();
        q.pop();
        for (PointId v = 0; v < n; ++v) {
            if (parent[v] != n || v == u) continue;
            if (m.distance(u, v) <= m.mesh()) {
                parent[v] = u;
                q.push(v);
            }
        }
    }
    if (parent[t] == n) return {};
    std::vector<PointId> path;
    for (PointId v = t; v != s; v = parent[v]) path.push_back(v);
    path.push_back(s);
    std::sort(path.begin(), path.end());
    return path;
}

// Pairs (a, b) with a < b laid out a-major.
std::size_t pair_index(std::size_t n, PointId a, PointId b) {
    return std::size_t{a} * n - std::size_t{a} * (a + 1) / 2 + (b - a - 1);
}

std::vector<std::pair<double, double>> build_envelope(
    std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> env;
    double run = 0.0;
    for (const auto& [t, v] : pts) {
        run = std::max(run, v);
        if (!env.empty() && env.back().first == t)
            env.back().second = run;
        else
            env.emplace_back(t, run);
    }
    // Keep only the breakpoints where the running max moves, plus the tail so
    // the recorded domain still reaches the largest input ratio.
    std::vector<std::pair<double, double>> keep;
    for (const auto& e : env)
        if (keep.empty() || e.second > keep.back().second) keep.push_back(e);
    if (!env.empty() && (keep.empty() || keep.back().first != env.back().first))
        keep.push_back(env.back());
    if (keep.size() > kEnvelopeCap) {
        std::vector<std::pair<double, double>> thin;
        thin.reserve(kEnvelopeCap);
        for (std::size_t i = 0; i < kEnvelopeCap; ++i)
            thin.push_back(keep[i * (keep.size() - 1) / (kEnvelopeCap - 1)]);
        thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
        keep = std::move(thin);
    }
    return keep;
}

template <class TargetDist>
DistortionProfile qs_profile(const SnowflakeView& src, TargetDist&& tgt,
                             std::uint64_t seed) {
    const std::size_t n = src.size();
    DistortionProfile out;
    out.mode = DistortionMode::Quasisymmetry;
    std::vector<std::pair<double, double>> pts;

    auto consider = [&](PointId x, PointId a, PointId b) {
        const double sd = src.distance(x, b);
        if (sd == 0.0) {
            ++out.skipped_degenerate;
            return;
        }
        const double td = tgt(x, b);
        if (td == 0.0) {
            ++out.skipped_degenerate;
            if (tgt(x, a) > 0.0) out.finite = false;
            return;
        }
        pts.emplace_back(src.distance(x, a) / sd, tgt(x, a) / td);
    };

    // Exhaustive while the triple count stays near the sampling budget.
    if (n * n * n <= kQsSampleBudget) {
        for (PointId x = 0; x < n; ++x)
            for (PointId a = 0; a < n; ++a) {
                if (a == x) continue;
                for (PointId b = 0; b < n; ++b) {
                    if (b == x || b == a) continue;
                    consider(x, a, b);
                }
            }
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < kQsSampleBudget; ++i) {
            const PointId x = static_cast<PointId>(rng() % n);
            const PointId a = static_cast<PointId>(rng() % n);
            const PointId b = static_cast<PointId>(rng() % n);
            if (x == a || x == b || a == b) continue;
            consider(x, a, b);
        }
    }
    out.samples = pts.size();
    out.envelope = build_envelope(std::move(pts));
    return out;
}

template <class SetDiam>
DistortionProfile branched_profile(const SnowflakeView& src, SetDiam&& tgt_diam,
                                   std::uint64_t seed) {
    DistortionProfile out;
    out.mode = DistortionMode::Branched;
    const auto sets = sample_h_connected_sets(src.base(), seed, kBranchedSetBudget);

    std::vector<double> sd(sets.size()), td(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        sd[i] = diameter(src, sets[i]);
        td[i] = tgt_diam(sets[i]);
    }

    auto intersects = [](const std::vector<PointId>& a, const std::vector<PointId>& b) {
        std::size_t i = 0, j = 0;  // both sorted ascending
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) return true;
            a[i] < b[j] ? ++i : ++j;
        }
        return false;
    };

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = 0; j < sets.size(); ++j) {
            if (i == j || !intersects(sets[i], sets[j])) continue;
            if (sd[j] == 0.0) {
                ++out.skipped_degenerate;
                continue;
            }
            if (td[j] == 0.0) {
                ++out.skipped_degenerate;
                if (td[i] > 0.0) out.finite = false;
                continue;
            }
            pts.emplace_back(sd[i] / sd[j], td[i] / td[j]);
        }
    out.samples = pts.size();
    out.envelope = build_envelope(std::move(pts));
    return out;
}

} // namespace

PullbackMetric pullback_metric(const FiniteMetricSpace& m, const PointValues& f,
                               PullbackMode mode) {
    const std::size_t n = m.size();
    if (f.n != n)
        throw MismatchError("value table and space disagree on point count");
    if (!single_h_component(m))
        throw StructuralError("pullback needs a mesh-connected space");

    PullbackMetric out;
    out.n = n;
    out.mode = mode;
    out.d.assign(n * n, kInf);
    for (std::size_t i = 0; i < n; ++i) out.d[i * n + i] = 0.0;

    if (mode == PullbackMode::Bounds) {
        out.lower.assign(n * n, 0.0);
        for (PointId a = 0; a < n; ++a)
            for (PointId b = a + 1; b < n; ++b) {
                const double lo = f.image_distance(a, b);
                const auto path = shortest_mesh_path(m, a, b);
                const double hi = path.empty() ? kInf : image_diameter(f, path);
                out.lower[std::size_t{a} * n + b] = out.lower[std::size_t{b} * n + a] = lo;
                out.d[std::size_t{a} * n + b] = out.d[std::size_t{b} * n + a] = hi;
            }
        return out;
    }

    if (n > kExactPullbackLimit)
        throw SizeCapError("exact pullback is limited to " +
                           std::to_string(kExactPullbackLimit) + " points");

    struct Entry {
        double diam;
        std::vector<PointId> ids;
    };
    std::vector<Entry> entries;
    for (std::uint32_t mask : connected_subset_masks(m)) {
        if (std::popcount(mask) < 2) continue;
        auto ids = mask_ids(mask);
        entries.push_back({image_diameter(f, ids), std::move(ids)});
    }
    // Cheapest image diameter first; lexicographically lowest id set on ties,
    // so the first set containing a pair is its canonical witness.
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        if (x.diam != y.diam) return x.diam < y.diam;
        return x.ids < y.ids;
    });

    out.witnesses.reserve(n * (n - 1) / 2);
    for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b) out.witnesses.push_back({a, b, {}});

    std::size_t unassigned = n * (n - 1) / 2;
    for (const Entry& e : entries) {
        if (unassigned == 0) break;
        for (std::size_t p = 0; p < e.ids.size() && unassigned > 0; ++p)
            for (std::size_t q = p + 1; q < e.ids.size(); ++q) {
                const PointId a = e.ids[p], b = e.ids[q];
                double& slot = out.d[std::size_t{a} * n + b];
                if (slot != kInf) continue;
                slot = e.diam;
                out.d[std::size_t{b} * n + a] = e.diam;
                out.witnesses[pair_index(n, a, b)].set = e.ids;
                --unassigned;
            }
    }
    return out;
}

FactorizationReport factorization_check(const FiniteMetricSpace& m, const PointValues& f) {
    const std::size_t n = m.size();
    if (n > kExactPullbackLimit)
        throw SizeCapError("factorization check needs the exact pullback, limited to " +
                           std::to_string(kExactPullbackLimit) + " points");
    if (!single_h_component(m))
        throw StructuralError("factorization check needs a mesh-connected space");

    const PullbackMetric pm = pullback_metric(m, f, PullbackMode::Exact);
    FactorizationReport rep;

    double img_diam = 0.0;
    for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b) {
            const double df = pm.d[std::size_t{a} * n + b];
            const double side = f.image_distance(a, b);
            img_diam = std::max(img_diam, side);
            rep.max_lipschitz_excess = std::max(rep.max_lipschitz_excess, side - df);
            if (df == 0.0) {
                ++rep.degenerate_pairs;
            } else {
                const auto& w = pm.witnesses[pair_index(n, a, b)];
                double wdiam = 0.0;
                for (std::size_t p = 0; p < w.set.size(); ++p)
                    for (std::size_t q = p + 1; q < w.set.size(); ++q)
                        wdiam = std::max(wdiam,
                                         pm.d[std::size_t{w.set[p]} * n + w.set[q]]);
                rep.turning_constant = std::max(rep.turning_constant, wdiam / df);
            }
        }
    rep.max_lipschitz_excess = std::max(rep.max_lipschitz_excess, 0.0);
    rep.turning_slack = rep.turning_constant - 1.0;

    for (std::uint32_t mask : connected_subset_masks(m)) {
        ++rep.connected_sets;
        const auto ids = mask_ids(mask);
        double diam_df = 0.0;
        for (std::size_t p = 0; p < ids.size(); ++p)
            for (std::size_t q = p + 1; q < ids.size(); ++q)
                diam_df = std::max(diam_df, pm.d[std::size_t{ids[p]} * n + ids[q]]);
        rep.max_diameter_gap =
            std::max(rep.max_diameter_gap, std::abs(diam_df - image_diameter(f, ids)));
    }

    const double tol = 1e-9 * std::max(1.0, img_diam);
    rep.pass = rep.max_diameter_gap <= tol && rep.max_lipschitz_excess <= tol &&
               rep.turning_slack <= 1e-9;
    return rep;
}

DistortionProfile distortion_profile(const SnowflakeView& source,
                                     const SnowflakeView& target,
                                     DistortionMode mode, std::uint64_t seed) {
    if (source.size() != target.size())
        throw MismatchError("distortion profile needs views on the same point set");
    if (mode == DistortionMode::Quasisymmetry)
        return qs_profile(source,
                          [&](PointId a, PointId b) { return target.distance(a, b); },
                          seed);
    return branched_profile(
        source, [&](const std::vector<PointId>& s) { return diameter(target, s); },
        seed);
}

DistortionProfile distortion_profile(const SnowflakeView& source,
                                     const PointValues& target,
                                     DistortionMode mode, std::uint64_t seed) {
    if (target.n != source.size())
        throw MismatchError("value table and view disagree on point count");
    if (mode == DistortionMode::Quasisymmetry)
        return qs_profile(source,
                          [&](PointId a, PointId b) { return target.image_distance(a, b); },
                          seed);
    return branched_profile(
        source, [&](const std::vector<PointId>& s) { return image_diameter(target, s); },
        seed);
}

} // namespace snowfold
