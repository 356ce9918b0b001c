#include "snowfold/covers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

namespace snowfold {

namespace {

double set_distance(const SnowflakeView& m, const std::vector<PointId>& a,
                    const std::vector<PointId>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (PointId p : a)
        for (PointId q : b) best = std::min(best, m.distance(p, q));
    return best;
}

double member_diameter(const SnowflakeView& m, const std::vector<PointId>& pts) {
    double d = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            d = std::max(d, m.distance(pts[a], pts[b]));
    return d;
}

// Greedy proper coloring in member order, lowest free color. Conflicts are
// member pairs at distance <= s/2; a proper coloring therefore gives every
// color class the required > s/2 separation.
void color_members(std::vector<CoverMember>& members, const SnowflakeView& m,
                   double s, int& color_count) {
    const std::size_t k = members.size();
    std::vector<std::vector<std::size_t>> conflict(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (set_distance(m, members[i].points, members[j].points) <= s / 2.0) {
                conflict[i].push_back(j);
                conflict[j].push_back(i);
            }
    int max_color = 0;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<bool> used;
        for (std::size_t j : conflict[i])
            if (j < i) {
                const std::size_t c = std::size_t(members[j].color);
                if (used.size() <= c) used.resize(c + 1, false);
                used[c] = true;
            }
        int c = 0;
        while (std::size_t(c) < used.size() && used[c]) ++c;
        members[i].color = c;
        max_color = std::max(max_color, c);
    }
    color_count = max_color + 1;
}

} // namespace

ColoredCover build_greedy_colored_cover(const SnowflakeView& m, double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw ParameterError("cover scale must be positive and finite");
    const std::size_t n = m.size();

    // Maximal net: point 0 first, then any point farther than s from the net.
    std::vector<PointId> net;
    for (std::size_t p = 0; p < n; ++p) {
        bool separated = true;
        for (PointId q : net)
            if (m.distance(PointId(p), q) <= s) {
                separated = false;
                break;
            }
        if (separated) net.push_back(PointId(p));
    }

    // Voronoi cells of the net, ties to the earlier-inserted net point.
    std::vector<std::vector<PointId>> cells(net.size());
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t owner = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < net.size(); ++i) {
            const double d = m.distance(PointId(p), net[i]);
            if (d < best) {
                best = d;
                owner = i;
            }
        }
        cells[owner].push_back(PointId(p));
    }

    // Inflate each cell by s. Cells have diameter <= 2s (everything is within
    // s of its net point), so members stay within diameter 4s.
    ColoredCover cover;
    cover.scale = s;
    for (const auto& cell : cells) {
        CoverMember mem;
        for (std::size_t p = 0; p < n; ++p) {
            double d = std::numeric_limits<double>::infinity();
            for (PointId q : cell) d = std::min(d, m.distance(PointId(p), q));
            if (d <= s) mem.points.push_back(PointId(p));
        }
        cover.members.push_back(std::move(mem));
    }

    color_members(cover.members, m, s, cover.color_count);

    double max_diam = 0.0;
    for (const auto& mem : cover.members)
        max_diam = std::max(max_diam, member_diameter(m, mem.points));
    cover.achieved_c = max_diam / s;
    return cover;
}

ColoredCover build_interval_cover(const FiniteMetricSpace& m, double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw ParameterError("cover scale must be positive and finite");
    if (!m.has_coords())
        throw ParameterError("interval cover needs line coordinates");
    const auto& coords = m.coords();
    for (const auto& c : coords)
        if (c[1] != 0.0)
            throw ParameterError("interval cover needs points on the x-axis");

    // Windows [3s*i, 3s*i + 5s], color i mod 2. Consecutive same-color windows
    // are 6s apart, leaving a gap of s; the length-3s "safe zones" of the two
    // colors tile the line, so every closed s-ball lands inside some window.
    // At fine scales the index range dwarfs the point count, so gather the
    // candidate windows per point (each point meets at most two) instead of
    // scanning the range.
    ColoredCover cover;
    cover.scale = s;
    const double step = 3.0 * s;
    const auto window_index = [&](double x) {
        const double lim = 4.0e18;  // keep the int64 cast defined
        return std::int64_t(std::clamp(std::floor(x / step), -lim, lim));
    };
    std::set<std::int64_t> candidates;
    for (const auto& c : coords) {
        const std::int64_t at = window_index(c[0]);
        for (std::int64_t i = at - 2; i <= at + 1; ++i) candidates.insert(i);
    }
    for (std::int64_t i : candidates) {
        const double a = 3.0 * s * double(i);
        const double b = a + 5.0 * s;
        CoverMember mem;
        mem.color = int(((i % 2) + 2) % 2);
        for (std::size_t p = 0; p < coords.size(); ++p)
            if (coords[p][0] >= a && coords[p][0] <= b) mem.points.push_back(PointId(p));
        if (!mem.points.empty()) cover.members.push_back(std::move(mem));
    }

    SnowflakeView base(m, 1.0);
    int max_color = 0;
    double max_diam = 0.0;
    for (const auto& mem : cover.members) {
        max_color = std::max(max_color, mem.color);
        max_diam = std::max(max_diam, member_diameter(base, mem.points));
    }
    cover.color_count = max_color + 1;
    cover.achieved_c = max_diam / s;
    return cover;
}

std::string CoverViolation::describe() const {
    switch (kind) {
        case Kind::BadMember:
            return "member " + std::to_string(member_a) + " is empty or has bad ids";
        case Kind::Covering:
            return "point " + std::to_string(point) + " is in no member";
        case Kind::Separation:
            return "members " + std::to_string(member_a) + " and " +
                   std::to_string(member_b) + " share color " + std::to_string(color) +
                   " at distance " + std::to_string(value);
        case Kind::BallContainment:
            return "closed ball around point " + std::to_string(point) +
                   " fits in no member";
    }
    return "?";
}

CoverCheck verify_cover(const ColoredCover& cover, const SnowflakeView& m) {
    CoverCheck check;
    const std::size_t n = m.size();
    const double s = cover.scale;
    if (!(s > 0.0))
        throw ParameterError("cover scale must be positive");

    std::vector<std::vector<bool>> in_member(cover.members.size(),
                                             std::vector<bool>(n, false));
    int max_color = 0;
    for (std::size_t i = 0; i < cover.members.size(); ++i) {
        const auto& mem = cover.members[i];
        max_color = std::max(max_color, mem.color);
        bool bad = mem.points.empty() || mem.color < 0;
        for (PointId p : mem.points) {
            if (p >= n) {
                bad = true;
                break;
            }
            in_member[i][p] = true;
        }
        if (bad) {
            check.violations.push_back(
                {CoverViolation::Kind::BadMember, 0, i, 0, mem.color, 0.0});
            continue;
        }
        check.recomputed_c =
            std::max(check.recomputed_c, member_diameter(m, mem.points) / s);
    }
    check.color_count = max_color + 1;

    for (std::size_t p = 0; p < n; ++p) {
        bool covered = false;
        for (std::size_t i = 0; i < cover.members.size() && !covered; ++i)
            covered = in_member[i][p];
        if (!covered)
            check.violations.push_back(
                {CoverViolation::Kind::Covering, PointId(p), 0, 0, 0, 0.0});
    }

    for (std::size_t i = 0; i < cover.members.size(); ++i)
        for (std::size_t j = i + 1; j < cover.members.size(); ++j) {
            if (cover.members[i].color != cover.members[j].color) continue;
            const double d =
                set_distance(m, cover.members[i].points, cover.members[j].points);
            if (d <= s / 2.0)
                check.violations.push_back({CoverViolation::Kind::Separation, 0, i, j,
                                            cover.members[i].color, d});
        }

    // Closed-ball containment: for each point, its ball of radius s must sit
    // inside one member.
    for (std::size_t p = 0; p < n; ++p) {
        std::vector<PointId> ball;
        for (std::size_t q = 0; q < n; ++q)
            if (m.distance(PointId(p), PointId(q)) <= s) ball.push_back(PointId(q));
        bool contained = false;
        for (std::size_t i = 0; i < cover.members.size() && !contained; ++i) {
            contained = true;
            for (PointId q : ball)
                if (!in_member[i][q]) {
                    contained = false;
                    break;
                }
        }
        if (!contained)
            check.violations.push_back(
                {CoverViolation::Kind::BallContainment, PointId(p), 0, 0, 0, s});
    }
    return check;
}

const ColoredCover& CoverHierarchy::cover_at(int j) const {
    if (j < j_lo || j > j_hi)
        throw ParameterError("scale index outside the hierarchy window");
    return covers[std::size_t(j - j_lo)];
}

CoverHierarchy build_hierarchy(const FiniteMetricSpace& space, double epsilon,
                               double r, double tail_tol, CoverScheme scheme) {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw ParameterError("hierarchy exponent must lie in (0, 1)");
    if (!(r >= 2.0) || !std::isfinite(r))
        throw ParameterError("scale ratio must be >= 2");
    if (!(tail_tol > 0.0))
        throw ParameterError("tail tolerance must be positive");

    CoverHierarchy h;
    h.space = &space;
    h.r = r;
    h.epsilon = epsilon;
    h.tail_tol = tail_tol;

    const double diam = space.diameter();
    if (diam == 0.0) {
        // Single point (or all-coincident): nothing to cover, the fold is the
        // zero map. Empty window by convention.
        h.j_lo = 0;
        h.j_hi = -1;
        return h;
    }

    SnowflakeView base(space, 1.0);
    SnowflakeView snow(space, epsilon);
    h.min_snow_distance = snow.min_positive_distance();
    if (h.min_snow_distance <= 0.0)
        throw StructuralError("space has coincident points; cannot size the window");

    // Smallest j with r^j >= diam, robust against pow rounding at the edges.
    int j_hi = int(std::ceil(std::log(diam) / std::log(r)));
    while (std::pow(r, double(j_hi)) < diam) ++j_hi;
    while (j_hi > std::numeric_limits<int>::min() + 1 &&
           std::pow(r, double(j_hi - 1)) >= diam)
        --j_hi;
    h.j_hi = j_hi;

    const double tail_target = tail_tol * h.min_snow_distance;
    const double geo = 1.0 - std::pow(r, -epsilon);
    auto tail_at = [&](int j, int colors) {
        return 2.0 * double(colors) * std::exp(double(j) * epsilon * std::log(r)) / geo;
    };

    int j = j_hi;
    while (true) {
        if (j_hi - j + 1 > kMaxWindowScales)
            throw ConfigurationError(
                "scale window exceeds " + std::to_string(kMaxWindowScales) +
                " scales; raise tail_tol or pick a larger scale ratio");
        const double s = std::pow(r, double(j));
        ColoredCover cover = scheme == CoverScheme::Greedy
                                 ? build_greedy_colored_cover(base, s)
                                 : build_interval_cover(space, s);
        cover.scale_index = j;
        h.global_color_count = std::max(h.global_color_count, cover.color_count);
        h.global_c = std::max(h.global_c, cover.achieved_c);
        h.covers.push_back(std::move(cover));
        if (tail_at(j, h.global_color_count) < tail_target) break;
        --j;
    }
    h.j_lo = j;
    std::reverse(h.covers.begin(), h.covers.end());
    h.tail_bound = tail_at(h.j_lo - 1, h.global_color_count);
    return h;
}

} // namespace snowfold
