#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snowfold/metric_space.hpp"

namespace snowfold {

struct CoverMember {
    std::vector<PointId> points;  // sorted ascending
    int color = 0;
};

// One scale of a colored cover: members of diameter <= achieved_c * scale,
// same-color members more than scale/2 apart, every closed ball of radius
// `scale` inside some member.
struct ColoredCover {
    int scale_index = 0;  // j, meaningful inside a hierarchy (scale = r^j)
    double scale = 0.0;   // s
    std::vector<CoverMember> members;
    int color_count = 1;     // K at this scale (max color + 1)
    double achieved_c = 0.0; // max member diameter / s
};

enum class CoverScheme { Greedy, Interval };

// Greedy net -> Voronoi cells -> inflate by s -> conflict-color. Guarantees
// achieved_c <= 4 and all cover invariants on any finite metric space.
// Deterministic: net seeded at point 0, candidates scanned in index order,
// Voronoi ties to the earlier net point, colors greedily lowest-free.
ColoredCover build_greedy_colored_cover(const SnowflakeView& m, double s);

// Two-color cover of a space whose points sit on a line (coords required,
// y == 0): windows of length 5s on stride 3s, color = window index mod 2.
// Same-color windows are s apart, so the separation invariant holds with
// room, and every closed s-ball fits in some window. Guarantees c <= 5.
ColoredCover build_interval_cover(const FiniteMetricSpace& m, double s);

struct CoverViolation {
    enum class Kind { BadMember, Covering, Separation, BallContainment };
    Kind kind;
    // Covering / BallContainment: the offending point; Separation: members a, b.
    PointId point = 0;
    std::size_t member_a = 0, member_b = 0;
    int color = 0;
    double value = 0.0;  // separation distance or ball radius
    std::string describe() const;
};

struct CoverCheck {
    std::vector<CoverViolation> violations;
    double recomputed_c = 0.0;
    int color_count = 1;
    bool ok() const { return violations.empty(); }
};

// Re-derives every cover invariant from scratch (covering, same-color
// separation > s/2, closed-ball containment, id hygiene, achieved_c).
CoverCheck verify_cover(const ColoredCover& cover, const SnowflakeView& m);

// Hard cap on window length; wider requests are configuration errors.
inline constexpr int kMaxWindowScales = 64;

// Scales j_lo..j_hi of covers at s = r^j over the base metric. j_hi is the
// smallest j with r^j >= diam (coarser covers are {X} and contribute nothing);
// j_lo is the largest j whose geometric tail 2K r^(j*eps) / (1 - r^-eps) drops
// below tail_tol times the smallest positive snowflaked distance.
struct CoverHierarchy {
    const FiniteMetricSpace* space = nullptr;
    double r = 0.0;
    double epsilon = 0.0;
    double tail_tol = 0.0;
    int j_lo = 0, j_hi = -1;          // inclusive; empty when j_hi < j_lo
    std::vector<ColoredCover> covers; // covers[i] is scale j_lo + i
    int global_color_count = 1;       // K
    double global_c = 0.0;
    double tail_bound = 0.0;          // bound on everything below j_lo
    double min_snow_distance = 0.0;

    bool empty_window() const { return j_hi < j_lo; }
    int window_size() const { return empty_window() ? 0 : j_hi - j_lo + 1; }
    const ColoredCover& cover_at(int j) const;
};

CoverHierarchy build_hierarchy(const FiniteMetricSpace& space, double epsilon,
                               double r, double tail_tol, CoverScheme scheme);

} // namespace snowfold
