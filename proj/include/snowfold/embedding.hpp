#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snowfold/covers.hpp"
#include "snowfold/point_values.hpp"

namespace snowfold {

// Minimal integer r >= 2 with
//   2/(r^eps - 1) + 4c/(r^(1-eps) - 1) < 1 - 2^(-eps),
// the inequality that makes the capture argument at scale j0 go through.
// Values within 1e-12 of equality are treated as failing, so float ties can
// never flip the selection.
std::int64_t select_scale_ratio(double epsilon, double c);

// Tent function of a member at scale s = r^j: psi(x) = min(1, r^-j * dist(x,
// complement)), with dist(x, empty) = +infinity (a member equal to the whole
// space scores 1 everywhere). Positive exactly on the member, r^-j-Lipschitz.
double bump(const SnowflakeView& m, const CoverMember& member, PointId x,
            double r, int j);

// Per-scale field: coordinate k-1 sums the bumps of color-k members (color 0
// is mapped to the zero vector). Padded to `dim` = global color count - 1.
std::vector<double> phi(const CoverHierarchy& h, int j, PointId x);

// Full per-scale field as an n x (K-1) table.
PointValues phi_table(const CoverHierarchy& h, int j);

struct FoldingMap {
    std::string label;
    std::size_t n = 0;
    double epsilon = 0.0;
    double r = 0.0;
    PointId base_point = 0;
    double tail_tol = 0.0;
    double tail_bound = 0.0;
    int j_lo = 0, j_hi = -1;
    int global_color_count = 1;  // K
    double global_c = 0.0;
    std::size_t target_dim = 0;  // K - 1
    double certified_lip_bound = 0.0;
    PointValues values;          // f(x), base point at the origin exactly
};

// f(x) = sum over window scales j of r^(j*eps) * (phi_j(x) - phi_j(base)),
// accumulated in fixed order (j ascending, then color, then member index).
// The scale weight is computed once per scale as exp(j*eps*ln r).
FoldingMap build_folding_map(const CoverHierarchy& h, PointId base_point);

// K/(1 - r^-eps) + 2K r^eps/(1 - r^(eps-1)): the geometric-series bound on
// |f(x)-f(y)| / d(x,y)^eps that the construction certifies.
double certified_lip_bound(int color_count, double r, double epsilon);

// Exhaustive capture sweep: for every (x, y, scale j0, color k >= 1) with
//   (i) image gap s = |f(x)-f(y)|,   (ii) d(x,y) <= 2c r^j0,
//   (iii) r^(j0*eps) > 2^eps * s,    (iv) color-k bumps at x sum to exactly 1,
// the point y must land in the union of color-k members at scale j0.
struct ColorCaptureReport {
    std::size_t tuples = 0;          // tuples enumerated
    std::size_t hypothesis_hits = 0; // tuples satisfying (i)-(iv)
    struct Violation {
        PointId x, y;
        int j, k;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ColorCaptureReport color_capture_sweep(const CoverHierarchy& h, const FoldingMap& f);

} // namespace snowfold
