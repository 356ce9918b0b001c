#include "snowfold/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snowfold {

namespace {

constexpr double kTieMargin = 1e-12;

double ratio_lhs(double r, double epsilon, double c) {
    return 2.0 / (std::pow(r, epsilon) - 1.0) +
           4.0 * c / (std::pow(r, 1.0 - epsilon) - 1.0);
}

// psi for every point against one member, using a complement scan.
void bump_column(const SnowflakeView& m, const CoverMember& member, double inv_s,
                 std::vector<char>& in_member_scratch, std::vector<double>& out) {
    const std::size_t n = m.size();
    std::fill(in_member_scratch.begin(), in_member_scratch.end(), 0);
    for (PointId p : member.points) in_member_scratch[p] = 1;
    for (std::size_t x = 0; x < n; ++x) {
        if (!in_member_scratch[x]) {
            out[x] = 0.0;
            continue;
        }
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < n; ++y)
            if (!in_member_scratch[y])
                dist = std::min(dist, m.distance(PointId(x), PointId(y)));
        out[x] = std::min(1.0, inv_s * dist);  // min(1, inf) == 1 for B == X
    }
}

} // namespace

std::int64_t select_scale_ratio(double epsilon, double c) {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw ParameterError("scale-ratio selection needs an exponent in (0, 1)");
    if (!(c >= 1.0) || !std::isfinite(c))
        throw ParameterError("cover constant must be >= 1");
    const double rhs = 1.0 - std::pow(2.0, -epsilon);
    auto admissible = [&](double r) {
        const double lhs = ratio_lhs(r, epsilon, c);
        return lhs < rhs && (rhs - lhs) > kTieMargin;
    };
    // The left side is strictly decreasing in r, so first find any admissible
    // power of two, then binary search for the minimum.
    std::int64_t hi = 2;
    const std::int64_t cap = std::int64_t(1) << 52;
    while (!admissible(double(hi))) {
        if (hi > cap)
            throw ConfigurationError("no admissible integer scale ratio below 2^52; "
                                     "the exponent is too extreme");
        hi *= 2;
    }
    std::int64_t lo = std::max<std::int64_t>(2, hi / 2);
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (admissible(double(mid)))
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

double bump(const SnowflakeView& m, const CoverMember& member, PointId x,
            double r, int j) {
    if (x >= m.size())
        throw StructuralError("bump point id out of range");
    bool inside = false;
    for (PointId p : member.points)
        if (p == x) {
            inside = true;
            break;
        }
    if (!inside) return 0.0;
    std::vector<char> mask(m.size(), 0);
    for (PointId p : member.points) mask[p] = 1;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < m.size(); ++y)
        if (!mask[y]) dist = std::min(dist, m.distance(x, PointId(y)));
    return std::min(1.0, std::pow(r, -double(j)) * dist);
}

PointValues phi_table(const CoverHierarchy& h, int j) {
    const std::size_t n = h.space->size();
    const std::size_t dim =
        h.global_color_count > 1 ? std::size_t(h.global_color_count - 1) : 0;
    PointValues table = PointValues::zeros(n, dim);
    // Above the window the cover is {X}: one color-0 member, so the field is
    // identically zero and its map terms cancel exactly.
    if (j > h.j_hi) return table;
    const ColoredCover& cover = h.cover_at(j);
    if (dim == 0) return table;

    SnowflakeView base(*h.space, 1.0);
    const double inv_s = std::pow(h.r, -double(j));
    std::vector<char> scratch(n, 0);
    std::vector<double> column(n, 0.0);
    for (const CoverMember& mem : cover.members) {
        if (mem.color == 0) continue;  // color 0 carries the zero vector
        bump_column(base, mem, inv_s, scratch, column);
        const std::size_t k = std::size_t(mem.color - 1);
        for (std::size_t x = 0; x < n; ++x) table.value(PointId(x), k) += column[x];
    }
    return table;
}

std::vector<double> phi(const CoverHierarchy& h, int j, PointId x) {
    PointValues table = phi_table(h, j);
    std::vector<double> out(table.dim);
    for (std::size_t k = 0; k < table.dim; ++k) out[k] = table.value(x, k);
    return out;
}

double certified_lip_bound(int color_count, double r, double epsilon) {
    const double K = double(color_count);
    return K / (1.0 - std::pow(r, -epsilon)) +
           2.0 * K * std::pow(r, epsilon) / (1.0 - std::pow(r, epsilon - 1.0));
}

FoldingMap build_folding_map(const CoverHierarchy& h, PointId base_point) {
    if (h.space == nullptr)
        throw ParameterError("hierarchy has no space attached");
    const std::size_t n = h.space->size();
    if (base_point >= n)
        throw ParameterError("base point id out of range");
    if (!(h.epsilon > 0.0) || h.epsilon >= 1.0)
        throw ParameterError("folding map needs an exponent in (0, 1)");

    FoldingMap f;
    f.label = h.space->label();
    f.n = n;
    f.epsilon = h.epsilon;
    f.r = h.r;
    f.base_point = base_point;
    f.tail_tol = h.tail_tol;
    f.tail_bound = h.tail_bound;
    f.j_lo = h.j_lo;
    f.j_hi = h.j_hi;
    f.global_color_count = h.global_color_count;
    f.global_c = h.global_c;
    f.target_dim =
        h.global_color_count > 1 ? std::size_t(h.global_color_count - 1) : 0;
    f.certified_lip_bound = certified_lip_bound(h.global_color_count, h.r, h.epsilon);
    f.values = PointValues::zeros(n, f.target_dim);

    if (h.empty_window() || f.target_dim == 0) return f;
    if (h.tail_bound > h.tail_tol * h.min_snow_distance)
        throw ConfigurationError("hierarchy tail exceeds its tolerance; widen the "
                                 "window by raising tail_tol");

    const double ln_r = std::log(h.r);
    for (int j = h.j_lo; j <= h.j_hi; ++j) {
        const double weight = std::exp(double(j) * h.epsilon * ln_r);
        const PointValues table = phi_table(h, j);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t k = 0; k < f.target_dim; ++k)
                f.values.value(PointId(x), k) +=
                    weight * (table.value(PointId(x), k) - table.value(base_point, k));
    }
    return f;
}

ColorCaptureReport color_capture_sweep(const CoverHierarchy& h, const FoldingMap& f) {
    ColorCaptureReport report;
    if (h.space == nullptr || h.empty_window()) return report;
    const std::size_t n = h.space->size();
    if (f.n != n)
        throw MismatchError("map and hierarchy disagree on the point count");

    SnowflakeView base(*h.space, 1.0);
    const int K = h.global_color_count;
    const double two_eps = std::pow(2.0, h.epsilon);

    for (int j = h.j_lo; j <= h.j_hi; ++j) {
        const ColoredCover& cover = h.cover_at(j);
        const double r_j = std::pow(h.r, double(j));
        const double r_j_eps = std::exp(double(j) * h.epsilon * std::log(h.r));
        const double inv_s = 1.0 / r_j;
        std::vector<char> scratch(n, 0);
        std::vector<double> column(n, 0.0);

        for (int k = 1; k < K; ++k) {
            // Sum of color-k bumps and the union of color-k members at scale j.
            std::vector<double> bump_sum(n, 0.0);
            std::vector<char> in_union(n, 0);
            for (const CoverMember& mem : cover.members) {
                if (mem.color != k) continue;
                bump_column(base, mem, inv_s, scratch, column);
                for (std::size_t x = 0; x < n; ++x) bump_sum[x] += column[x];
                for (PointId p : mem.points) in_union[p] = 1;
            }

            for (std::size_t x = 0; x < n; ++x) {
                const bool full = bump_sum[x] == 1.0;
                for (std::size_t y = 0; y < n; ++y) {
                    ++report.tuples;
                    if (!full) continue;
                    if (base.distance(PointId(x), PointId(y)) > 2.0 * h.global_c * r_j)
                        continue;
                    const double s = f.values.image_distance(PointId(x), PointId(y));
                    if (!(r_j_eps > two_eps * s)) continue;
                    ++report.hypothesis_hits;
                    if (!in_union[y])
                        report.violations.push_back(
                            {PointId(x), PointId(y), j, k});
                }
            }
        }
    }
    return report;
}

} // namespace snowfold
