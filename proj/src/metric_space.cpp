#include "snowfold/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "snowfold/disjoint_set.hpp"

namespace snowfold {

namespace {

constexpr double kSymmetryTol = 1e-12;  // relative to the largest entry

} // namespace

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> dist_row_major,
                                     double mesh, std::string label)
    : n_(n), dist_(std::move(dist_row_major)), mesh_(mesh), diameter_(0.0),
      label_(std::move(label)) {
    if (n_ == 0)
        throw StructuralError("metric space needs at least one point");
    if (dist_.size() != n_ * n_)
        throw StructuralError("distance matrix is not n x n (" + label_ + ")");
    if (!(mesh_ > 0.0) || !std::isfinite(mesh_))
        throw StructuralError("mesh must be positive and finite");

    double maxd = 0.0;
    for (double v : dist_) {
        if (!std::isfinite(v))
            throw StructuralError("distance matrix has a non-finite entry");
        if (v < 0.0)
            throw StructuralError("distance matrix has a negative entry");
        maxd = std::max(maxd, v);
    }
    const double tol = kSymmetryTol * std::max(1.0, maxd);
    for (std::size_t i = 0; i < n_; ++i) {
        if (dist_[i * n_ + i] != 0.0)
            throw StructuralError("distance matrix has a nonzero diagonal entry");
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double a = dist_[i * n_ + j], b = dist_[j * n_ + i];
            if (std::abs(a - b) > tol)
                throw StructuralError("distance matrix is not symmetric");
            // Snap to the upper triangle so lookups are bit-for-bit symmetric.
            dist_[j * n_ + i] = a;
        }
    }
    diameter_ = maxd;
}

void FiniteMetricSpace::set_coords(std::vector<std::array<double, 2>> coords) {
    if (!coords.empty() && coords.size() != n_)
        throw StructuralError("coordinate list length does not match point count");
    coords_ = std::move(coords);
}

SnowflakeView::SnowflakeView(const FiniteMetricSpace& base, double epsilon)
    : base_(&base), epsilon_(epsilon), diameter_(0.0), min_positive_(0.0) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw ParameterError("snowflake exponent must lie in (0, 1]");
    if (epsilon == 1.0) {
        data_ = base.matrix().data();
    } else {
        const std::size_t n = base.size();
        powered_.resize(n * n);
        const std::vector<double>& d = base.matrix();
        for (std::size_t idx = 0; idx < d.size(); ++idx)
            powered_[idx] = d[idx] == 0.0 ? 0.0 : std::pow(d[idx], epsilon);
        data_ = powered_.data();
    }
    const std::size_t n = base.size();
    double minpos = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = data_[i * n + j];
            diameter_ = std::max(diameter_, v);
            if (v > 0.0) minpos = std::min(minpos, v);
        }
    min_positive_ = std::isfinite(minpos) ? minpos : 0.0;
}

SnowflakeView snowflake(const FiniteMetricSpace& m, double epsilon) {
    return SnowflakeView(m, epsilon);
}

std::vector<TriangleViolation> validate_metric(const FiniteMetricSpace& m) {
    const std::size_t n = m.size();
    const double tol = 1e-9 * m.diameter();
    std::vector<TriangleViolation> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double dik = m.distance(PointId(i), PointId(k));
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                const double via = m.distance(PointId(i), PointId(j)) +
                                   m.distance(PointId(j), PointId(k));
                if (dik > via + tol)
                    out.push_back({PointId(i), PointId(j), PointId(k), dik - via});
            }
        }
    }
    return out;
}

std::vector<std::pair<PointId, PointId>> off_diagonal_zeros(const FiniteMetricSpace& m) {
    std::vector<std::pair<PointId, PointId>> out;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.distance(PointId(i), PointId(j)) == 0.0)
                out.emplace_back(PointId(i), PointId(j));
    return out;
}

std::vector<std::vector<PointId>> r_components(const SnowflakeView& m,
                                               const std::vector<PointId>& subset,
                                               double r) {
    if (r < 0.0 || !std::isfinite(r))
        throw ParameterError("component radius must be finite and non-negative");
    const std::size_t n = m.size();
    std::unordered_set<PointId> seen;
    for (PointId p : subset) {
        if (p >= n)
            throw StructuralError("point id out of range in r_components");
        if (!seen.insert(p).second)
            throw StructuralError("duplicate point id in r_components");
    }

    const std::size_t k = subset.size();
    DisjointSet dsu(k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (m.distance(subset[a], subset[b]) <= r) dsu.unite(a, b);

    // Group, then order components by lowest member for reproducible output.
    std::vector<std::vector<PointId>> groups(k);
    for (std::size_t a = 0; a < k; ++a) groups[dsu.find(a)].push_back(subset[a]);
    std::vector<std::vector<PointId>> out;
    for (auto& g : groups) {
        if (g.empty()) continue;
        std::sort(g.begin(), g.end());
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return out;
}

double diameter(const SnowflakeView& m, const std::vector<PointId>& subset) {
    if (subset.empty())
        throw ParameterError("diameter of an empty subset is undefined");
    double d = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] >= m.size())
            throw StructuralError("point id out of range in diameter");
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            d = std::max(d, m.distance(subset[a], subset[b]));
    }
    return d;
}

bool single_h_component(const FiniteMetricSpace& m) {
    std::vector<PointId> all(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) all[i] = PointId(i);
    SnowflakeView base(m, 1.0);
    return r_components(base, all, m.mesh()).size() == 1;
}

} // namespace snowfold
