#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "snowfold/errors.hpp"

namespace snowfold {

using PointId = std::uint32_t;

// Finite metric space on points 0..n-1 with an explicit distance matrix and a
// declared mesh h: the space is meant to be one h-component, i.e. any two
// points are joined by a chain with consecutive gaps <= h.
//
// Construction checks shape and sign only (square, finite, non-negative,
// symmetric, zero diagonal). Metric quality -- the triangle inequality and
// off-diagonal positivity -- is checked by validate_metric / off_diagonal_zeros
// so that near-metrics such as exact pullback tables can still be wrapped and
// inspected without tripping an assert.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::size_t n, std::vector<double> dist_row_major,
                      double mesh, std::string label);

    std::size_t size() const { return n_; }
    double distance(PointId i, PointId j) const { return dist_[std::size_t{i} * n_ + j]; }
    double mesh() const { return mesh_; }
    const std::string& label() const { return label_; }
    double diameter() const { return diameter_; }
    const std::vector<double>& matrix() const { return dist_; }

    // Planar coordinates, present for generators that have a natural drawing
    // (intervals, grids, clouds, Cantor endpoints). Empty otherwise.
    bool has_coords() const { return !coords_.empty(); }
    const std::vector<std::array<double, 2>>& coords() const { return coords_; }
    void set_coords(std::vector<std::array<double, 2>> coords);

private:
    std::size_t n_;
    std::vector<double> dist_;
    double mesh_;
    double diameter_;
    std::string label_;
    std::vector<std::array<double, 2>> coords_;
};

// Snowflaked view d^epsilon of a base space, epsilon in (0,1]. epsilon = 1 is
// the base metric itself (no copy); otherwise the powered matrix is
// materialized once so hot loops pay a plain lookup.
class SnowflakeView {
public:
    SnowflakeView(const FiniteMetricSpace& base, double epsilon);

    std::size_t size() const { return base_->size(); }
    double distance(PointId i, PointId j) const { return data_[std::size_t{i} * size() + j]; }
    double epsilon() const { return epsilon_; }
    const FiniteMetricSpace& base() const { return *base_; }
    double diameter() const { return diameter_; }
    // Smallest positive distance in the view; 0 when there is none.
    double min_positive_distance() const { return min_positive_; }

private:
    const FiniteMetricSpace* base_;
    double epsilon_;
    std::vector<double> powered_;  // empty when epsilon == 1
    const double* data_;
    double diameter_;
    double min_positive_;
};

SnowflakeView snowflake(const FiniteMetricSpace& m, double epsilon);

struct TriangleViolation {
    PointId i, j, k;   // distance(i,k) > distance(i,j) + distance(j,k) + tol
    double excess;
};

// All violated triples (i < k, j distinct from both), with absolute tolerance
// 1e-9 * diameter. Empty result means the matrix is a (pseudo)metric.
std::vector<TriangleViolation> validate_metric(const FiniteMetricSpace& m);

// Pairs i<j at distance zero; a true metric has none.
std::vector<std::pair<PointId, PointId>> off_diagonal_zeros(const FiniteMetricSpace& m);

// Partition of `subset` into r-components: maximal groups whose members are
// joined by chains with consecutive gaps <= r. Components are ordered by their
// lowest point id, members ascending. Duplicate ids are rejected.
std::vector<std::vector<PointId>> r_components(const SnowflakeView& m,
                                               const std::vector<PointId>& subset,
                                               double r);

// Max pairwise distance within `subset` (0 for a singleton; empty rejected).
double diameter(const SnowflakeView& m, const std::vector<PointId>& subset);

// True when the whole space is a single mesh-component.
bool single_h_component(const FiniteMetricSpace& m);

} // namespace snowfold
