#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "snowfold/metric_space.hpp"

namespace snowfold {

// Values of a map X -> R^dim, one row per point. dim may be zero (the empty
// target), in which case every image distance is 0.
struct PointValues {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> data;  // row-major, n * dim

    double value(PointId i, std::size_t k) const { return data[std::size_t{i} * dim + k]; }
    double& value(PointId i, std::size_t k) { return data[std::size_t{i} * dim + k]; }

    double image_distance(PointId a, PointId b) const {
        double s = 0.0;
        const double* ra = data.data() + std::size_t{a} * dim;
        const double* rb = data.data() + std::size_t{b} * dim;
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = ra[k] - rb[k];
            s += d * d;
        }
        return std::sqrt(s);
    }

    static PointValues zeros(std::size_t n, std::size_t dim) {
        PointValues v;
        v.n = n;
        v.dim = dim;
        v.data.assign(n * dim, 0.0);
        return v;
    }
};

} // namespace snowfold
