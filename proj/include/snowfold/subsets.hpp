#pragma once

#include <cstdint>
#include <vector>

#include "snowfold/metric_space.hpp"

namespace snowfold {

// Every nonempty subset (as a bitmask) that is one mesh-component of the
// space. Only for n <= 16; masks come back in increasing numeric order.
std::vector<std::uint32_t> connected_subset_masks(const FiniteMetricSpace& m);

// Seeded sample of mesh-connected subsets: BFS-shortest paths between random
// pairs alternating with BFS blobs of random hop radius. Sets are sorted
// ascending; at least `count` sets unless the space is a single point.
std::vector<std::vector<PointId>> sample_h_connected_sets(const FiniteMetricSpace& m,
                                                          std::uint64_t seed,
                                                          std::size_t count);

} // namespace snowfold
