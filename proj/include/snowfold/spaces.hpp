#pragma once

#include <cstdint>
#include <string>

#include "snowfold/metric_space.hpp"

namespace snowfold {

// Hard cap on generated point counts; everything here is desk scale.
inline constexpr std::size_t kMaxPoints = 5000;

enum class SpaceKind {
    Interval,        // {0,...,n-1} with unit spacing
    Grid2d,          // side x side unit grid, Euclidean distances
    Cantor,          // endpoints of the level-L middle-thirds intervals
    StarTree,        // central vertex with `arms` paths of length `depth`
    HeisenbergBall,  // word-metric ball in the discrete Heisenberg group
    RandomCloud,     // seeded uniform points in the unit square
};

struct SpaceRecipe {
    SpaceKind kind = SpaceKind::Interval;
    std::uint32_t points = 0;  // Interval / RandomCloud
    std::uint32_t side = 0;    // Grid2d
    std::uint32_t level = 0;   // Cantor
    std::uint32_t arms = 0;    // StarTree
    std::uint32_t depth = 0;   // StarTree
    std::uint32_t radius = 0;  // HeisenbergBall
    std::uint64_t seed = 0;    // RandomCloud
};

// Deterministic: equal recipes produce bit-identical spaces.
FiniteMetricSpace generate(const SpaceRecipe& recipe);

// Upper bound on the bounded-turning constant: for every pair the witness is
// the BFS-shortest mesh-path (lowest-index tie-breaks), and the reported value
// is max over pairs of diam(witness) / d(x, y).
double bounded_turning_constant(const FiniteMetricSpace& m);

SpaceKind space_kind_from_string(const std::string& s);
std::string to_string(SpaceKind kind);

} // namespace snowfold
