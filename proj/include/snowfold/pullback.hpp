#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "snowfold/metric_space.hpp"
#include "snowfold/point_values.hpp"

namespace snowfold {

// Exact mode enumerates every mesh-connected subset; dimension the cap so the
// enumeration stays cheap.
inline constexpr std::size_t kExactPullbackLimit = 16;

enum class PullbackMode { Exact, Bounds };

struct PullbackWitness {
    PointId a = 0, b = 0;
    std::vector<PointId> set;  // minimizing connected set, lex-lowest on ties
};

// d_f(x,y) = min over mesh-connected K containing x and y of diam(f(K)).
// Exact mode fills `d` with that minimum and keeps one witness per pair.
// Bounds mode fills `d` with diam(f(shortest mesh-path)) as an upper bound
// and `lower` with |f(x)-f(y)|.
struct PullbackMetric {
    std::size_t n = 0;
    PullbackMode mode = PullbackMode::Exact;
    std::vector<double> d;       // row-major n x n
    std::vector<double> lower;   // bounds mode only
    std::vector<PullbackWitness> witnesses;  // exact mode, pairs ordered (a<b)
};

PullbackMetric pullback_metric(const FiniteMetricSpace& m, const PointValues& f,
                               PullbackMode mode);

// Checks the factorization X -> (X, d_f) -> image(f): the second factor is
// 1-Lipschitz, d_f-diameters of connected sets equal their image diameters,
// and (X, d_f) has bounded turning with constant 1 (up to the recorded slack).
struct FactorizationReport {
    double max_diameter_gap = 0.0;    // max |diam_f(J) - diam f(J)|
    double max_lipschitz_excess = 0.0;  // max(|f(x)-f(y)| - d_f(x,y), 0)
    double turning_constant = 1.0;    // over pairs with d_f > 0
    double turning_slack = 0.0;       // turning_constant - 1
    std::size_t degenerate_pairs = 0; // pairs with d_f == 0
    std::size_t connected_sets = 0;
    bool pass = true;                 // gaps within 1e-9 of exact
};

FactorizationReport factorization_check(const FiniteMetricSpace& m, const PointValues& f);

enum class DistortionMode { Quasisymmetry, Branched };

// Monotone distortion envelope. Quasisymmetry mode compares distance ratios
// over point triples (x; a, b); branched mode compares diameter ratios over
// intersecting pairs of mesh-connected sets. Each sample pair is (input
// ratio t, max output ratio among samples with input <= t), thinned to at
// most 512 breakpoints.
struct DistortionProfile {
    DistortionMode mode = DistortionMode::Quasisymmetry;
    std::vector<std::pair<double, double>> envelope;
    std::size_t samples = 0;
    std::size_t skipped_degenerate = 0;
    bool finite = true;
};

DistortionProfile distortion_profile(const SnowflakeView& source,
                                     const SnowflakeView& target,
                                     DistortionMode mode, std::uint64_t seed = 0);

DistortionProfile distortion_profile(const SnowflakeView& source,
                                     const PointValues& target,
                                     DistortionMode mode, std::uint64_t seed = 0);

} // namespace snowfold
