#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "snowfold/metric_space.hpp"
#include "snowfold/point_values.hpp"

namespace snowfold {

struct LipschitzWitness {
    PointId a = 0, b = 0;
};

// Worst probe found by the lightness sweep: at radius `radius`, the preimage
// of the closed image-ball around point `center` has a radius-component
// `component` whose snowflaked diameter attains constant * radius.
struct LightWitness {
    double radius = 0.0;
    PointId center = 0;
    std::vector<PointId> component;
};

// max |f(x)-f(y)| / d(x,y) over pairs, lowest witness on ties. Infinite when
// distinct images sit at distance zero.
std::pair<double, LipschitzWitness> lipschitz_constant(const PointValues& f,
                                                       const SnowflakeView& domain);

// Sorted distinct positive distances of the view, with the midpoints of
// consecutive values spliced in. These are the radii the sweep probes.
std::vector<double> probe_radii(const SnowflakeView& domain);

struct PerRadiusRatio {
    double radius = 0.0;
    double max_ratio = 0.0;
    bool evaluated = true;  // false when the sweep skipped a dominated radius
};

struct LightnessOptions {
    // Record a ratio for every probe radius instead of skipping radii whose
    // best possible ratio cannot beat the running maximum. The constant and
    // witness are identical either way; this just costs more.
    bool per_radius = false;
};

struct LightnessResult {
    double constant = 0.0;
    LightWitness witness;
    std::vector<PerRadiusRatio> per_radius;  // filled when requested
};

// Probe-ball sweep: for every probe radius rho and image point p, split
// f^{-1}(closed ball(f(p), rho)) into rho-components and take the largest
// snowflaked component diameter over rho. Probe sets have image diameter at
// most 2*rho, so this surrogate brackets the definition within a factor of 2.
LightnessResult lightness_constant(const PointValues& f, const SnowflakeView& domain,
                                   const LightnessOptions& opts = {});

struct LightnessReport {
    double lip_constant = 0.0;
    LipschitzWitness lip_witness;
    double light_constant = 0.0;
    LightWitness light_witness;
    std::vector<double> probe_radii;
    double surrogate_factor = 2.0;
    std::optional<double> light_ceiling;
    std::optional<double> lip_ceiling;
    bool pass = true;  // measured constants below every configured ceiling
};

LightnessReport lipschitz_light_report(const PointValues& f, const SnowflakeView& domain,
                                       std::optional<double> light_ceiling = {},
                                       std::optional<double> lip_ceiling = {});

// Spread of diam(f(K)) / diam_view(K) over sampled mesh-connected sets
// (exhaustive for n <= 16, else seeded paths and blobs).
struct PreservationProfile {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t samples = 0;
    bool degenerate = false;  // no sampled set had a positive image diameter
};

PreservationProfile diameter_preservation_profile(const PointValues& f,
                                                  const SnowflakeView& domain,
                                                  std::uint64_t seed = 0,
                                                  std::size_t min_samples = 500);

} // namespace snowfold
