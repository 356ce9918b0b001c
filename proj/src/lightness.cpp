#include "snowfold/lightness.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_set>

#include "snowfold/disjoint_set.hpp"
#include "snowfold/subsets.hpp"

namespace snowfold {

namespace {

void require_same_size(const PointValues& f, const SnowflakeView& domain) {
    if (f.n != domain.size())
        throw MismatchError("value table and domain disagree on the point count");
}

// Lowest-index representative for every distinct image row, ascending.
std::vector<PointId> distinct_image_points(const PointValues& f) {
    std::vector<PointId> centers;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < f.n; ++i) {
        std::string key(reinterpret_cast<const char*>(f.data.data() + i * f.dim),
                        f.dim * sizeof(double));
        if (seen.insert(std::move(key)).second) centers.push_back(PointId(i));
    }
    return centers;
}

} // namespace

std::pair<double, LipschitzWitness> lipschitz_constant(const PointValues& f,
                                                       const SnowflakeView& domain) {
    require_same_size(f, domain);
    if (f.n < 2)
        throw ParameterError("Lipschitz constant needs at least two points");
    double best = 0.0;
    LipschitzWitness witness;
    const std::size_t n = f.n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double img = f.image_distance(PointId(i), PointId(j));
            const double d = domain.distance(PointId(i), PointId(j));
            if (d == 0.0) {
                if (img > 0.0)
                    return {std::numeric_limits<double>::infinity(),
                            {PointId(i), PointId(j)}};
                continue;
            }
            const double ratio = img / d;
            if (ratio > best) {
                best = ratio;
                witness = {PointId(i), PointId(j)};
            }
        }
    return {best, witness};
}

std::vector<double> probe_radii(const SnowflakeView& domain) {
    const std::size_t n = domain.size();
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = domain.distance(PointId(i), PointId(j));
            if (d > 0.0) dists.push_back(d);
        }
    std::sort(dists.begin(), dists.end());
    dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
    std::vector<double> radii;
    radii.reserve(dists.size() * 2);
    for (std::size_t i = 0; i < dists.size(); ++i) {
        radii.push_back(dists[i]);
        if (i + 1 < dists.size()) radii.push_back((dists[i] + dists[i + 1]) / 2.0);
    }
    std::sort(radii.begin(), radii.end());
    return radii;
}

LightnessResult lightness_constant(const PointValues& f, const SnowflakeView& domain,
                                   const LightnessOptions& opts) {
    require_same_size(f, domain);
    LightnessResult result;
    const std::size_t n = f.n;
    if (n < 2) return result;

    const std::vector<double> radii = probe_radii(domain);
    const std::vector<PointId> centers = distinct_image_points(f);
    const double view_diam = domain.diameter();

    std::vector<PointId> preimage;
    preimage.reserve(n);
    for (double rho : radii) {
        // No component can have diameter above the view's, so once the running
        // maximum beats view_diam / rho every later (larger) radius is
        // dominated and the scan can stop. Updates below are strict-greater,
        // so skipping dominated radii never changes the constant or witness.
        if (!opts.per_radius && result.constant > 0.0 &&
            view_diam / rho <= result.constant) {
            break;
        }
        double radius_best = 0.0;
        for (PointId center : centers) {
            preimage.clear();
            for (std::size_t x = 0; x < n; ++x)
                if (f.image_distance(PointId(x), center) <= rho)
                    preimage.push_back(PointId(x));
            if (preimage.size() < 2) continue;

            DisjointSet dsu(preimage.size());
            for (std::size_t a = 0; a < preimage.size(); ++a)
                for (std::size_t b = a + 1; b < preimage.size(); ++b)
                    if (domain.distance(preimage[a], preimage[b]) <= rho)
                        dsu.unite(a, b);

            // Group indices by root, keep first-seen order (lowest member).
            std::vector<std::vector<PointId>> groups(preimage.size());
            for (std::size_t a = 0; a < preimage.size(); ++a)
                groups[dsu.find(a)].push_back(preimage[a]);
            for (const auto& comp : groups) {
                if (comp.size() < 2) continue;
                double diam = 0.0;
                for (std::size_t a = 0; a < comp.size(); ++a)
                    for (std::size_t b = a + 1; b < comp.size(); ++b)
                        diam = std::max(diam, domain.distance(comp[a], comp[b]));
                const double ratio = diam / rho;
                radius_best = std::max(radius_best, ratio);
                if (ratio > result.constant) {
                    result.constant = ratio;
                    result.witness = {rho, center, comp};
                }
            }
        }
        if (opts.per_radius) result.per_radius.push_back({rho, radius_best, true});
    }
    return result;
}

LightnessReport lipschitz_light_report(const PointValues& f, const SnowflakeView& domain,
                                       std::optional<double> light_ceiling,
                                       std::optional<double> lip_ceiling) {
    LightnessReport report;
    if (f.n >= 2) {
        auto [lip, lip_wit] = lipschitz_constant(f, domain);
        report.lip_constant = lip;
        report.lip_witness = lip_wit;
    } else {
        require_same_size(f, domain);  // single point: both constants are 0
    }
    LightnessResult light = lightness_constant(f, domain);
    report.light_constant = light.constant;
    report.light_witness = std::move(light.witness);
    report.probe_radii = probe_radii(domain);
    report.light_ceiling = light_ceiling;
    report.lip_ceiling = lip_ceiling;
    report.pass = (!light_ceiling || report.light_constant <= *light_ceiling) &&
                  (!lip_ceiling || report.lip_constant <= *lip_ceiling);
    return report;
}

PreservationProfile diameter_preservation_profile(const PointValues& f,
                                                  const SnowflakeView& domain,
                                                  std::uint64_t seed,
                                                  std::size_t min_samples) {
    require_same_size(f, domain);
    PreservationProfile profile;
    const FiniteMetricSpace& space = domain.base();

    std::vector<std::vector<PointId>> sets;
    if (space.size() <= 16) {
        for (std::uint32_t mask : connected_subset_masks(space)) {
            if (std::popcount(mask) < 2) continue;
            std::vector<PointId> set;
            for (std::size_t v = 0; v < space.size(); ++v)
                if (mask & (std::uint32_t(1) << v)) set.push_back(PointId(v));
            sets.push_back(std::move(set));
        }
    } else {
        sets = sample_h_connected_sets(space, seed, min_samples);
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& set : sets) {
        double dom_diam = 0.0, img_diam = 0.0;
        for (std::size_t a = 0; a < set.size(); ++a)
            for (std::size_t b = a + 1; b < set.size(); ++b) {
                dom_diam = std::max(dom_diam, domain.distance(set[a], set[b]));
                img_diam = std::max(img_diam, f.image_distance(set[a], set[b]));
            }
        if (dom_diam == 0.0) continue;  // degenerate set, no ratio
        const double ratio = img_diam / dom_diam;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        ++profile.samples;
    }
    if (profile.samples == 0) {
        profile.degenerate = true;
        return profile;
    }
    profile.min_ratio = lo;
    profile.max_ratio = hi;
    profile.degenerate = hi == 0.0;
    return profile;
}

} // namespace snowfold
