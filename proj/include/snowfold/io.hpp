#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "snowfold/covers.hpp"
#include "snowfold/embedding.hpp"
#include "snowfold/lightness.hpp"
#include "snowfold/metric_space.hpp"
#include "snowfold/pullback.hpp"
#include "snowfold/spaces.hpp"

namespace snowfold {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

// Everything a run depends on. Serialized verbatim into every artifact so any
// output can be reproduced from its own header.
struct RunConfig {
    std::string command;       // generate | fold | verify | pullback
    std::string space_path;
    std::string map_path;
    std::string out_dir;
    std::optional<SpaceRecipe> recipe;
    double epsilon = 0.5;
    std::optional<std::int64_t> r_override;
    PointId base_point = 0;
    double tail_tol = 1e-3;
    std::optional<double> light_ceiling;
    std::optional<double> lip_ceiling;
    std::uint64_t seed = 0;
    std::string scheme = "auto";           // auto | greedy | interval
    std::string pullback_mode = "exact";   // exact | bounds
    std::string distortion_mode = "qs";    // qs | branched
    bool emit_plots = false;
};

ordered_json config_json(const RunConfig& cfg);

// Shortest decimal that parses back to exactly the same double. Used for CSV;
// the JSON writer already emits round-trip-exact numbers.
std::string format_double(double v);

// Artifact writers return the document they wrote so callers can print from
// it. Readers throw FileError for missing/unreadable paths and StructuralError
// for parse or schema problems.
ordered_json save_space(const std::string& path, const FiniteMetricSpace& m,
                        const RunConfig& cfg);
FiniteMetricSpace load_space(const std::string& path);

ordered_json save_map(const std::string& path, const FoldingMap& f, const RunConfig& cfg);
FoldingMap load_map(const std::string& path);
void save_map_csv(const std::string& path, const FoldingMap& f);

ordered_json save_hierarchy(const std::string& path, const CoverHierarchy& h,
                            const RunConfig& cfg);
CoverHierarchy load_hierarchy(const std::string& path, const FiniteMetricSpace& space);

ordered_json save_report(const std::string& path, const LightnessReport& rep,
                         const std::string& label, std::size_t n,
                         std::size_t target_dim, double epsilon, const RunConfig& cfg);

// Exact mode also records metric quality of the induced matrix (triangle
// violations and zero off-diagonal pairs).
ordered_json save_pullback(const std::string& path, const PullbackMetric& pm,
                           const std::string& label, const RunConfig& cfg);
void save_pullback_csv(const std::string& path, const PullbackMetric& pm);

ordered_json save_profile(const std::string& path, const DistortionProfile& prof,
                          const RunConfig& cfg);
void save_profile_csv(const std::string& path, const DistortionProfile& prof);

// Scatter of the image, points colored by index. Only for 1 <= dim <= 2;
// returns false (no file) otherwise.
bool save_image_svg(const std::string& path, const PointValues& values,
                    const std::string& label);

} // namespace snowfold
