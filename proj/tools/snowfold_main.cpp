#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "snowfold/io.hpp"

namespace {

using namespace snowfold;

std::string default_out_dir() {
    const char* env = std::getenv("SNOWFOLD_OUT");
    return env && *env ? env : ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::string pick(const std::string& explicit_path, const std::string& dir,
                 const std::string& name) {
    return explicit_path.empty() ? join_path(dir, name) : explicit_path;
}

void kv(const std::string& key, const std::string& value) {
    std::cout << "  " << key;
    for (std::size_t i = key.size(); i < 22; ++i) std::cout << ' ';
    std::cout << value << "\n";
}

bool sits_on_a_line(const FiniteMetricSpace& m) {
    if (!m.has_coords()) return false;
    for (const auto& c : m.coords())
        if (c[1] != 0.0) return false;
    return true;
}

CoverScheme resolve_scheme(const std::string& requested, const FiniteMetricSpace& m) {
    if (requested == "greedy") return CoverScheme::Greedy;
    if (requested == "interval") return CoverScheme::Interval;
    // auto: the two-color line cover only applies to interval-style spaces
    const bool interval_like =
        m.label().rfind("interval", 0) == 0 && sits_on_a_line(m);
    return interval_like ? CoverScheme::Interval : CoverScheme::Greedy;
}

int cmd_generate(RunConfig cfg, const std::string& kind_name, const std::string& out) {
    cfg.command = "generate";
    SpaceRecipe& recipe = *cfg.recipe;
    recipe.kind = space_kind_from_string(kind_name);
    FiniteMetricSpace space = generate(recipe);
    cfg.space_path = pick(out, cfg.out_dir, space.label() + ".space.json");
    save_space(cfg.space_path, space, cfg);
    std::cout << "wrote " << cfg.space_path << "\n";
    kv("label", space.label());
    kv("points", std::to_string(space.size()));
    kv("mesh", format_double(space.mesh()));
    kv("diameter", format_double(space.diameter()));
    return 0;
}

int cmd_fold(RunConfig cfg, const std::string& map_out, const std::string& hier_out) {
    cfg.command = "fold";
    if (!(cfg.epsilon > 0.0) || cfg.epsilon >= 1.0)
        throw ParameterError("fold needs a snowflake exponent epsilon in (0, 1); "
                             "epsilon = 1 (the unsnowflaked metric) is not foldable "
                             "by this construction");

    const FiniteMetricSpace space = load_space(cfg.space_path);
    const CoverScheme scheme = resolve_scheme(cfg.scheme, space);
    const double cover_c = scheme == CoverScheme::Interval ? 5.0 : 4.0;
    const double r = cfg.r_override ? static_cast<double>(*cfg.r_override)
                                    : static_cast<double>(
                                          select_scale_ratio(cfg.epsilon, cover_c));

    const CoverHierarchy hierarchy =
        build_hierarchy(space, cfg.epsilon, r, cfg.tail_tol, scheme);
    const FoldingMap map = build_folding_map(hierarchy, cfg.base_point);

    cfg.map_path = pick(map_out, cfg.out_dir, space.label() + ".map.json");
    const std::string hier_path =
        pick(hier_out, cfg.out_dir, space.label() + ".hierarchy.json");
    const std::string csv_path = cfg.map_path + ".csv";
    save_map(cfg.map_path, map, cfg);
    save_map_csv(csv_path, map);
    save_hierarchy(hier_path, hierarchy, cfg);

    std::cout << "wrote " << cfg.map_path << ", " << csv_path << ", " << hier_path
              << "\n";
    kv("scheme", scheme == CoverScheme::Interval ? "interval" : "greedy");
    kv("r", format_double(r));
    kv("colors (K)", std::to_string(map.global_color_count));
    kv("achieved c", format_double(map.global_c));
    kv("window", "j = [" + std::to_string(map.j_lo) + ", " + std::to_string(map.j_hi) +
                     "] (" + std::to_string(hierarchy.window_size()) + " scales)");
    kv("target dim", std::to_string(map.target_dim));
    kv("certified lip bound", format_double(map.certified_lip_bound));
    kv("tail bound", format_double(map.tail_bound));
    return 0;
}

int cmd_verify(RunConfig cfg, const std::string& out) {
    cfg.command = "verify";
    const FiniteMetricSpace space = load_space(cfg.space_path);
    const FoldingMap map = load_map(cfg.map_path);
    if (map.n != space.size())
        throw MismatchError("map has " + std::to_string(map.n) + " points, space has " +
                            std::to_string(space.size()));

    const SnowflakeView view(space, map.epsilon);
    const LightnessReport rep =
        lipschitz_light_report(map.values, view, cfg.light_ceiling, cfg.lip_ceiling);

    const std::string report_path =
        pick(out, cfg.out_dir, space.label() + ".report.json");
    save_report(report_path, rep, space.label(), space.size(), map.target_dim,
                map.epsilon, cfg);
    std::cout << "wrote " << report_path << "\n";
    if (cfg.emit_plots) {
        const std::string svg_path = join_path(cfg.out_dir, space.label() + ".image.svg");
        if (save_image_svg(svg_path, map.values, space.label()))
            std::cout << "wrote " << svg_path << "\n";
        else
            std::cout << "no plot: image dimension " << map.target_dim
                      << " has no 2d scatter, use the CSV\n";
    }

    kv("space", space.label() + " (n=" + std::to_string(space.size()) + ")");
    kv("epsilon", format_double(map.epsilon));
    kv("target dim", std::to_string(map.target_dim));
    kv("lip constant", format_double(rep.lip_constant) + "  (pair " +
                           std::to_string(rep.lip_witness.a) + "-" +
                           std::to_string(rep.lip_witness.b) + ")");
    kv("light constant", format_double(rep.light_constant) + "  (radius " +
                             format_double(rep.light_witness.radius) + ", center " +
                             std::to_string(rep.light_witness.center) + ", component " +
                             std::to_string(rep.light_witness.component.size()) +
                             " pts)");
    kv("probe radii", std::to_string(rep.probe_radii.size()));
    kv("surrogate factor", format_double(rep.surrogate_factor));
    if (cfg.light_ceiling)
        kv("light ceiling", format_double(*cfg.light_ceiling));
    if (cfg.lip_ceiling)
        kv("lip ceiling", format_double(*cfg.lip_ceiling));
    kv("pass", rep.pass ? "yes" : "no");
    if (!rep.pass) {
        std::cerr << "error: measured constants exceed the configured ceiling\n";
        return 1;
    }
    return 0;
}

int cmd_pullback(RunConfig cfg, bool bounds) {
    cfg.command = "pullback";
    cfg.pullback_mode = bounds ? "bounds" : "exact";
    const FiniteMetricSpace space = load_space(cfg.space_path);
    const FoldingMap map = load_map(cfg.map_path);
    if (map.n != space.size())
        throw MismatchError("map has " + std::to_string(map.n) + " points, space has " +
                            std::to_string(space.size()));
    if (!bounds && space.size() > kExactPullbackLimit)
        throw SizeCapError("exact pullback is limited to " +
                           std::to_string(kExactPullbackLimit) +
                           " points; rerun with --bounds for interval estimates");

    const PullbackMetric pm = pullback_metric(
        space, map.values, bounds ? PullbackMode::Bounds : PullbackMode::Exact);
    const std::string base = join_path(cfg.out_dir, space.label());
    const ordered_json pj = save_pullback(base + ".pullback.json", pm, space.label(), cfg);
    save_pullback_csv(base + ".pullback.csv", pm);

    // qs mode profiles the snowflake law d -> d^eps itself; branched mode
    // profiles the folding map on connected sets of the snowflaked space.
    DistortionProfile prof;
    if (cfg.distortion_mode == "qs") {
        const SnowflakeView plain(space, 1.0);
        const SnowflakeView snow(space, map.epsilon);
        prof = distortion_profile(plain, snow, DistortionMode::Quasisymmetry, cfg.seed);
    } else {
        const SnowflakeView snow(space, map.epsilon);
        prof = distortion_profile(snow, map.values, DistortionMode::Branched, cfg.seed);
    }
    save_profile(base + ".profile.json", prof, cfg);
    save_profile_csv(base + ".profile.csv", prof);

    std::cout << "wrote " << base << ".pullback.{json,csv}, " << base
              << ".profile.{json,csv}\n";
    kv("mode", cfg.pullback_mode);
    if (!bounds) {
        kv("metric valid", pj["metric_valid"].get<bool>() ? "yes" : "no");
        kv("triangle violations", pj["triangle_violations"].dump());
        kv("zero pairs", pj["zero_pairs"].dump());
    }
    kv("profile mode", cfg.distortion_mode);
    kv("profile samples", std::to_string(prof.samples));
    kv("envelope points", std::to_string(prof.envelope.size()));
    if (!prof.envelope.empty())
        kv("envelope tail", "(" + format_double(prof.envelope.back().first) + ", " +
                                format_double(prof.envelope.back().second) + ")");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"snowfold: snowflake a finite metric space, fold it into R^m with "
                 "colored multiscale covers, and measure what the fold preserves"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.out_dir = default_out_dir();

    // generate
    auto* gen = app.add_subcommand("generate", "write a benchmark space as JSON");
    std::string kind_name;
    SpaceRecipe recipe;
    std::string gen_out;
    gen->add_option("kind", kind_name,
                    "interval | grid2d | cantor | star_tree | heisenberg_ball | "
                    "random_cloud")
        ->required();
    gen->add_option("--points", recipe.points, "point count (interval, random_cloud)");
    gen->add_option("--side", recipe.side, "grid side length");
    gen->add_option("--level", recipe.level, "Cantor level");
    gen->add_option("--arms", recipe.arms, "star tree arm count");
    gen->add_option("--depth", recipe.depth, "star tree arm depth");
    gen->add_option("--radius", recipe.radius, "Heisenberg ball radius");
    gen->add_option("--seed", recipe.seed, "cloud seed");
    gen->add_option("-o,--out", gen_out, "output path (default <outdir>/<label>.space.json)");

    // fold
    auto* fold = app.add_subcommand("fold", "build the folding map for a space file");
    std::string fold_space, map_out, hier_out;
    std::int64_t r_override = 0;
    fold->add_option("space", fold_space, "space JSON file")->required();
    fold->add_option("--epsilon", cfg.epsilon, "snowflake exponent in (0,1)")
        ->capture_default_str();
    auto* ropt = fold->add_option("--r", r_override, "scale ratio override (>= 2)");
    fold->add_option("--base-point", cfg.base_point, "point mapped to the origin")
        ->capture_default_str();
    fold->add_option("--tail-tol", cfg.tail_tol, "window truncation tolerance")
        ->capture_default_str();
    fold->add_option("--scheme", cfg.scheme, "auto | greedy | interval")
        ->check(CLI::IsMember({"auto", "greedy", "interval"}))
        ->capture_default_str();
    fold->add_option("--map-out", map_out, "map output path");
    fold->add_option("--hierarchy-out", hier_out, "hierarchy output path");

    // verify
    auto* verify = app.add_subcommand("verify", "measure Lipschitz and lightness "
                                                "constants of a map on a space");
    std::string v_space, v_map, report_out;
    double light_ceiling = 0.0, lip_ceiling = 0.0;
    verify->add_option("space", v_space, "space JSON file")->required();
    verify->add_option("map", v_map, "map JSON file")->required();
    auto* lc = verify->add_option("--light-ceiling", light_ceiling,
                                  "fail when light constant reaches this");
    auto* pc = verify->add_option("--lip-ceiling", lip_ceiling,
                                  "fail when Lipschitz constant reaches this");
    verify->add_option("-o,--out", report_out, "report output path");
    verify->add_flag("--plots", cfg.emit_plots, "emit an SVG scatter for dim <= 2");

    // pullback
    auto* pull = app.add_subcommand("pullback", "pull the image metric back through "
                                                "a map and profile its distortion");
    std::string p_space, p_map;
    bool bounds = false;
    pull->add_option("space", p_space, "space JSON file")->required();
    pull->add_option("map", p_map, "map JSON file")->required();
    pull->add_flag("--bounds", bounds, "interval estimates instead of the exact metric");
    pull->add_option("--mode", cfg.distortion_mode, "distortion profile: qs | branched")
        ->check(CLI::IsMember({"qs", "branched"}))
        ->capture_default_str();
    pull->add_option("--seed", cfg.seed, "profile sampling seed")->capture_default_str();

    for (auto* sub : {gen, fold, verify, pull})
        sub->add_option("--outdir", cfg.out_dir,
                        "output directory (default $SNOWFOLD_OUT or .)")
            ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) {
            cfg.recipe = recipe;
            return cmd_generate(cfg, kind_name, gen_out);
        }
        if (fold->parsed()) {
            cfg.space_path = fold_space;
            if (ropt->count()) cfg.r_override = r_override;
            return cmd_fold(cfg, map_out, hier_out);
        }
        if (verify->parsed()) {
            cfg.space_path = v_space;
            cfg.map_path = v_map;
            if (lc->count()) cfg.light_ceiling = light_ceiling;
            if (pc->count()) cfg.lip_ceiling = lip_ceiling;
            return cmd_verify(cfg, report_out);
        }
        cfg.space_path = p_space;
        cfg.map_path = p_map;
        return cmd_pullback(cfg, bounds);
    } catch (const ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const SizeCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
