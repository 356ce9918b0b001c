#include "snowfold/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace snowfold {

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FileError("cannot open for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw FileError("short write: " + path);
}

ordered_json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ordered_json j = ordered_json::parse(buf.str(), nullptr, false);
    if (j.is_discarded())
        throw StructuralError("not valid JSON: " + path);
    return j;
}

void require_format(const ordered_json& j, const std::string& format,
                    const std::string& path) {
    if (!j.is_object() || j.value("format", std::string{}) != format)
        throw StructuralError(path + " is not a " + format + " document");
}

const ordered_json& field(const ordered_json& j, const char* key,
                          const std::string& path) {
    auto it = j.find(key);
    if (it == j.end())
        throw StructuralError(path + " is missing field '" + key + "'");
    return *it;
}

ordered_json matrix_rows(std::size_t n, const std::vector<double>& row_major) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < n; ++k) row.push_back(row_major[i * n + k]);
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json opt_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json stamp(const char* format, const RunConfig& cfg) {
    ordered_json j;
    j["format"] = format;
    j["version"] = kArtifactVersion;
    j["config"] = config_json(cfg);
    return j;
}

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += "\r\n";
    return line;
}

} // namespace

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = cfg.command;
    j["space_path"] = cfg.space_path;
    j["map_path"] = cfg.map_path;
    j["out_dir"] = cfg.out_dir;
    if (cfg.recipe) {
        ordered_json r;
        r["kind"] = to_string(cfg.recipe->kind);
        r["points"] = cfg.recipe->points;
        r["side"] = cfg.recipe->side;
        r["level"] = cfg.recipe->level;
        r["arms"] = cfg.recipe->arms;
        r["depth"] = cfg.recipe->depth;
        r["radius"] = cfg.recipe->radius;
        r["seed"] = cfg.recipe->seed;
        j["recipe"] = std::move(r);
    } else {
        j["recipe"] = nullptr;
    }
    j["epsilon"] = cfg.epsilon;
    j["r_override"] = cfg.r_override ? ordered_json(*cfg.r_override) : ordered_json(nullptr);
    j["base_point"] = cfg.base_point;
    j["tail_tol"] = cfg.tail_tol;
    j["light_ceiling"] = opt_json(cfg.light_ceiling);
    j["lip_ceiling"] = opt_json(cfg.lip_ceiling);
    j["seed"] = cfg.seed;
    j["scheme"] = cfg.scheme;
    j["pullback_mode"] = cfg.pullback_mode;
    j["distortion_mode"] = cfg.distortion_mode;
    j["emit_plots"] = cfg.emit_plots;
    return j;
}

ordered_json save_space(const std::string& path, const FiniteMetricSpace& m,
                        const RunConfig& cfg) {
    ordered_json j = stamp("snowfold-space", cfg);
    j["label"] = m.label();
    j["n"] = m.size();
    j["mesh"] = m.mesh();
    j["distances"] = matrix_rows(m.size(), m.matrix());
    if (m.has_coords()) {
        ordered_json pts = ordered_json::array();
        for (const auto& c : m.coords()) pts.push_back(ordered_json::array({c[0], c[1]}));
        j["coords"] = std::move(pts);
    }
    write_text(path, j.dump(2) + "\n");
    return j;
}

FiniteMetricSpace load_space(const std::string& path) {
    const ordered_json j = read_json(path);
    require_format(j, "snowfold-space", path);
    const std::string label = field(j, "label", path).get<std::string>();
    const double mesh = field(j, "mesh", path).get<double>();
    const auto& rows = field(j, "distances", path);
    if (!rows.is_array() || rows.empty())
        throw StructuralError(path + ": 'distances' must be a non-empty array of rows");
    const std::size_t n = rows.size();
    std::vector<double> dist;
    dist.reserve(n * n);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n)
            throw StructuralError(path + ": distance rows must all have length " +
                                  std::to_string(n));
        for (const auto& v : row) dist.push_back(v.get<double>());
    }
    FiniteMetricSpace m(n, std::move(dist), mesh, label);
    if (auto it = j.find("coords"); it != j.end() && it->is_array()) {
        if (it->size() != n)
            throw StructuralError(path + ": 'coords' must have one entry per point");
        std::vector<std::array<double, 2>> coords;
        coords.reserve(n);
        for (const auto& c : *it)
            coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        m.set_coords(std::move(coords));
    }
    return m;
}

ordered_json save_map(const std::string& path, const FoldingMap& f, const RunConfig& cfg) {
    ordered_json j = stamp("snowfold-map", cfg);
    j["label"] = f.label;
    j["n"] = f.n;
    j["epsilon"] = f.epsilon;
    j["r"] = f.r;
    j["base_point"] = f.base_point;
    j["tail_tol"] = f.tail_tol;
    j["tail_bound"] = f.tail_bound;
    j["j_lo"] = f.j_lo;
    j["j_hi"] = f.j_hi;
    j["color_count"] = f.global_color_count;
    j["achieved_c"] = f.global_c;
    j["target_dim"] = f.target_dim;
    j["certified_lip_bound"] = f.certified_lip_bound;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < f.n; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < f.target_dim; ++k)
            row.push_back(f.values.value(static_cast<PointId>(i), k));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    write_text(path, j.dump(2) + "\n");
    return j;
}

FoldingMap load_map(const std::string& path) {
    const ordered_json j = read_json(path);
    require_format(j, "snowfold-map", path);
    FoldingMap f;
    f.label = field(j, "label", path).get<std::string>();
    f.n = field(j, "n", path).get<std::size_t>();
    f.epsilon = field(j, "epsilon", path).get<double>();
    f.r = field(j, "r", path).get<double>();
    f.base_point = field(j, "base_point", path).get<PointId>();
    f.tail_tol = field(j, "tail_tol", path).get<double>();
    f.tail_bound = field(j, "tail_bound", path).get<double>();
    f.j_lo = field(j, "j_lo", path).get<int>();
    f.j_hi = field(j, "j_hi", path).get<int>();
    f.global_color_count = field(j, "color_count", path).get<int>();
    f.global_c = field(j, "achieved_c", path).get<double>();
    f.target_dim = field(j, "target_dim", path).get<std::size_t>();
    f.certified_lip_bound = field(j, "certified_lip_bound", path).get<double>();
    const auto& rows = field(j, "values", path);
    if (!rows.is_array() || rows.size() != f.n)
        throw StructuralError(path + ": 'values' must have one row per point");
    f.values = PointValues::zeros(f.n, f.target_dim);
    for (std::size_t i = 0; i < f.n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != f.target_dim)
            throw StructuralError(path + ": value rows must have length " +
                                  std::to_string(f.target_dim));
        for (std::size_t k = 0; k < f.target_dim; ++k)
            f.values.value(static_cast<PointId>(i), k) = row[k].get<double>();
    }
    return f;
}

void save_map_csv(const std::string& path, const FoldingMap& f) {
    std::string text;
    std::vector<std::string> header{"point"};
    for (std::size_t k = 0; k < f.target_dim; ++k) header.push_back("x" + std::to_string(k));
    text += csv_join(header);
    for (std::size_t i = 0; i < f.n; ++i) {
        std::vector<std::string> cells{std::to_string(i)};
        for (std::size_t k = 0; k < f.target_dim; ++k)
            cells.push_back(format_double(f.values.value(static_cast<PointId>(i), k)));
        text += csv_join(cells);
    }
    write_text(path, text);
}

ordered_json save_hierarchy(const std::string& path, const CoverHierarchy& h,
                            const RunConfig& cfg) {
    ordered_json j = stamp("snowfold-hierarchy", cfg);
    j["label"] = h.space ? h.space->label() : "";
    j["n"] = h.space ? h.space->size() : 0;
    j["epsilon"] = h.epsilon;
    j["r"] = h.r;
    j["tail_tol"] = h.tail_tol;
    j["j_lo"] = h.j_lo;
    j["j_hi"] = h.j_hi;
    j["color_count"] = h.global_color_count;
    j["achieved_c"] = h.global_c;
    j["tail_bound"] = h.tail_bound;
    j["min_snow_distance"] = h.min_snow_distance;
    ordered_json covers = ordered_json::array();
    for (const ColoredCover& c : h.covers) {
        ordered_json cj;
        cj["scale_index"] = c.scale_index;
        cj["scale"] = c.scale;
        cj["color_count"] = c.color_count;
        cj["achieved_c"] = c.achieved_c;
        ordered_json members = ordered_json::array();
        for (const CoverMember& m : c.members) {
            ordered_json mj;
            mj["color"] = m.color;
            mj["points"] = m.points;
            members.push_back(std::move(mj));
        }
        cj["members"] = std::move(members);
        covers.push_back(std::move(cj));
    }
    j["covers"] = std::move(covers);
    write_text(path, j.dump(2) + "\n");
    return j;
}

CoverHierarchy load_hierarchy(const std::string& path, const FiniteMetricSpace& space) {
    const ordered_json j = read_json(path);
    require_format(j, "snowfold-hierarchy", path);
    if (field(j, "n", path).get<std::size_t>() != space.size())
        throw MismatchError(path + " was built for a space with " +
                            field(j, "n", path).dump() + " points, got " +
                            std::to_string(space.size()));
    CoverHierarchy h;
    h.space = &space;
    h.epsilon = field(j, "epsilon", path).get<double>();
    h.r = field(j, "r", path).get<double>();
    h.tail_tol = field(j, "tail_tol", path).get<double>();
    h.j_lo = field(j, "j_lo", path).get<int>();
    h.j_hi = field(j, "j_hi", path).get<int>();
    h.global_color_count = field(j, "color_count", path).get<int>();
    h.global_c = field(j, "achieved_c", path).get<double>();
    h.tail_bound = field(j, "tail_bound", path).get<double>();
    h.min_snow_distance = field(j, "min_snow_distance", path).get<double>();
    for (const auto& cj : field(j, "covers", path)) {
        ColoredCover c;
        c.scale_index = cj.at("scale_index").get<int>();
        c.scale = cj.at("scale").get<double>();
        c.color_count = cj.at("color_count").get<int>();
        c.achieved_c = cj.at("achieved_c").get<double>();
        for (const auto& mj : cj.at("members")) {
            CoverMember m;
            m.color = mj.at("color").get<int>();
            m.points = mj.at("points").get<std::vector<PointId>>();
            c.members.push_back(std::move(m));
        }
        h.covers.push_back(std::move(c));
    }
    if (h.covers.size() != static_cast<std::size_t>(h.window_size()))
        throw StructuralError(path + ": cover count disagrees with the window");
    return h;
}

ordered_json save_report(const std::string& path, const LightnessReport& rep,
                         const std::string& label, std::size_t n,
                         std::size_t target_dim, double epsilon, const RunConfig& cfg) {
    ordered_json j = stamp("snowfold-report", cfg);
    j["label"] = label;
    j["n"] = n;
    j["target_dim"] = target_dim;
    j["epsilon"] = epsilon;
    j["lip_constant"] = rep.lip_constant;
    j["lip_witness"] = ordered_json{{"a", rep.lip_witness.a}, {"b", rep.lip_witness.b}};
    j["light_constant"] = rep.light_constant;
    j["light_witness"] = ordered_json{{"radius", rep.light_witness.radius},
                                      {"center", rep.light_witness.center},
                                      {"component", rep.light_witness.component}};
    j["surrogate_factor"] = rep.surrogate_factor;
    j["probe_radii"] = rep.probe_radii;
    j["light_ceiling"] = opt_json(rep.light_ceiling);
    j["lip_ceiling"] = opt_json(rep.lip_ceiling);
    j["pass"] = rep.pass;
    write_text(path, j.dump(2) + "\n");
    return j;
}

ordered_json save_pullback(const std::string& path, const PullbackMetric& pm,
                           const std::string& label, const RunConfig& cfg) {
    ordered_json j = stamp("snowfold-pullback", cfg);
    j["label"] = label;
    j["n"] = pm.n;
    j["mode"] = pm.mode == PullbackMode::Exact ? "exact" : "bounds";
    j["d"] = matrix_rows(pm.n, pm.d);
    if (pm.mode == PullbackMode::Bounds) {
        j["lower"] = matrix_rows(pm.n, pm.lower);
        j["metric_valid"] = nullptr;
        j["triangle_violations"] = nullptr;
        j["zero_pairs"] = nullptr;
    } else {
        ordered_json ws = ordered_json::array();
        for (const PullbackWitness& w : pm.witnesses) {
            ordered_json wj;
            wj["a"] = w.a;
            wj["b"] = w.b;
            wj["set"] = w.set;
            ws.push_back(std::move(wj));
        }
        j["witnesses"] = std::move(ws);
        // d_f of a folding map can be a pseudometric, so record quality
        // instead of asserting it.
        FiniteMetricSpace induced(pm.n, pm.d, 1.0, label + "-pullback");
        const auto tri = validate_metric(induced);
        const auto zeros = off_diagonal_zeros(induced);
        j["metric_valid"] = tri.empty() && zeros.empty();
        j["triangle_violations"] = tri.size();
        j["zero_pairs"] = zeros.size();
    }
    write_text(path, j.dump(2) + "\n");
    return j;
}

void save_pullback_csv(const std::string& path, const PullbackMetric& pm) {
    std::string text;
    for (std::size_t i = 0; i < pm.n; ++i) {
        std::vector<std::string> cells;
        for (std::size_t k = 0; k < pm.n; ++k)
            cells.push_back(format_double(pm.d[i * pm.n + k]));
        text += csv_join(cells);
    }
    write_text(path, text);
}

ordered_json save_profile(const std::string& path, const DistortionProfile& prof,
                          const RunConfig& cfg) {
    ordered_json j = stamp("snowfold-profile", cfg);
    j["mode"] = prof.mode == DistortionMode::Quasisymmetry ? "qs" : "branched";
    j["samples"] = prof.samples;
    j["skipped_degenerate"] = prof.skipped_degenerate;
    j["finite"] = prof.finite;
    ordered_json env = ordered_json::array();
    for (const auto& [t, v] : prof.envelope) env.push_back(ordered_json::array({t, v}));
    j["envelope"] = std::move(env);
    write_text(path, j.dump(2) + "\n");
    return j;
}

void save_profile_csv(const std::string& path, const DistortionProfile& prof) {
    std::string text = csv_join({"t", "ratio"});
    for (const auto& [t, v] : prof.envelope)
        text += csv_join({format_double(t), format_double(v)});
    write_text(path, text);
}

bool save_image_svg(const std::string& path, const PointValues& values,
                    const std::string& label) {
    if (values.dim == 0 || values.dim > 2 || values.n == 0) return false;

    auto coord = [&](PointId i, std::size_t k) {
        return k < values.dim ? values.value(i, k) : 0.0;
    };
    double lo[2] = {coord(0, 0), coord(0, 1)};
    double hi[2] = {lo[0], lo[1]};
    for (PointId i = 0; i < values.n; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            lo[k] = std::min(lo[k], coord(i, k));
            hi[k] = std::max(hi[k], coord(i, k));
        }

    const double margin = 40.0, canvas = 600.0;
    auto scale = [&](double v, std::size_t k) {
        const double span = hi[k] - lo[k];
        const double unit = span > 0.0 ? (v - lo[k]) / span : 0.5;
        const double y = margin + unit * (canvas - 2.0 * margin);
        return k == 1 ? canvas - y : y;  // flip so larger values plot upward
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" "
                      "height=\"600\" viewBox=\"0 0 600 600\">\n";
    svg += "<title>" + label + "</title>\n";
    svg += "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
    for (PointId i = 0; i < values.n; ++i) {
        const int hue = static_cast<int>((360.0 * i) / values.n);
        svg += "<circle cx=\"" + format_double(scale(coord(i, 0), 0)) + "\" cy=\"" +
               format_double(scale(coord(i, 1), 1)) + "\" r=\"4\" fill=\"hsl(" +
               std::to_string(hue) + ",80%,45%)\"><title>" + std::to_string(i) +
               "</title></circle>\n";
    }
    svg += "</svg>\n";
    write_text(path, svg);
    return true;
}

} // namespace snowfold
