#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "snowfold/covers.hpp"
#include "snowfold/spaces.hpp"
#include "test_support.hpp"

using namespace snowfold;

namespace {

std::vector<PointId> all_ids(const FiniteMetricSpace& m) {
    std::vector<PointId> ids(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) ids[i] = PointId(i);
    return ids;
}

bool has_kind(const CoverCheck& check, CoverViolation::Kind kind) {
    for (const auto& v : check.violations)
        if (v.kind == kind) return true;
    return false;
}

} // namespace

TEST_CASE("greedy cover of the 5-point unit line at scale 1") {
    const auto line = testsupport::make_line(5, 1.0);
    const SnowflakeView v(line, 1.0);
    const auto cover = build_greedy_colored_cover(v, 1.0);

    // Net {0,2,4}; cells {0,1},{2,3},{4}; inflating by 1 gives the members
    // below; conflict coloring alternates 0,1 and reuses 0 for the last.
    REQUIRE(cover.members.size() == 3);
    CHECK(cover.members[0].points == std::vector<PointId>{0, 1, 2});
    CHECK(cover.members[1].points == std::vector<PointId>{1, 2, 3, 4});
    CHECK(cover.members[2].points == std::vector<PointId>{3, 4});
    CHECK(cover.members[0].color == 0);
    CHECK(cover.members[1].color == 1);
    CHECK(cover.members[2].color == 0);
    CHECK(cover.color_count == 2);
    CHECK(cover.achieved_c == 3.0);

    const auto check = verify_cover(cover, v);
    CHECK(check.ok());
    CHECK(check.recomputed_c == 3.0);
    CHECK(check.color_count == 2);
}

TEST_CASE("greedy cover degenerate shapes") {
    SUBCASE("single point") {
        const auto m = testsupport::make_line(1, 1.0);
        const SnowflakeView v(m, 1.0);
        const auto cover = build_greedy_colored_cover(v, 2.0);
        REQUIRE(cover.members.size() == 1);
        CHECK(cover.members[0].points == std::vector<PointId>{0});
        CHECK(cover.color_count == 1);
        CHECK(cover.achieved_c == 0.0);
        CHECK(verify_cover(cover, v).ok());
    }

    SUBCASE("scale at or above the diameter gives the whole space") {
        const auto m = testsupport::make_line(6, 1.0);
        const SnowflakeView v(m, 1.0);
        const auto cover = build_greedy_colored_cover(v, 5.0);
        REQUIRE(cover.members.size() == 1);
        CHECK(cover.members[0].points == all_ids(m));
        CHECK(verify_cover(cover, v).ok());
    }

    SUBCASE("bad scales are rejected") {
        const auto m = testsupport::make_line(3, 1.0);
        const SnowflakeView v(m, 1.0);
        CHECK_THROWS_AS(build_greedy_colored_cover(v, 0.0), ParameterError);
        CHECK_THROWS_AS(build_greedy_colored_cover(v, -1.0), ParameterError);
        const double inf = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(build_greedy_colored_cover(v, inf), ParameterError);
    }
}

TEST_CASE("greedy cover invariants hold across spaces and scales") {
    std::vector<FiniteMetricSpace> spaces;
    {
        SpaceRecipe r;
        r.kind = SpaceKind::Grid2d;
        r.side = 6;
        spaces.push_back(generate(r));
        r = {};
        r.kind = SpaceKind::StarTree;
        r.arms = 4;
        r.depth = 4;
        spaces.push_back(generate(r));
        r = {};
        r.kind = SpaceKind::HeisenbergBall;
        r.radius = 2;
        spaces.push_back(generate(r));
        r = {};
        r.kind = SpaceKind::RandomCloud;
        r.points = 50;
        r.seed = 21;
        spaces.push_back(generate(r));
    }
    for (const auto& m : spaces) {
        CAPTURE(m.label());
        for (double eps : {1.0, 0.5}) {
            const SnowflakeView v(m, eps);
            for (double frac : {0.05, 0.3, 1.1}) {
                const double s = frac * v.diameter();
                const auto cover = build_greedy_colored_cover(v, s);
                CAPTURE(eps);
                CAPTURE(s);
                const auto check = verify_cover(cover, v);
                CHECK(check.ok());
                CHECK(cover.achieved_c <= 4.0);
                CHECK(check.recomputed_c == cover.achieved_c);
                CHECK(check.color_count == cover.color_count);
            }
        }
    }
}

TEST_CASE("same-color members absorb chains with gaps up to half the scale") {
    // The separation invariant means an s/2-chain cannot hop between two
    // members of one color, so each s/2-component of a color class sits
    // inside a single member.
    SpaceRecipe r;
    r.kind = SpaceKind::RandomCloud;
    r.points = 60;
    r.seed = 5;
    const auto m = generate(r);
    const SnowflakeView v(m, 1.0);
    const double s = 0.2 * v.diameter();
    const auto cover = build_greedy_colored_cover(v, s);
    REQUIRE(verify_cover(cover, v).ok());

    for (int color = 0; color < cover.color_count; ++color) {
        std::vector<PointId> in_color;
        std::vector<bool> seen(m.size(), false);
        for (const auto& mem : cover.members)
            if (mem.color == color)
                for (PointId p : mem.points)
                    if (!seen[p]) {
                        seen[p] = true;
                        in_color.push_back(p);
                    }
        std::sort(in_color.begin(), in_color.end());
        if (in_color.empty()) continue;
        for (const auto& comp : r_components(v, in_color, s / 2.0)) {
            bool inside_one = false;
            for (const auto& mem : cover.members) {
                if (mem.color != color) continue;
                bool all_in = true;
                for (PointId p : comp)
                    if (!std::binary_search(mem.points.begin(), mem.points.end(), p)) {
                        all_in = false;
                        break;
                    }
                if (all_in) {
                    inside_one = true;
                    break;
                }
            }
            CHECK(inside_one);
        }
    }
}

TEST_CASE("verify_cover flags each kind of defect") {
    const auto line = testsupport::make_line(5, 1.0);
    const SnowflakeView v(line, 1.0);
    auto cover = build_greedy_colored_cover(v, 1.0);
    REQUIRE(verify_cover(cover, v).ok());

    SUBCASE("covering hole") {
        auto broken = cover;
        // Point 4 appears only in members 1 and 2; empty it out of both.
        broken.members[1].points = {1, 2, 3};
        broken.members[2].points = {3};
        const auto check = verify_cover(broken, v);
        CHECK_FALSE(check.ok());
        CHECK(has_kind(check, CoverViolation::Kind::Covering));
    }

    SUBCASE("same-color separation, including distance zero") {
        auto broken = cover;
        broken.members[1].color = 0;  // overlaps member 0, set distance 0
        const auto check = verify_cover(broken, v);
        CHECK_FALSE(check.ok());
        REQUIRE(has_kind(check, CoverViolation::Kind::Separation));
        for (const auto& viol : check.violations)
            if (viol.kind == CoverViolation::Kind::Separation) {
                CHECK(viol.value == 0.0);
                CHECK(viol.color == 0);
            }
    }

    SUBCASE("ball containment") {
        // Members cover every point but chop the ball around point 2.
        ColoredCover chopped;
        chopped.scale = 1.0;
        chopped.members.push_back({{0, 1, 2}, 0});
        chopped.members.push_back({{2, 3, 4}, 1});
        const auto check = verify_cover(chopped, v);
        CHECK_FALSE(check.ok());
        CHECK(has_kind(check, CoverViolation::Kind::BallContainment));
        CHECK_FALSE(has_kind(check, CoverViolation::Kind::Covering));
    }

    SUBCASE("bad members") {
        auto broken = cover;
        broken.members[0].points.clear();
        const auto empty_check = verify_cover(broken, v);
        CHECK(has_kind(empty_check, CoverViolation::Kind::BadMember));

        auto wild = cover;
        wild.members[0].points.push_back(99);  // id out of range
        const auto wild_check = verify_cover(wild, v);
        CHECK(has_kind(wild_check, CoverViolation::Kind::BadMember));
    }

    SUBCASE("violations carry readable descriptions") {
        auto broken = cover;
        broken.members[1].color = 0;
        const auto check = verify_cover(broken, v);
        REQUIRE_FALSE(check.violations.empty());
        for (const auto& viol : check.violations) CHECK_FALSE(viol.describe().empty());
    }
}

TEST_CASE("interval covers tile lines with two colors") {
    SpaceRecipe r;
    r.kind = SpaceKind::Interval;
    r.points = 40;
    const auto m = generate(r);
    const SnowflakeView v(m, 1.0);

    for (double s : {1.0, 2.5, 7.0, 50.0}) {
        CAPTURE(s);
        const auto cover = build_interval_cover(m, s);
        const auto check = verify_cover(cover, v);
        CHECK(check.ok());
        CHECK(cover.color_count <= 2);
        CHECK(cover.achieved_c <= 5.0);
        CHECK(check.recomputed_c == cover.achieved_c);
    }

    SUBCASE("windows are closed intervals of length five scales") {
        // At s = 1 the first window containing 0 is [0, 5]: six lattice points.
        const auto cover = build_interval_cover(m, 1.0);
        bool found = false;
        for (const auto& mem : cover.members)
            if (mem.points == std::vector<PointId>{0, 1, 2, 3, 4, 5}) found = true;
        CHECK(found);
    }

    SUBCASE("cantor endpoints also sit on a line") {
        SpaceRecipe cr;
        cr.kind = SpaceKind::Cantor;
        cr.level = 4;
        const auto cantor = generate(cr);
        const SnowflakeView cv(cantor, 1.0);
        for (double s : {cantor.mesh(), 0.2, 1.5}) {
            const auto cover = build_interval_cover(cantor, s);
            CHECK(verify_cover(cover, cv).ok());
            CHECK(cover.color_count <= 2);
            CHECK(cover.achieved_c <= 5.0);
        }
    }

    SUBCASE("spaces without line coordinates are rejected") {
        SpaceRecipe sr;
        sr.kind = SpaceKind::StarTree;
        sr.arms = 2;
        sr.depth = 2;
        const auto star = generate(sr);  // no coords
        CHECK_THROWS_AS(build_interval_cover(star, 1.0), ParameterError);

        SpaceRecipe gr;
        gr.kind = SpaceKind::Grid2d;
        gr.side = 3;
        const auto grid = generate(gr);  // coords, but y != 0
        CHECK_THROWS_AS(build_interval_cover(grid, 1.0), ParameterError);
    }
}

TEST_CASE("hierarchy window for the unit-length 256-point line") {
    // 256 points spanning [0,1]: mesh 1/255, diameter 1.
    const auto m = testsupport::make_unit_line(256);
    const auto h = build_hierarchy(m, 0.5, 462.0, 1e-3, CoverScheme::Interval);

    CHECK(h.j_hi == 0);  // 462^0 = 1 >= diam = 1
    CHECK(h.j_lo == -4);
    CHECK(h.window_size() == 5);
    CHECK(h.global_color_count == 2);
    CHECK(h.global_c <= 5.0);

    // The tail bound below the window is under the tolerance target, and one
    // scale higher it is not (j_lo is the largest qualifying scale).
    const double target = 1e-3 * h.min_snow_distance;
    CHECK(h.tail_bound < target);
    const double geo = 1.0 - std::pow(462.0, -0.5);
    auto tail = [&](int j) {
        return 2.0 * h.global_color_count * std::pow(462.0, 0.5 * j) / geo;
    };
    CHECK(tail(h.j_lo) < target);
    CHECK(tail(h.j_lo + 1) >= target);

    for (int j = h.j_lo; j <= h.j_hi; ++j) {
        const auto& cover = h.cover_at(j);
        CHECK(cover.scale_index == j);
        CHECK(cover.scale == doctest::Approx(std::pow(462.0, j)).epsilon(1e-12));
        const SnowflakeView v(m, 1.0);
        CHECK(verify_cover(cover, v).ok());
    }

    // Coarsest scale: [0,1] sits whole inside one window of each color.
    const auto& top = h.cover_at(0);
    REQUIRE(top.members.size() == 2);
    CHECK(top.members[0].points.size() == 256);
    CHECK(top.members[1].points.size() == 256);
    CHECK(top.members[0].color != top.members[1].color);
}

TEST_CASE("hierarchy window for the unit-spacing 256-point line") {
    // Diameter 255 pushes the top scale to j = 1 (462 >= 255 > 1).
    SpaceRecipe r;
    r.kind = SpaceKind::Interval;
    r.points = 256;
    const auto m = generate(r);
    const auto h = build_hierarchy(m, 0.5, 462.0, 1e-3, CoverScheme::Interval);
    CHECK(h.j_hi == 1);
    CHECK(h.j_lo == -3);
    CHECK(h.window_size() == 5);
    CHECK(h.global_color_count == 2);
}

TEST_CASE("hierarchy edge cases and rejections") {
    const auto line = testsupport::make_line(8, 1.0);

    SUBCASE("single point gives an empty window") {
        const auto p = testsupport::make_line(1, 1.0);
        const auto h = build_hierarchy(p, 0.5, 462.0, 1e-3, CoverScheme::Greedy);
        CHECK(h.empty_window());
        CHECK(h.window_size() == 0);
        CHECK(h.covers.empty());
    }

    SUBCASE("parameters are validated") {
        CHECK_THROWS_AS(build_hierarchy(line, 1.0, 462.0, 1e-3, CoverScheme::Greedy),
                        ParameterError);
        CHECK_THROWS_AS(build_hierarchy(line, 0.0, 462.0, 1e-3, CoverScheme::Greedy),
                        ParameterError);
        CHECK_THROWS_AS(build_hierarchy(line, 0.5, 1.9, 1e-3, CoverScheme::Greedy),
                        ParameterError);
        CHECK_THROWS_AS(build_hierarchy(line, 0.5, 462.0, 0.0, CoverScheme::Greedy),
                        ParameterError);
    }

    SUBCASE("cover_at rejects scales outside the window") {
        const auto h = build_hierarchy(line, 0.5, 462.0, 1e-3, CoverScheme::Greedy);
        CHECK_THROWS_AS(h.cover_at(h.j_hi + 1), ParameterError);
        CHECK_THROWS_AS(h.cover_at(h.j_lo - 1), ParameterError);
    }

    SUBCASE("huge distance spreads overflow the window cap") {
        // Distances spanning twelve orders of magnitude at r = 2 would need
        // far more than 64 scales.
        std::vector<double> d{0.0, 1e-12, 1.0, 1e-12, 0.0, 1.0, 1.0, 1.0, 0.0};
        FiniteMetricSpace tiny(3, std::move(d), 1.0, "spread-3");
        CHECK_THROWS_AS(build_hierarchy(tiny, 0.5, 2.0, 1e-3, CoverScheme::Greedy),
                        ConfigurationError);
    }
}

TEST_CASE("hierarchy covers verify on random clouds") {
    SpaceRecipe r;
    r.kind = SpaceKind::RandomCloud;
    r.points = 30;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        r.seed = seed;
        const auto m = generate(r);
        CAPTURE(m.label());
        const auto h = build_hierarchy(m, 0.5, 462.0, 1e-2, CoverScheme::Greedy);
        CHECK_FALSE(h.empty_window());
        const SnowflakeView v(m, 1.0);
        int coarse_k = 0;
        for (int j = h.j_lo; j <= h.j_hi; ++j) {
            const auto& cover = h.cover_at(j);
            const auto check = verify_cover(cover, v);
            CHECK(check.ok());
            CHECK(cover.color_count <= h.global_color_count);
            CHECK(cover.achieved_c <= h.global_c);
            if (j == h.j_hi) coarse_k = cover.color_count;
        }
        // At the top scale r^j >= diam, so the cover is one whole-space member.
        CHECK(coarse_k == 1);
        CHECK(h.cover_at(h.j_hi).members.size() == 1);
    }
}
