#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "snowfold/covers.hpp"
#include "snowfold/embedding.hpp"
#include "snowfold/lightness.hpp"
#include "snowfold/spaces.hpp"
#include "test_support.hpp"

using namespace snowfold;

namespace {

// Map each point to its first coordinate.
PointValues x_projection(const FiniteMetricSpace& m) {
    PointValues f = PointValues::zeros(m.size(), 1);
    REQUIRE(m.has_coords());
    for (std::size_t i = 0; i < m.size(); ++i) f.value(PointId(i), 0) = m.coords()[i][0];
    return f;
}

PointValues restrict_rows(const PointValues& f, std::size_t count) {
    PointValues out = PointValues::zeros(count, f.dim);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t k = 0; k < f.dim; ++k)
            out.value(PointId(i), k) = f.value(PointId(i), k);
    return out;
}

} // namespace

TEST_CASE("Lipschitz constants") {
    SUBCASE("identity on the unit line") {
        const auto m = testsupport::make_line(3, 1.0);
        const SnowflakeView v(m, 1.0);
        const auto [lip, wit] = lipschitz_constant(x_projection(m), v);
        CHECK(lip == 1.0);
        CHECK(wit.a == 0);  // first maximizing pair in scan order
        CHECK(wit.b == 1);
    }

    SUBCASE("snowflaking the domain steepens short steps") {
        // Points at 0, 1, 4 on a line, f = position, domain d^(1/2):
        // ratios 1/1, 4/2, 3/sqrt(3); the long pair wins.
        std::vector<double> d{0, 1, 4, 1, 0, 3, 4, 3, 0};
        const FiniteMetricSpace m(3, std::move(d), 1.0, "three-on-a-line");
        const SnowflakeView v(m, 0.5);
        PointValues f = PointValues::zeros(3, 1);
        f.value(1, 0) = 1.0;
        f.value(2, 0) = 4.0;
        const auto [lip, wit] = lipschitz_constant(f, v);
        CHECK(lip == 2.0);
        CHECK(wit.a == 0);
        CHECK(wit.b == 2);
    }

    SUBCASE("constant maps have constant zero") {
        const auto m = testsupport::make_line(4, 1.0);
        const auto [lip, wit] = lipschitz_constant(PointValues::zeros(4, 2),
                                                   SnowflakeView(m, 1.0));
        CHECK(lip == 0.0);
        CHECK(wit.a == 0);
        CHECK(wit.b == 0);
    }

    SUBCASE("collapsed domain pairs with distinct images blow up") {
        std::vector<double> d{0, 0, 0, 0};  // two points at distance zero
        const FiniteMetricSpace m(2, std::move(d), 1.0, "glued-pair");
        PointValues f = PointValues::zeros(2, 1);
        f.value(1, 0) = 1.0;
        const auto [lip, wit] = lipschitz_constant(f, SnowflakeView(m, 1.0));
        CHECK(lip == std::numeric_limits<double>::infinity());
        CHECK(wit.a == 0);
        CHECK(wit.b == 1);
    }

    SUBCASE("fewer than two points is a parameter error") {
        const auto m = testsupport::make_line(1, 1.0);
        CHECK_THROWS_AS(lipschitz_constant(PointValues::zeros(1, 1), SnowflakeView(m, 1.0)),
                        ParameterError);
    }

    SUBCASE("size mismatch") {
        const auto m = testsupport::make_line(4, 1.0);
        CHECK_THROWS_AS(lipschitz_constant(PointValues::zeros(3, 1), SnowflakeView(m, 1.0)),
                        MismatchError);
    }
}

TEST_CASE("probe radii interleave distances with midpoints") {
    const auto m = testsupport::make_line(3, 1.0);
    const auto radii = probe_radii(SnowflakeView(m, 1.0));
    CHECK(radii == std::vector<double>{1.0, 1.5, 2.0});

    const auto single = testsupport::make_line(1, 1.0);
    CHECK(probe_radii(SnowflakeView(single, 1.0)).empty());
}

TEST_CASE("lightness of a grid projection") {
    SpaceRecipe r;
    r.kind = SpaceKind::Grid2d;
    r.side = 2;
    const auto m = generate(r);
    const SnowflakeView v(m, 1.0);
    const auto light = lightness_constant(x_projection(m), v);

    // At probe radius 1 everything maps into the ball and stays 1-connected,
    // so the worst component is the whole square with diameter sqrt(2).
    CHECK(light.constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(light.witness.radius == 1.0);
    CHECK(light.witness.center == 0);
    CHECK(light.witness.component == std::vector<PointId>{0, 1, 2, 3});
}

TEST_CASE("lightness of the identity on a line is two") {
    const auto m = testsupport::make_line(6, 1.0);
    const SnowflakeView v(m, 1.0);
    const auto light = lightness_constant(x_projection(m), v);
    // Radius 1 around an interior point grabs both neighbors: diameter 2.
    CHECK(light.constant == 2.0);
    CHECK(light.witness.radius == 1.0);
}

TEST_CASE("single-point domains produce a zero report without erroring") {
    const auto m = testsupport::make_line(1, 1.0);
    const auto report = lipschitz_light_report(PointValues::zeros(1, 2), SnowflakeView(m, 1.0));
    CHECK(report.lip_constant == 0.0);
    CHECK(report.light_constant == 0.0);
    CHECK(report.probe_radii.empty());
    CHECK(report.pass);
}

TEST_CASE("domination pruning never changes the answer") {
    SpaceRecipe r;
    r.kind = SpaceKind::RandomCloud;
    r.points = 30;
    r.seed = 13;
    const auto m = generate(r);
    const SnowflakeView v(m, 0.7);
    const auto f = x_projection(m);

    LightnessOptions full_opts;
    full_opts.per_radius = true;
    const auto pruned = lightness_constant(f, v);
    const auto full = lightness_constant(f, v, full_opts);

    CHECK(pruned.constant == full.constant);
    CHECK(pruned.witness.radius == full.witness.radius);
    CHECK(pruned.witness.center == full.witness.center);
    CHECK(pruned.witness.component == full.witness.component);
    CHECK(pruned.per_radius.empty());

    REQUIRE_FALSE(full.per_radius.empty());
    CHECK(full.per_radius.size() == probe_radii(v).size());
    double best = 0.0;
    for (const auto& row : full.per_radius) {
        CHECK(row.evaluated);
        best = std::max(best, row.max_ratio);
    }
    CHECK(best == full.constant);
}

TEST_CASE("reports honor configured ceilings") {
    const auto m = testsupport::make_line(6, 1.0);
    const SnowflakeView v(m, 1.0);
    const auto f = x_projection(m);  // lip 1, light 2

    SUBCASE("no ceilings, vacuous pass") {
        CHECK(lipschitz_light_report(f, v).pass);
    }
    SUBCASE("both ceilings met") {
        const auto rep = lipschitz_light_report(f, v, 2.0, 1.0);
        CHECK(rep.pass);
        CHECK(rep.light_ceiling == 2.0);
        CHECK(rep.lip_ceiling == 1.0);
    }
    SUBCASE("light ceiling missed") {
        CHECK_FALSE(lipschitz_light_report(f, v, 1.9, {}).pass);
    }
    SUBCASE("lip ceiling missed") {
        CHECK_FALSE(lipschitz_light_report(f, v, {}, 0.9).pass);
    }
}

TEST_CASE("the sweep is deterministic") {
    SpaceRecipe r;
    r.kind = SpaceKind::RandomCloud;
    r.points = 25;
    r.seed = 4;
    const auto m = generate(r);
    const SnowflakeView v(m, 0.5);
    const auto f = x_projection(m);
    const auto a = lightness_constant(f, v);
    const auto b = lightness_constant(f, v);
    CHECK(a.constant == b.constant);
    CHECK(a.witness.radius == b.witness.radius);
    CHECK(a.witness.center == b.witness.center);
    CHECK(a.witness.component == b.witness.component);
}

TEST_CASE("restricting to a prefix cannot raise the lightness constant") {
    // Prefix segments of a line reuse a subset of the full probe family, and
    // every restricted probe component embeds in a full one. The small scale
    // ratio keeps a cover scale inside the gap structure so the fold is
    // non-constant and the comparison has teeth.
    const auto full_space = testsupport::make_unit_line(12);
    const auto h = build_hierarchy(full_space, 0.5, 8.0, 1e-3, CoverScheme::Interval);
    const auto fold = build_folding_map(h, 0);

    const SnowflakeView full_view(full_space, 0.5);
    const double full_light = lightness_constant(fold.values, full_view).constant;

    for (std::size_t count : {4, 8, 10}) {
        const auto prefix_space = testsupport::make_line(count, 1.0 / 11.0);
        const SnowflakeView prefix_view(prefix_space, 0.5);
        const auto prefix_values = restrict_rows(fold.values, count);
        const double prefix_light =
            lightness_constant(prefix_values, prefix_view).constant;
        CAPTURE(count);
        CHECK(prefix_light <= full_light + 1e-12);
    }
}

TEST_CASE("diameter preservation profiles") {
    SUBCASE("identity on a line preserves every diameter exactly") {
        const auto m = testsupport::make_line(8, 1.0);
        const auto profile =
            diameter_preservation_profile(x_projection(m), SnowflakeView(m, 1.0));
        // Mesh-connected subsets of a path are its 28 multi-point runs.
        CHECK(profile.samples == 28);
        CHECK(profile.min_ratio == 1.0);
        CHECK(profile.max_ratio == 1.0);
        CHECK_FALSE(profile.degenerate);
    }

    SUBCASE("constant maps are degenerate") {
        const auto m = testsupport::make_line(8, 1.0);
        const auto profile =
            diameter_preservation_profile(PointValues::zeros(8, 1), SnowflakeView(m, 1.0));
        CHECK(profile.degenerate);
        CHECK(profile.max_ratio == 0.0);
    }

    SUBCASE("large spaces fall back to seeded sampling") {
        SpaceRecipe r;
        r.kind = SpaceKind::RandomCloud;
        r.points = 40;
        r.seed = 2;
        const auto m = generate(r);
        const SnowflakeView v(m, 1.0);
        const auto f = x_projection(m);
        const auto a = diameter_preservation_profile(f, v, 77, 300);
        const auto b = diameter_preservation_profile(f, v, 77, 300);
        CHECK(a.samples >= 300);
        CHECK(a.min_ratio == b.min_ratio);
        CHECK(a.max_ratio == b.max_ratio);
        CHECK(a.min_ratio <= a.max_ratio);
        CHECK(a.max_ratio <= 1.0 + 1e-12);  // projections never stretch
    }

    SUBCASE("size mismatch") {
        const auto m = testsupport::make_line(4, 1.0);
        CHECK_THROWS_AS(
            diameter_preservation_profile(PointValues::zeros(3, 1), SnowflakeView(m, 1.0)),
            MismatchError);
    }
}

TEST_CASE("measured lightness sits under the two-sided distortion bound") {
    // If every mesh-connected set has image diameter within [1/a, a] of its
    // snowflaked diameter and the base space has turning constant t, then the
    // probe sweep cannot exceed 2a(1 + a b^2) with b = t^epsilon.
    const double epsilon = 0.5;
    auto check_bound = [&](const FiniteMetricSpace& m, CoverScheme scheme,
                           double ratio) {
        CAPTURE(m.label());
        const auto h = build_hierarchy(m, epsilon, ratio, 1e-3, scheme);
        const auto fold = build_folding_map(h, 0);
        const SnowflakeView snow(m, epsilon);

        const auto profile = diameter_preservation_profile(fold.values, snow);
        REQUIRE(profile.samples > 0);
        REQUIRE(profile.min_ratio > 0.0);
        const double a =
            std::max(profile.max_ratio, 1.0 / profile.min_ratio);
        const double b = std::pow(bounded_turning_constant(m), epsilon);
        const double light = lightness_constant(fold.values, snow).constant;
        CHECK(light <= 2.0 * a * (1.0 + a * b * b) + 1e-9);
    };

    // All fixtures fold at r = 8 so a cover scale lands inside their gap
    // structure; huge ratios skip straight from "one window covers everything"
    // to "every point is its own member", collapsing set images and zeroing
    // min_ratio. The Heisenberg ball is the greedy-scheme fixture because its
    // well-separated points keep the fold injective at mesh resolution.
    check_bound(testsupport::make_unit_line(12), CoverScheme::Interval, 8.0);
    {
        SpaceRecipe r;
        r.kind = SpaceKind::HeisenbergBall;
        r.radius = 1;
        check_bound(generate(r), CoverScheme::Greedy, 8.0);
    }
    {
        SpaceRecipe r;
        r.kind = SpaceKind::Cantor;
        r.level = 2;
        check_bound(generate(r), CoverScheme::Interval, 8.0);
    }
}
