#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "vineprune/assessments.hpp"
#include "vineprune/errors.hpp"
#include "vineprune/synthetic.hpp"

using namespace vineprune;

TEST_SUITE_BEGIN("assessments");

namespace {

constexpr double kPi = 3.141592653589793;

// Minimal hand-built model: classes and links only, for the structural
// assessments.
class TreeFixture {
public:
    int add(OrganClass organ_class, std::optional<int> parent = std::nullopt) {
        GrapevineItem item;
        item.instance.instance_id = int(model_.items.size());
        item.instance.organ_class = organ_class;
        item.instance.mask = Mask(8, 8);
        item.instance.mask.set(0, 0);
        item.parent = parent;
        model_.items.push_back(std::move(item));
        const int id = int(model_.items.size()) - 1;
        if (parent) model_.items[size_t(*parent)].children.push_back(id);
        if (organ_class == OrganClass::MainCordon) model_.roots.push_back(id);
        return id;
    }

    PlantModel& model() { return model_; }

private:
    PlantModel model_;
};

GrapevineItem cane_item(int width_px, const BBox& rect, int scene = 64) {
    GrapevineItem item;
    item.instance = test::record_from_rects(0, OrganClass::Cane, scene, scene, {rect});
    (void)width_px;
    return item;
}

} // namespace

TEST_CASE("location_from_row: worked dorsal/ventral/intermediate cases") {
    // y = 0, d = 40, alpha = pi/2: dorsal threshold 20 * (1 - cos(pi/4)) ~ 5.858.
    CHECK(location_from_row(5.0, 0.0, 40.0, kPi / 2, kPi / 2) == RegionLocation::Dorsal);
    // Ventral threshold 40 - 5.858 ~ 34.14; row 36 is past it.
    CHECK(location_from_row(36.0, 0.0, 40.0, kPi / 2, kPi / 2) == RegionLocation::Ventral);
    // Mid-cordon row is neither.
    CHECK(location_from_row(20.0, 0.0, 40.0, kPi / 2, kPi / 2) == RegionLocation::Intermediate);
}

TEST_CASE("location_from_row: the three classes partition every input") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> y_top(0.0, 200.0), d_mc(1.0, 80.0),
        angle(1e-6, kPi), row(-50.0, 300.0);
    for (int i = 0; i < 500; ++i) {
        const double y = y_top(rng), d = d_mc(rng), av = angle(rng), ad = angle(rng);
        const double y_pr = row(rng);

        const double dorsal_limit = y + (d / 2) * (1 - std::cos(ad / 2));
        const double ventral_limit = y + d - (d / 2) * (1 - std::cos(av / 2));
        const bool dorsal = y_pr < dorsal_limit;
        const bool ventral = y_pr > ventral_limit;
        CHECK(!(dorsal && ventral));  // thresholds never overlap for angles <= pi

        const RegionLocation got = location_from_row(y_pr, y, d, av, ad);
        const RegionLocation expected = dorsal    ? RegionLocation::Dorsal
                                        : ventral ? RegionLocation::Ventral
                                                  : RegionLocation::Intermediate;
        CHECK(got == expected);
    }
}

TEST_CASE("classify_location: reads diameter and top row off the cordon mask") {
    // Cordon rows 10..49 (d = 40) across cols 20..119.
    GrapevineItem cordon;
    cordon.instance =
        test::record_from_rects(0, OrganClass::MainCordon, 140, 80, {{20, 10, 119, 49}});

    GrapevineItem region;
    region.origin_px = {60.0, 15.0};
    CHECK(classify_location(region, cordon, kPi / 2, kPi / 2) == RegionLocation::Dorsal);

    region.origin_px = {60.0, 46.0};
    CHECK(classify_location(region, cordon, kPi / 2, kPi / 2) == RegionLocation::Ventral);

    region.origin_px = {60.0, 30.0};
    CHECK(classify_location(region, cordon, kPi / 2, kPi / 2) == RegionLocation::Intermediate);

    // Off-cordon columns clamp to the nearest one and flag it.
    std::vector<std::string> flags;
    region.origin_px = {130.0, 15.0};
    classify_location(region, cordon, kPi / 2, kPi / 2, &flags);
    CHECK(flags == std::vector<std::string>{"origin_outside_cordon_columns"});
}

TEST_CASE("count_canes: direct, empty, and mixed subtrees") {
    TreeFixture fixture;
    const int cordon = fixture.add(OrganClass::MainCordon);

    const int spur = fixture.add(OrganClass::Spur, cordon);
    fixture.add(OrganClass::Cane, spur);
    fixture.add(OrganClass::Cane, spur);
    CHECK(count_canes(fixture.model(), spur) == 2);

    const int bare_arm = fixture.add(OrganClass::Arm, cordon);
    CHECK(count_canes(fixture.model(), bare_arm) == 0);

    // Arm -> spur -> cane plus one cane directly on the arm.
    const int arm = fixture.add(OrganClass::Arm, cordon);
    const int arm_spur = fixture.add(OrganClass::Spur, arm);
    fixture.add(OrganClass::Cane, arm_spur);
    fixture.add(OrganClass::Cane, arm);
    CHECK(count_canes(fixture.model(), arm) == 2);

    // Brute-force count over a flattened subtree agrees.
    std::vector<int> stack{arm};
    int brute = 0;
    while (!stack.empty()) {
        const GrapevineItem& item = fixture.model().item(stack.back());
        stack.pop_back();
        if (item.organ_class() == OrganClass::Cane) ++brute;
        for (int c : item.children) stack.push_back(c);
    }
    CHECK(brute == count_canes(fixture.model(), arm));
}

TEST_CASE("classify_growth_direction: axis cases and the slope threshold") {
    const Point3 o{0, 0, 1};
    CHECK(classify_growth_direction(o, Point3{0, 0.3, 1}, 0.578, 0.578) ==
          GrowthDirection::Vertical);
    // |dx| / |dy| = 5 clears the 0.578 gate.
    CHECK(classify_growth_direction(o, Point3{0.5, 0.1, 1}, 0.578, 0.578) ==
          GrowthDirection::NotVertical);
    // No vertical extent at all.
    CHECK(classify_growth_direction(o, Point3{0.2, 0.0, 1}, 0.578, 0.578) ==
          GrowthDirection::NotVertical);
    // Depth-limited: the cross ratio gates too.
    CHECK(classify_growth_direction(o, Point3{0, 0.3, 1.5}, 0.578, 0.578) ==
          GrowthDirection::NotVertical);
    CHECK(classify_growth_direction(std::nullopt, Point3{0, 0.3, 1}, 0.578, 0.578) ==
          GrowthDirection::Unknown);
}

TEST_CASE("classify_growth_direction: symmetric under endpoint swap") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> coord(-1.0, 1.0), depth(0.5, 3.0);
    for (int i = 0; i < 300; ++i) {
        const Point3 a{coord(rng), coord(rng), depth(rng)};
        const Point3 b{coord(rng), coord(rng), depth(rng)};
        CHECK(classify_growth_direction(a, b, 0.578, 0.578) ==
              classify_growth_direction(b, a, 0.578, 0.578));
    }
}

TEST_CASE("estimate_vigor: 5 px cane at 1 m with fx = 1000 measures 4 mm") {
    const CameraIntrinsics intr = test::test_intrinsics(1000, 1000, 32, 32);
    const GrapevineItem cane = cane_item(5, {10, 5, 14, 55});

    DepthImage at_1m(64, 64, 1000);
    auto vigor = estimate_vigor(cane, at_1m, intr, 2, 24);
    REQUIRE(vigor.has_value());
    CHECK(*vigor == doctest::Approx(0.004).epsilon(1e-9));

    // Thickness scales linearly with depth.
    DepthImage at_2m(64, 64, 2000);
    auto deeper = estimate_vigor(cane, at_2m, intr, 2, 24);
    REQUIRE(deeper.has_value());
    CHECK(*deeper == doctest::Approx(0.008).epsilon(1e-9));
}

TEST_CASE("estimate_vigor: row-wise mean over varying width") {
    const CameraIntrinsics intr = test::test_intrinsics(1000, 1000, 32, 32);
    // 4 px wide over rows 5..24, 6 px wide over rows 25..44: mean of
    // 0.003 and 0.005.
    GrapevineItem cane;
    cane.instance = test::record_from_rects(0, OrganClass::Cane, 64, 64,
                                            {{10, 5, 13, 24}, {9, 25, 14, 44}});

    DepthImage depth(64, 64, 1000);
    auto vigor = estimate_vigor(cane, depth, intr, 2, 24);
    REQUIRE(vigor.has_value());
    CHECK(*vigor == doctest::Approx(0.004).epsilon(1e-9));
}

TEST_CASE("estimate_vigor: invariant under horizontal translation") {
    const CameraIntrinsics intr = test::test_intrinsics(800, 800, 64, 64);
    DepthImage depth(128, 128, 1200);

    const GrapevineItem here = cane_item(5, {10, 20, 14, 90}, 128);
    const GrapevineItem there = cane_item(5, {90, 20, 94, 90}, 128);
    auto a = estimate_vigor(here, depth, intr, 2, 24);
    auto b = estimate_vigor(there, depth, intr, 2, 24);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(*a == doctest::Approx(*b).epsilon(1e-12));
}

TEST_CASE("estimate_vigor: horizontal canes are measured column-wise") {
    const CameraIntrinsics intr = test::test_intrinsics(1000, 1000, 32, 32);
    const GrapevineItem cane = cane_item(5, {5, 10, 55, 14});  // wide, not tall
    DepthImage depth(64, 64, 1000);
    auto vigor = estimate_vigor(cane, depth, intr, 2, 24);
    REQUIRE(vigor.has_value());
    CHECK(*vigor == doctest::Approx(0.004).epsilon(1e-9));
}

TEST_CASE("estimate_vigor: no usable depth anywhere is unknown") {
    const CameraIntrinsics intr = test::test_intrinsics();
    const GrapevineItem cane = cane_item(5, {10, 5, 14, 55});
    DepthImage empty(64, 64, 0);
    CHECK(!estimate_vigor(cane, empty, intr, 2, 4).has_value());
}

TEST_CASE("classify_origin: parent class decides new/replacement") {
    TreeFixture fixture;
    const int cordon = fixture.add(OrganClass::MainCordon);
    const int spur_on_cordon = fixture.add(OrganClass::Spur, cordon);
    const int arm = fixture.add(OrganClass::Arm, cordon);
    const int cane_on_arm = fixture.add(OrganClass::Cane, arm);
    const int spur2 = fixture.add(OrganClass::Spur, cordon);
    const int cane_on_spur = fixture.add(OrganClass::Cane, spur2);
    const int orphan = fixture.add(OrganClass::Cane);

    CHECK(classify_origin(fixture.model(), spur_on_cordon) == std::pair{true, false});
    CHECK(classify_origin(fixture.model(), cane_on_arm) == std::pair{false, true});
    CHECK(classify_origin(fixture.model(), cane_on_spur) == std::pair{false, false});
    CHECK_THROWS_AS(classify_origin(fixture.model(), orphan), AssessmentError);
}

TEST_CASE("adjacent_distance: worked example, lonely regions, metric switch") {
    const std::vector<std::optional<Point3>> origins{Point3{0.0, 0.1, 1.0},
                                                     Point3{0.05, 0.1, 1.0},
                                                     Point3{0.30, 0.1, 1.0}};
    CHECK(adjacent_distance(origins, 1, AdjacencyMetric::Max) == doctest::Approx(0.25));
    CHECK(adjacent_distance(origins, 1, AdjacencyMetric::Min) == doctest::Approx(0.05));

    const std::vector<std::optional<Point3>> lonely{Point3{0, 0, 1}};
    CHECK(std::isinf(adjacent_distance(lonely, 0, AdjacencyMetric::Max)));

    // Two regions 0.04 m apart: the missing outer neighbor dominates max.
    const std::vector<std::optional<Point3>> pair{Point3{0, 0, 1}, Point3{0.04, 0, 1}};
    CHECK(std::isinf(adjacent_distance(pair, 0, AdjacencyMetric::Max)));
    CHECK(std::isinf(adjacent_distance(pair, 1, AdjacencyMetric::Max)));
    CHECK(adjacent_distance(pair, 0, AdjacencyMetric::Min) == doctest::Approx(0.04));

    // Missing 3D origin.
    const std::vector<std::optional<Point3>> holed{Point3{0, 0, 1}, std::nullopt};
    CHECK(std::isinf(adjacent_distance(holed, 1, AdjacencyMetric::Max)));
}

TEST_CASE("adjacent_distance: symmetric under reversing the region order") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> coord(-0.5, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::optional<Point3>> origins;
        const size_t n = 2 + rng() % 5;
        for (size_t i = 0; i < n; ++i)
            origins.push_back(Point3{coord(rng), coord(rng), 1.0 + coord(rng)});

        std::vector<std::optional<Point3>> reversed(origins.rbegin(), origins.rend());
        for (size_t i = 0; i < n; ++i) {
            const double forward = adjacent_distance(origins, i, AdjacencyMetric::Max);
            const double backward = adjacent_distance(reversed, n - 1 - i, AdjacencyMetric::Max);
            CHECK(forward == doctest::Approx(backward));
        }
    }
}

TEST_CASE("assess_all: five spurs make five regions in cordon order") {
    SceneSpec spec = default_scene_spec(0);
    spec.units.clear();
    for (int k = 0; k < 5; ++k) {
        UnitSpec unit;
        unit.kind = UnitKind::Spur;
        unit.center_col = 100 + 100 * k;
        unit.canes.push_back(CaneSpec{});
        spec.units.push_back(unit);
    }
    const SceneBundle bundle = generate_scene(spec);

    PipelineConfig config;
    config.intrinsics = bundle.intrinsics;
    const PlantModel model =
        assemble_model(bundle.records, bundle.depth, bundle.intrinsics, config);
    const auto assessments = assess_all(model, *model.depth, bundle.intrinsics, config);

    REQUIRE(assessments.size() == 5);
    double last_x = -1.0;
    for (const auto& [region, a] : assessments) {
        const double x = model.item(region.item_id).origin_px.x;
        CHECK(x > last_x);
        last_x = x;
        CHECK(a.has_basal_cane);
        CHECK(a.cane_count == 1);
        CHECK(a.location == RegionLocation::Dorsal);
        CHECK(a.growth == GrowthDirection::Vertical);
        CHECK(!a.is_new);
        CHECK(!a.is_replacement);
    }
}

TEST_CASE("assess_all: a bare arm region has no canes and unknown growth") {
    std::vector<InstanceRecord> records;
    records.push_back(
        test::record_from_rects(0, OrganClass::MainCordon, 200, 200, {{10, 100, 189, 119}}));
    records.push_back(test::record_from_rects(1, OrganClass::Arm, 200, 200, {{56, 70, 64, 100}}));

    PipelineConfig config;
    config.intrinsics = test::test_intrinsics(600, 600, 100, 100);
    auto depth = std::make_shared<DepthImage>(200, 200, 1000);
    const PlantModel model = assemble_model(records, depth, config.intrinsics, config);
    const auto assessments = assess_all(model, *model.depth, config.intrinsics, config);

    REQUIRE(assessments.size() == 1);
    const RegionAssessment& a = assessments[0].second;
    CHECK(a.cane_count == 0);
    CHECK(a.growth == GrowthDirection::Unknown);
    CHECK(!a.has_basal_cane);
    CHECK(!a.vigor_m.has_value());
}

TEST_SUITE_END();
