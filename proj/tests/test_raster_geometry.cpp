#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "vineprune/errors.hpp"
#include "vineprune/raster.hpp"

using namespace vineprune;
using vineprune::test::mask_from_rects;
using vineprune::test::test_intrinsics;

TEST_SUITE_BEGIN("raster_geometry");

TEST_CASE("dilate: single pixel with radius 1 becomes the 5-pixel plus") {
    Mask mask(9, 9);
    mask.set(4, 4);
    const Mask out = dilate(mask, 1);

    CHECK(out.count() == 5);
    const std::set<Pixel> expected{{4, 4}, {3, 4}, {5, 4}, {4, 3}, {4, 5}};
    for (const Pixel& p : out.pixels()) CHECK(expected.count(p) == 1);
}

TEST_CASE("dilate: full-frame mask is unchanged, empty mask stays empty") {
    Mask full = mask_from_rects(6, 6, {{0, 0, 5, 5}});
    CHECK(dilate(full, 3) == full);

    Mask empty(6, 6);
    CHECK(dilate(empty, 2).empty());
}

TEST_CASE("dilate: monotone in the mask and in the radius") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        Mask mask(32, 32);
        const int n = 1 + int(rng() % 12);
        for (int i = 0; i < n; ++i) mask.set(int(rng() % 32), int(rng() % 32));

        const Mask d1 = dilate(mask, 1);
        const Mask d2 = dilate(mask, 2);
        for (const Pixel& p : mask.pixels()) CHECK(d1.at(p.x, p.y));
        for (const Pixel& p : d1.pixels()) CHECK(d2.at(p.x, p.y));
    }
}

TEST_CASE("overlap_labels: hand-built 8x8 overlap") {
    // Instance 0 occupies rows 0..3, the probe mask rows 2..5: two shared rows.
    LabelMap labels(8, 8);
    for (int y = 0; y <= 3; ++y)
        for (int x = 0; x < 8; ++x) labels.stamp(x, y, 0);

    const Mask probe = mask_from_rects(8, 8, {{0, 2, 7, 5}});
    auto overlaps = overlap_labels(labels, probe);
    REQUIRE(overlaps.size() == 1);
    CHECK(overlaps[0].first == 0);
    CHECK(overlaps[0].second.size() == 16);  // 8 cols x 2 rows
}

TEST_CASE("overlap_labels: disjoint mask yields nothing, two instances partition") {
    LabelMap labels(8, 8);
    for (int x = 0; x < 8; ++x) {
        labels.stamp(x, 0, 0);
        labels.stamp(x, 7, 1);
    }

    const Mask far_away = mask_from_rects(8, 8, {{0, 3, 7, 4}});
    CHECK(overlap_labels(labels, far_away).empty());

    const Mask both = mask_from_rects(8, 8, {{0, 0, 7, 7}});
    auto overlaps = overlap_labels(labels, both);
    REQUIRE(overlaps.size() == 2);
    std::set<Pixel> seen;
    for (const auto& [id, pixels] : overlaps)
        for (const Pixel& p : pixels) CHECK(seen.insert(p).second);
}

TEST_CASE("overlap_labels: completeness against a brute-force scan") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        LabelMap labels(32, 32);
        Mask mask(32, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) {
                if (rng() % 4 == 0) labels.stamp(x, y, rng() % 3);
                if (rng() % 3 == 0) mask.set(x, y);
            }

        std::set<Pixel> expected;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                if (mask.at(x, y) && labels.raw(x, y) != 0) expected.insert({x, y});

        std::set<Pixel> got;
        for (const auto& [id, pixels] : overlap_labels(labels, mask))
            for (const Pixel& p : pixels) got.insert(p);
        CHECK(got == expected);
    }
}

TEST_CASE("slot_index: boundary and interior bands") {
    const BBox bbox{10, 20, 19, 119};  // tall box, major axis vertical

    CHECK(slot_index(bbox, {{14, 20}}, 4) == 1);   // top edge
    CHECK(slot_index(bbox, {{14, 119}}, 4) == 4);  // bottom edge clamps into band 4
    // Centroid at 55% of the major axis: floor(0.55 * 4) + 1 = 3.
    const int y55 = 20 + int(std::lround(0.55 * 99));
    CHECK(slot_index(bbox, {{14, y55}}, 4) == 3);
}

TEST_CASE("slot_index: invariant under uniform translation") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 4 + int(rng() % 30);
        const int h = 4 + int(rng() % 30);
        BBox bbox{0, 0, w - 1, h - 1};
        std::vector<Pixel> pixels;
        const int n = 1 + int(rng() % 6);
        for (int i = 0; i < n; ++i) pixels.push_back({int(rng() % w), int(rng() % h)});

        const int base = slot_index(bbox, pixels, 4);
        const int dx = int(rng() % 100), dy = int(rng() % 100);
        BBox moved{bbox.x0 + dx, bbox.y0 + dy, bbox.x1 + dx, bbox.y1 + dy};
        std::vector<Pixel> moved_pixels;
        for (const Pixel& p : pixels) moved_pixels.push_back({p.x + dx, p.y + dy});
        CHECK(slot_index(moved, moved_pixels, 4) == base);
    }
}

TEST_CASE("deproject: principal point, focal scaling, and rejection of bad depth") {
    const CameraIntrinsics intr = test_intrinsics(100.0, 100.0, 50.0, 40.0);

    const Point3 center = deproject({50.0, 40.0}, 1.0, intr);
    CHECK(center.x == doctest::Approx(0.0));
    CHECK(center.y == doctest::Approx(0.0));
    CHECK(center.z == doctest::Approx(1.0));

    // fx = 100, col 50 px right of center, depth 2 m -> x = 1 m.
    const Point3 off = deproject({100.0, 40.0}, 2.0, intr);
    CHECK(off.x == doctest::Approx(1.0));

    CHECK_THROWS_AS(deproject({10.0, 10.0}, 0.0, intr), DepthError);
}

TEST_CASE("deproject/project round trip stays within half a pixel") {
    const CameraIntrinsics intr = test_intrinsics();
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> col(0.0, 639.0), row(0.0, 479.0), z(0.2, 5.0);
    for (int i = 0; i < 200; ++i) {
        const Point2 pixel{col(rng), row(rng)};
        const Point2 back = project(deproject(pixel, z(rng), intr), intr);
        CHECK(std::abs(back.x - pixel.x) < 0.5);
        CHECK(std::abs(back.y - pixel.y) < 0.5);
    }
}

TEST_CASE("estimate_real_depth: uniform field, outlier-resistant median, empty image") {
    const CameraIntrinsics intr = test_intrinsics();

    DepthImage uniform = test::uniform_depth(16, 16, 1500);
    CHECK(estimate_real_depth({8, 8}, uniform, intr) == doctest::Approx(1.5));

    // Window holding {1.0, 1.0, 1.0, 9.0} m plus invalid zeros -> median 1.0.
    DepthImage sparse(16, 16, 0);
    sparse.set(8, 8, 1000);
    sparse.set(7, 8, 1000);
    sparse.set(9, 8, 1000);
    sparse.set(8, 7, 9000);
    CHECK(estimate_real_depth({8, 8}, sparse, intr) == doctest::Approx(1.0));

    DepthImage empty(16, 16, 0);
    CHECK_THROWS_AS(estimate_real_depth({8, 8}, empty, intr), DepthError);
}

TEST_CASE("estimate_real_depth: falls back to the nearest valid pixel") {
    const CameraIntrinsics intr = test_intrinsics();
    DepthImage depth(32, 32, 0);
    depth.set(20, 10, 2000);  // only valid sample, outside the 5x5 window
    CHECK(estimate_real_depth({10, 10}, depth, intr, 2, 24) == doctest::Approx(2.0));
    CHECK_THROWS_AS(estimate_real_depth({10, 10}, depth, intr, 2, 4), DepthError);
}

TEST_CASE("connected_components: splits and ordering") {
    Mask mask = mask_from_rects(16, 16, {{1, 1, 4, 4}, {8, 8, 10, 12}});
    auto components = connected_components(mask);
    REQUIRE(components.size() == 2);
    CHECK(components[0].size() == 16);
    CHECK(components[1].size() == 15);
    CHECK(components[0].front() == Pixel{1, 1});
}

TEST_SUITE_END();
