#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "vineprune/pipeline.hpp"
#include "vineprune/synthetic.hpp"

using namespace vineprune;
namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Write a bundle to disk the way a real capture would arrive.
struct DiskScene {
    fs::path dir;
    RunOptions options;

    DiskScene(const SceneBundle& bundle, const std::string& tag) {
        dir = test::make_temp_dir(tag);
        options.annotations_path = (dir / "annotations.json").string();
        options.depth_path = (dir / "depth.png").string();
        options.out_dir = (dir / "out").string();

        std::ofstream(options.annotations_path, std::ios::binary)
            << write_coco(bundle_to_scene(bundle));
        write_depth_png(options.depth_path, *bundle.depth);
    }

    ~DiskScene() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

} // namespace

TEST_CASE("cmd_run: happy path writes all four outputs and exits 0") {
    const SceneBundle bundle = generate_scene(default_scene_spec(1));
    DiskScene scene(bundle, "run_ok");

    CHECK(cmd_run(scene.options) == 0);
    for (const char* name : {"model.json", "pruning_points.json", "overlay.png", "manifest.json"})
        CHECK(fs::exists(fs::path(scene.options.out_dir) / name));

    const json manifest = json::parse(slurp(fs::path(scene.options.out_dir) / "manifest.json"));
    CHECK(manifest.at("warnings").get<size_t>() == 0);
    CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
    for (const auto& name : manifest.at("outputs"))
        CHECK(fs::exists(fs::path(scene.options.out_dir) / name.get<std::string>()));

    const json model = json::parse(slurp(fs::path(scene.options.out_dir) / "model.json"));
    CHECK(model.at("schema_version") == 1);
    CHECK(model.at("roots").size() == 1);
}

TEST_CASE("cmd_run: byte-identical outputs across repeated runs") {
    const SceneBundle bundle = generate_scene(default_scene_spec(2));
    DiskScene scene(bundle, "run_repeat");

    REQUIRE(cmd_run(scene.options) == 0);
    const std::string model_a = slurp(fs::path(scene.options.out_dir) / "model.json");
    const std::string points_a = slurp(fs::path(scene.options.out_dir) / "pruning_points.json");

    RunOptions second = scene.options;
    second.out_dir = (scene.dir / "out2").string();
    REQUIRE(cmd_run(second) == 0);
    CHECK(slurp(fs::path(second.out_dir) / "model.json") == model_a);
    CHECK(slurp(fs::path(second.out_dir) / "pruning_points.json") == points_a);
}

TEST_CASE("cmd_run: scene without a main cordon is fatal (exit 1)") {
    SceneBundle bundle = generate_scene(default_scene_spec(3));
    bundle.records.erase(bundle.records.begin());  // drop the cordon
    for (size_t i = 0; i < bundle.records.size(); ++i)
        bundle.records[i].instance_id = int(i);
    DiskScene scene(bundle, "run_nocordon");

    CHECK(cmd_run(scene.options) == 1);
    CHECK(!fs::exists(fs::path(scene.options.out_dir) / "manifest.json"));
}

TEST_CASE("cmd_run: depth holes degrade the run to exit 2 with flags") {
    SceneBundle bundle = generate_scene(default_scene_spec(4));
    bundle.depth = std::make_shared<DepthImage>(bundle.spec.width, bundle.spec.height, 0);
    DiskScene scene(bundle, "run_warn");

    CHECK(cmd_run(scene.options) == 2);
    const json manifest = json::parse(slurp(fs::path(scene.options.out_dir) / "manifest.json"));
    CHECK(manifest.at("warnings").get<size_t>() > 0);

    const json points = json::parse(slurp(fs::path(scene.options.out_dir) /
                                          "pruning_points.json"));
    CHECK(points.at("warnings").get<size_t>() > 0);
}

TEST_CASE("cmd_run: --no-overlay skips the image") {
    const SceneBundle bundle = generate_scene(default_scene_spec(5));
    DiskScene scene(bundle, "run_noov");
    scene.options.overlay = false;

    CHECK(cmd_run(scene.options) == 0);
    CHECK(!fs::exists(fs::path(scene.options.out_dir) / "overlay.png"));
    CHECK(fs::exists(fs::path(scene.options.out_dir) / "model.json"));
}

TEST_CASE("cmd_run: mismatched depth dimensions are fatal") {
    const SceneBundle bundle = generate_scene(default_scene_spec(6));
    DiskScene scene(bundle, "run_dims");
    DepthImage small(64, 48, 1000);
    write_depth_png(scene.options.depth_path, small);
    CHECK(cmd_run(scene.options) == 1);
}

TEST_CASE("render_overlay: empty model leaves the canvas untouched") {
    PlantModel model;
    model.width = 32;
    model.height = 24;
    RgbImage canvas(32, 24);
    canvas.put(5, 5, 9, 9, 9);
    const std::vector<uint8_t> before = canvas.data;
    render_overlay(canvas, model, {});
    CHECK(canvas.data == before);
}

TEST_CASE("render_overlay: red marker sits at the requested pixel") {
    const SceneBundle bundle = generate_scene(default_scene_spec(7));
    PipelineConfig config;
    config.intrinsics = bundle.intrinsics;
    const PlantModel model =
        assemble_model(bundle.records, bundle.depth, bundle.intrinsics, config);

    PruningPoint point;
    point.position_px = {200.0, 100.0};
    point.angle_rad = 0.0;
    const RgbImage canvas = make_overlay(model, {point});

    CHECK(canvas.width == model.width);
    CHECK(canvas.height == model.height);
    const size_t i = (size_t(100) * canvas.width + 200) * 3;
    CHECK(canvas.data[i] == 235);
    CHECK(canvas.data[i + 1] == 40);
    CHECK(canvas.data[i + 2] == 40);
}

TEST_CASE("render_overlay: orphans are tinted in the warning color") {
    std::vector<InstanceRecord> records;
    records.push_back(
        test::record_from_rects(0, OrganClass::MainCordon, 200, 200, {{10, 100, 189, 119}}));
    records.push_back(
        test::record_from_rects(1, OrganClass::Cane, 200, 200, {{150, 10, 154, 60}}));
    PipelineConfig config;
    auto depth = std::make_shared<DepthImage>(200, 200, 1000);
    const PlantModel model = assemble_model(records, depth, config.intrinsics, config);
    REQUIRE(model.orphans.size() == 1);

    const RgbImage canvas = make_overlay(model, {});
    const size_t i = (size_t(30) * canvas.width + 152) * 3;
    CHECK(canvas.data[i] == 210);
    CHECK(canvas.data[i + 1] == 70);
    CHECK(canvas.data[i + 2] == 210);
}

TEST_CASE("cmd_bench: small grid runs to completion, bad grids are fatal") {
    const auto dir = test::make_temp_dir("bench");
    const fs::path grid = dir / "grid.json";
    std::ofstream(grid) << R"({"cells": [{"seed": 0}, {"seed": 1},)"
                        << R"( {"seed": 2, "detach_fraction": 0.5}]})";

    BenchOptions options;
    options.grid_path = grid.string();
    options.out_dir = (dir / "out").string();
    CHECK(cmd_bench(options) == 0);

    const std::string csv = slurp(fs::path(options.out_dir) / "bench.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 cells
    CHECK(csv.find("ok") != std::string::npos);

    // Unperturbed cells reconstruct perfectly.
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    for (int i = 0; i < 2; ++i) {
        std::getline(lines, line);
        CHECK(line.find(",1,") != std::string::npos);  // isomorphic column
    }

    const fs::path empty_grid = dir / "empty.json";
    std::ofstream(empty_grid) << R"({"cells": []})";
    BenchOptions empty_options = options;
    empty_options.grid_path = empty_grid.string();
    CHECK(cmd_bench(empty_options) == 1);

    const fs::path bad_grid = dir / "bad.json";
    std::ofstream(bad_grid) << "not json";
    BenchOptions bad_options = options;
    bad_options.grid_path = bad_grid.string();
    CHECK(cmd_bench(bad_options) == 1);

    fs::remove_all(dir);
}

TEST_SUITE_END();
