#include "vineprune/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vineprune/assessments.hpp"
#include "vineprune/errors.hpp"
#include "vineprune/json_util.hpp"
#include "vineprune/log.hpp"
#include "vineprune/synthetic.hpp"

namespace vineprune {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Flags that degrade the result (as opposed to informational ones like
// "fallback" or "parent_cut") drive the exit-2 warning contract.
bool is_warning_flag(const std::string& flag) {
    static const std::set<std::string> warnings = {
        "correction_failed",  "orphan",
        "no_depth_at_origin", "no_depth_at_endpoint",
        "no_depth_at_point",  "metric_scale_missing",
        "adjacency_unavailable", "origin_outside_cordon_columns",
        "cordon_column_occluded", "vigor_unknown",
        "degenerate_segment", "no_basal_cane"};
    return warnings.count(flag) > 0;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write output file: " + path.string());
    out << text;
    if (!out) throw UsageError("failed while writing: " + path.string());
}

std::string hash_hex(uint64_t hash) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", (unsigned long long)hash);
    return buffer;
}

class StageTimer {
public:
    explicit StageTimer(RunManifest& manifest) : manifest_(manifest) {}

    template <typename F>
    auto time(const std::string& stage, F&& fn) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(stage, start);
        } else {
            auto result = fn();
            record(stage, start);
            return result;
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        manifest_.timings_ms[stage] =
            std::chrono::duration<double, std::milli>(elapsed).count();
    }

    RunManifest& manifest_;
};

json manifest_to_json(const RunManifest& manifest) {
    json doc;
    doc["tool"] = manifest.tool;
    doc["version"] = manifest.version;
    doc["inputs"] = manifest.inputs;
    doc["outputs"] = manifest.outputs;
    doc["config_hash"] = manifest.config_hash;
    json timings;
    for (const auto& [stage, ms] : manifest.timings_ms) timings[stage] = round6(ms);
    doc["timings_ms"] = std::move(timings);
    doc["warnings"] = manifest.warning_count;
    doc["flag_counts"] = manifest.flag_counts;
    return doc;
}

} // namespace

int cmd_run(const RunOptions& options) {
    try {
        fs::create_directories(options.out_dir);

        RunManifest manifest;
        manifest.inputs["annotations"] = options.annotations_path;
        manifest.inputs["depth"] = options.depth_path;
        manifest.inputs["config"] = options.config_path;
        StageTimer timer(manifest);

        const PipelineConfig config = options.config_path.empty()
                                          ? PipelineConfig{}
                                          : load_config(options.config_path);
        manifest.config_hash = hash_hex(config_hash(config));

        AnnotationScene scene = timer.time("ingest", [&] {
            return load_annotations(options.annotations_path, default_class_map(),
                                    options.image_id);
        });
        log_info("loaded " + std::to_string(scene.records.size()) + " instances from " +
                 options.annotations_path);

        auto depth = std::make_shared<DepthImage>(timer.time("depth", [&] {
            return read_depth_png(options.depth_path, scene.width, scene.height);
        }));

        PlantModel model = timer.time("model", [&] {
            return assemble_model(std::move(scene.records), depth, config.intrinsics, config);
        });

        auto assessments = timer.time("assess", [&] {
            return assess_all(model, *model.depth, config.intrinsics, config);
        });

        auto points = timer.time("points", [&] {
            return generate_pruning_points(model, assessments, config);
        });

        const fs::path out_dir(options.out_dir);
        timer.time("write", [&] {
            write_text_file(out_dir / "model.json", model_to_json(model));
            write_text_file(out_dir / "pruning_points.json", points_to_json(points, assessments));
        });
        manifest.outputs = {"model.json", "pruning_points.json"};

        if (options.overlay) {
            timer.time("render", [&] {
                write_rgb_png((out_dir / "overlay.png").string(), make_overlay(model, points));
            });
            manifest.outputs.push_back("overlay.png");
        }

        for (const GrapevineItem& item : model.items)
            for (const std::string& flag : item.flags) ++manifest.flag_counts[flag];
        for (const auto& [region, assessment] : assessments)
            for (const std::string& flag : assessment.flags) ++manifest.flag_counts[flag];
        for (const PruningPoint& point : points)
            for (const std::string& flag : point.flags) ++manifest.flag_counts[flag];
        for (const auto& [flag, count] : manifest.flag_counts)
            if (is_warning_flag(flag)) manifest.warning_count += count;

        manifest.outputs.push_back("manifest.json");
        const fs::path tmp = out_dir / "manifest.json.tmp";
        write_text_file(tmp, manifest_to_json(manifest).dump(2) + "\n");
        fs::rename(tmp, out_dir / "manifest.json");

        if (manifest.warning_count > 0) {
            log_warn("run finished with " + std::to_string(manifest.warning_count) + " warnings");
            return 2;
        }
        return 0;
    } catch (const Error& e) {
        log_error(e.what());
        std::fprintf(stderr, "vineprune: fatal: %s\n", e.what());
        return 1;
    }
}

namespace {

struct Rgb {
    uint8_t r, g, b;
};

Rgb class_color(OrganClass c) {
    switch (c) {
        case OrganClass::MainCordon: return {25, 60, 160};   // dark blue
        case OrganClass::Cane: return {110, 190, 255};       // light blue
        case OrganClass::Node: return {250, 220, 40};        // yellow
        case OrganClass::Arm: return {60, 170, 90};
        case OrganClass::Spur: return {240, 150, 50};
    }
    return {255, 255, 255};
}

constexpr Rgb kOrphanColor{210, 70, 210};
constexpr Rgb kEdgeColor{205, 205, 205};
constexpr Rgb kPointColor{235, 40, 40};

void draw_line(RgbImage& canvas, const Point2& a, const Point2& b, Rgb color) {
    const double steps = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y), 1.0});
    for (int i = 0; i <= int(steps); ++i) {
        const double t = i / steps;
        const int x = int(std::lround(a.x + t * (b.x - a.x)));
        const int y = int(std::lround(a.y + t * (b.y - a.y)));
        if (canvas.in_bounds(x, y)) canvas.put(x, y, color.r, color.g, color.b);
    }
}

void draw_disc(RgbImage& canvas, const Point2& center, int radius, Rgb color) {
    const int cx = int(std::lround(center.x));
    const int cy = int(std::lround(center.y));
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy > radius * radius) continue;
            if (canvas.in_bounds(cx + dx, cy + dy))
                canvas.put(cx + dx, cy + dy, color.r, color.g, color.b);
        }
}

} // namespace

void render_overlay(RgbImage& canvas, const PlantModel& model,
                    const std::vector<PruningPoint>& points) {
    if (canvas.width != model.width || canvas.height != model.height)
        throw DimensionError("overlay canvas does not match the scene dimensions");

    std::set<int> orphaned(model.orphans.begin(), model.orphans.end());
    for (const GrapevineItem& item : model.items) {
        const Rgb color = orphaned.count(item.id()) ? kOrphanColor : class_color(item.organ_class());
        const Mask& mask = item.instance.mask;
        const BBox& b = mask.bbox();
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x)
                if (mask.at(x, y)) canvas.put(x, y, color.r, color.g, color.b);
    }

    for (const GrapevineItem& item : model.items)
        if (item.parent)
            draw_line(canvas, model.item(*item.parent).origin_px, item.origin_px, kEdgeColor);

    for (const PruningPoint& point : points) {
        const Point2 dir{std::cos(point.angle_rad), std::sin(point.angle_rad)};
        draw_line(canvas, point.position_px - 8.0 * dir, point.position_px + 8.0 * dir,
                  kPointColor);
        draw_disc(canvas, point.position_px, 3, kPointColor);
    }
}

RgbImage make_overlay(const PlantModel& model, const std::vector<PruningPoint>& points) {
    RgbImage canvas(model.width, model.height);
    for (size_t i = 0; i < canvas.data.size(); i += 3) {
        canvas.data[i] = 18;
        canvas.data[i + 1] = 18;
        canvas.data[i + 2] = 22;
    }
    render_overlay(canvas, model, points);
    return canvas;
}

namespace {

struct BenchCell {
    uint64_t seed = 0;
    double detach_fraction = 0.0;
    double depth_noise_sigma_m = 0.0;
};

std::vector<PerturbOp> detach_ops(const SceneBundle& bundle, double fraction, Rng& rng) {
    std::vector<PerturbOp> ops;
    // Erase the attachment end of randomly chosen organs so the gap
    // outruns the dilation reach; nodes are too small to survive that.
    for (const GrapevineItem& item : bundle.truth_tree.items) {
        if (!item.parent || item.organ_class() == OrganClass::Node) continue;
        if (rng.uniform() >= fraction) continue;
        const BBox& b = item.instance.bbox;
        if (b.height() < 24) continue;

        PerturbOp op;
        op.kind = PerturbOp::Kind::EraseRowBand;
        op.target_instance = item.id();
        op.band_size = 17;
        const bool base_at_bottom = item.origin_px.y >= item.endpoint_px.y;
        op.band_start = base_at_bottom ? b.y1 - op.band_size + 1 : b.y0;
        ops.push_back(op);
    }
    return ops;
}

std::string run_bench_cell(size_t index, const BenchCell& cell) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream row;
    row << index << ',' << cell.seed << ',';
    try {
        const SceneSpec spec = default_scene_spec(cell.seed);
        SceneBundle bundle = generate_scene(spec);

        std::vector<PerturbOp> ops;
        Rng rng(cell.seed ^ 0x5bd1e995u);
        if (cell.detach_fraction > 0.0) ops = detach_ops(bundle, cell.detach_fraction, rng);
        if (cell.depth_noise_sigma_m > 0.0) {
            PerturbOp op;
            op.kind = PerturbOp::Kind::DepthNoise;
            op.sigma_m = cell.depth_noise_sigma_m;
            ops.push_back(op);
        }
        if (!ops.empty()) bundle = perturb(bundle, ops, cell.seed);

        PipelineConfig config;
        config.intrinsics = bundle.intrinsics;
        PlantModel model =
            assemble_model(bundle.records, bundle.depth, bundle.intrinsics, config);
        const ModelScore score = score_model(model, bundle.truth_tree);

        auto assessments = assess_all(model, *model.depth, bundle.intrinsics, config);
        auto points = generate_pruning_points(model, assessments, config);

        size_t on_mask = 0, correction_failed = 0;
        for (const PruningPoint& p : points) {
            if (p.has_flag("correction_failed")) {
                ++correction_failed;
                continue;
            }
            const Mask& mask = model.item(p.target_item_id).instance.mask;
            const int x = int(std::lround(p.position_px.x));
            const int y = int(std::lround(p.position_px.y));
            if (mask.in_bounds(x, y) && mask.at(x, y)) ++on_mask;
        }

        // Placement error against the truth's primary cut positions.
        double err_sum = 0.0;
        size_t matched = 0, missed = 0;
        for (const TruthPoint& tp : bundle.truth_points) {
            if (tp.parent_cut || !tp.position_px) continue;
            bool found = false;
            for (const PruningPoint& p : points) {
                if (p.region_id != tp.region_id || p.target_item_id != tp.target_item_id ||
                    p.has_flag("parent_cut"))
                    continue;
                err_sum += distance(p.position_px, *tp.position_px);
                ++matched;
                found = true;
                break;
            }
            if (!found) ++missed;
        }

        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        const size_t judged = points.size() - correction_failed;
        row << "ok," << model.items.size() << ',' << model_edges(bundle.truth_tree).size() << ','
            << score.edge_precision << ',' << score.edge_recall << ','
            << (score.tree_isomorphic ? 1 : 0) << ',' << points.size() << ',' << on_mask << ','
            << (judged ? double(on_mask) / double(judged) : 1.0) << ','
            << (matched ? err_sum / double(matched) : 0.0) << ',' << matched << ',' << missed
            << ',' << correction_failed << ',' << ms;
    } catch (const std::exception& e) {
        std::string reason = e.what();
        for (char& c : reason)
            if (c == ',' || c == '\n') c = ';';
        row << "failed,,,,,,,,,,,,,\"" << reason << "\"";
    }
    return row.str();
}

} // namespace

int cmd_bench(const BenchOptions& options) {
    std::vector<BenchCell> cells;
    try {
        std::ifstream in(options.grid_path, std::ios::binary);
        if (!in) throw UsageError("cannot open grid file: " + options.grid_path);
        json doc = json::parse(in);
        const json& cell_array = doc.is_array() ? doc : doc.at("cells");
        for (const json& entry : cell_array) {
            BenchCell cell;
            cell.seed = entry.at("seed").get<uint64_t>();
            cell.detach_fraction = entry.value("detach_fraction", 0.0);
            cell.depth_noise_sigma_m = entry.value("depth_noise_sigma_m", 0.0);
            cells.push_back(cell);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "vineprune: fatal: invalid bench grid: %s\n", e.what());
        return 1;
    }
    if (cells.empty()) {
        std::fprintf(stderr, "vineprune: fatal: bench grid is empty\n");
        return 1;
    }

    std::vector<std::string> rows(cells.size());
    const int jobs = std::max(1, options.jobs);
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            const size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) break;
            rows[i] = run_bench_cell(i, cells[i]);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::future<void>> pool;
        for (int j = 0; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }

    fs::create_directories(options.out_dir);
    const fs::path csv_path = fs::path(options.out_dir) / "bench.csv";
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    csv << "index,seed,status,items,truth_edges,edge_precision,edge_recall,isomorphic,"
           "points,points_on_mask,on_mask_fraction,mean_point_err_px,matched_truth,"
           "missed_truth,correction_failed,elapsed_ms\n";
    for (const std::string& row : rows) csv << row << "\n";
    csv.close();

    std::printf("bench: wrote %zu rows to %s\n", rows.size(), csv_path.string().c_str());
    return 0;
}

} // namespace vineprune
