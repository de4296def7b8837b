#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vineprune/plant_model.hpp"
#include "vineprune/png_io.hpp"
#include "vineprune/pruning_points.hpp"

namespace vineprune {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    std::string annotations_path;
    std::string depth_path;
    std::string config_path;  // empty = defaults
    std::string out_dir;
    bool overlay = true;
    std::optional<int> image_id;
};

// Record of one completed run, written as manifest.json after every
// named output exists.
struct RunManifest {
    std::string tool = "vineprune";
    std::string version = kToolVersion;
    std::map<std::string, std::string> inputs;
    std::vector<std::string> outputs;
    std::string config_hash;
    std::map<std::string, double> timings_ms;
    size_t warning_count = 0;
    std::map<std::string, size_t> flag_counts;
};

// Full pipeline on one scene: ingest -> model -> assessments -> points,
// writing model.json, pruning_points.json, overlay.png and manifest.json
// into out_dir. Returns 0 on a clean run, 2 when the run finished but
// carries per-region/per-point warnings, 1 on fatal errors.
int cmd_run(const RunOptions& options);

// Draw the model over the given canvas (which must match the scene
// dimensions): organs tinted per class, tree edges origin-to-origin,
// pruning points as red markers with an orientation tick.
void render_overlay(RgbImage& canvas, const PlantModel& model,
                    const std::vector<PruningPoint>& points);

// Same, onto a fresh dark canvas at scene size.
RgbImage make_overlay(const PlantModel& model, const std::vector<PruningPoint>& points);

struct BenchOptions {
    std::string grid_path;
    std::string out_dir;
    int jobs = 1;
};

// Synthetic benchmark: generate -> perturb -> assemble -> score over the
// grid file, one CSV row per cell. A failing cell is recorded and the
// run continues; only an unusable grid is fatal (exit 1).
int cmd_bench(const BenchOptions& options);

} // namespace vineprune
