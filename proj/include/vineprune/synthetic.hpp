#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "vineprune/assessments.hpp"
#include "vineprune/coco.hpp"
#include "vineprune/cut_rules.hpp"
#include "vineprune/plant_model.hpp"

namespace vineprune {

// Deterministic RNG used by every generator: mt19937_64 for the stream
// and an explicit Box-Muller for normals, so identical seeds give
// identical bundles on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }
    int uniform_int(int lo, int hi);          // inclusive range
    double uniform() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }
    double normal(double mean, double sigma);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// What grows on one attachment site along the cordon.
enum class UnitKind {
    Spur,        // spur stub carrying canes
    Arm,         // arm stub carrying canes (replacement-cut regions)
    ArmSpur,     // arm -> spur -> canes chain
    DirectCane,  // a single cane straight on the cordon (new region)
};

struct CaneSpec {
    int length_px = 90;
    int width_px = 5;
    int node_count = 3;
    int node_spacing_px = 18;
};

struct UnitSpec {
    UnitKind kind = UnitKind::Spur;
    int center_col = 0;       // attachment column on the cordon
    bool ventral = false;     // attach below the cordon, organs grow down
    int stub_length_px = 26;  // spur/arm extent away from the cordon
    int stub_width_px = 9;
    std::vector<CaneSpec> canes;
};

// Full description of a procedural scene. Organs are axis-aligned
// rectangles so every ground-truth quantity is closed-form.
struct SceneSpec {
    uint64_t seed = 0;
    int width = 640;
    int height = 480;
    CameraIntrinsics intrinsics;

    int cordon_col = 60;          // left column of the cordon band
    int cordon_row = 230;         // top row of the cordon band
    int cordon_length_px = 520;
    int cordon_diameter_px = 22;

    std::vector<UnitSpec> units;

    double depth_plane_m = 1.0;
    double depth_noise_sigma_m = 0.0;
};

// Expected cut for one region, with the independently computed location
// of the cut on the basal cane (parent cuts carry no position).
struct TruthPoint {
    CutType cut = CutType::SpurCut;
    int region_id = -1;
    int target_item_id = -1;
    std::optional<Point2> position_px;
    bool fallback = false;
    bool parent_cut = false;
};

// A generated scene plus everything a test needs to judge the pipeline.
struct SceneBundle {
    SceneSpec spec;
    std::vector<InstanceRecord> records;
    std::shared_ptr<DepthImage> depth;
    CameraIntrinsics intrinsics;
    PlantModel truth_tree;
    std::vector<std::pair<PruningRegion, RegionAssessment>> truth_assessments;
    std::vector<TruthPoint> truth_points;
};

// Draw the scene and derive all ground truth by direct formula
// evaluation on the known rectangles. Throws SpecError when an organ
// leaves the canvas.
SceneBundle generate_scene(const SceneSpec& spec);

// The default grid cell for a seed: unit mix, cane dimensions and node
// counts drawn deterministically from the seed.
SceneSpec default_scene_spec(uint64_t seed);

// Degradations applied to a generated bundle.
struct PerturbOp {
    enum class Kind {
        EraseRowBand,  // clear rows [band_start, band_start+band_size) of one instance
        DepthNoise,    // gaussian noise on valid depth pixels
    };
    Kind kind = Kind::DepthNoise;
    int target_instance = -1;
    int band_start = 0;
    int band_size = 0;
    double sigma_m = 0.0;
};

// Apply ops; masks that fall apart become separate records (instance IDs
// are re-densified), so heavy occlusion changes the ID universe while
// truth_tree keeps the original one. Depth-only perturbation preserves
// IDs and stays scoreable.
SceneBundle perturb(const SceneBundle& bundle, const std::vector<PerturbOp>& ops, uint64_t seed);

struct ModelScore {
    double edge_precision = 0.0;
    double edge_recall = 0.0;
    bool tree_isomorphic = false;
};

// Compare edge sets of two models over the same instance IDs. Throws
// ScoringError when the ID universes differ.
ModelScore score_model(const PlantModel& predicted, const PlantModel& truth);

// The bundle as COCO-ready annotations (the same format io_ingest
// reads); pairs with the depth image for full on-disk round trips.
AnnotationScene bundle_to_scene(const SceneBundle& bundle);

} // namespace vineprune
