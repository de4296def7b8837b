#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vineprune/plant_model.hpp"

namespace vineprune {

// Which band of the cordon cross-section the region grows from.
enum class RegionLocation { Dorsal, Ventral, Intermediate };

enum class GrowthDirection { Vertical, NotVertical, Unknown };

const char* to_string(RegionLocation location);
const char* to_string(GrowthDirection growth);

// A cordon-attached subtree evaluated as a unit for cutting. The basal
// cane is the cane in the subtree nearest the cordon (the region item
// itself when it is a cane).
struct PruningRegion {
    int item_id = -1;
    int cordon_id = -1;
    std::optional<int> basal_cane_id;
};

// The six per-region evaluations feeding cut selection.
struct RegionAssessment {
    RegionLocation location = RegionLocation::Intermediate;
    int cane_count = 0;
    GrowthDirection growth = GrowthDirection::Unknown;
    std::optional<double> vigor_m;
    bool is_new = false;
    bool is_replacement = false;
    bool has_basal_cane = false;
    double adjacent_distance_m = 0.0;  // +infinity when no comparable neighbor
    std::vector<std::string> flags;
};

// Pure location rule: given the cordon's first mask row y_top and its
// diameter d_mc at the region column, classify the region origin row.
// The dorsal and ventral thresholds never overlap for angles <= pi.
RegionLocation location_from_row(double y_pr, double y_top, double d_mc, double alpha_v,
                                 double alpha_d);

// Measure y_top and d_mc from the cordon mask at the region's origin
// column (nearest non-empty columns stand in for occluded ones) and
// apply the location rule.
RegionLocation classify_location(const GrapevineItem& region_item, const GrapevineItem& cordon,
                                 double alpha_v, double alpha_d,
                                 std::vector<std::string>* flags = nullptr);

// Number of cane-class items in the subtree rooted at `item_id`,
// counting the root itself when it is a cane.
int count_canes(const PlantModel& model, int item_id);

// Slope test against the lateral/cross thresholds; a segment with no
// vertical extent is never vertical, missing 3D means Unknown.
GrowthDirection classify_growth_direction(const std::optional<Point3>& origin,
                                          const std::optional<Point3>& endpoint, double alpha_l,
                                          double alpha_c);

// Mean metric thickness of the cane mask, row by row (column by column
// for canes lying horizontally), each row deprojected at its own
// estimated depth. Empty when no row has usable depth.
std::optional<double> estimate_vigor(const GrapevineItem& basal_cane, const DepthImage& depth,
                                     const CameraIntrinsics& intrinsics, int window_w,
                                     int fallback_radius);

// (is_new, is_replacement) from the item's parent class: main cordon
// parents mark new regions, arm parents mark replacement cuts. Throws
// AssessmentError for items without a parent.
std::pair<bool, bool> classify_origin(const PlantModel& model, int item_id);

// Distance to the adjacent regions along the cordon, combined with the
// configured metric; absent neighbors and missing 3D origins contribute
// +infinity.
double adjacent_distance(const std::vector<std::optional<Point3>>& origins_along_cordon,
                         size_t index, AdjacencyMetric metric);

// Assess every pruning region (the children of each main cordon, walked
// left to right). Per-region problems become flags, never aborts.
std::vector<std::pair<PruningRegion, RegionAssessment>> assess_all(const PlantModel& model,
                                                                   const DepthImage& depth,
                                                                   const CameraIntrinsics& intrinsics,
                                                                   const PipelineConfig& config);

} // namespace vineprune
