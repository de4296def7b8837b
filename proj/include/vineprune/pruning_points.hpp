#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vineprune/assessments.hpp"
#include "vineprune/cut_rules.hpp"
#include "vineprune/plant_model.hpp"

namespace vineprune {

// A cut to execute: where (pixel and camera frame), at what blade angle,
// of which type, and which region/organ it belongs to.
struct PruningPoint {
    Point2 position_px;
    std::optional<Point3> position_3d;
    double angle_rad = 0.0;
    CutType cut = CutType::SpurCut;
    int region_id = -1;
    int target_item_id = -1;
    bool corrected = false;
    std::vector<std::string> flags;

    bool has_flag(const std::string& name) const;
};

// Decision table bound to a config: rules from the config override the
// built-in table. First matching rule decides; no match means skip.
class CutTable {
public:
    explicit CutTable(const PipelineConfig& config);

    std::optional<CutType> select(const RegionAssessment& assessment) const;

    const std::vector<CutRule>& rules() const { return rules_; }

private:
    std::vector<CutRule> rules_;
    double adjacency_min_m_;
    double vigor_min_m_;
    double vigor_max_m_;
};

// Convenience wrapper over CutTable for one-off selections.
std::optional<CutType> select_cut(const RegionAssessment& assessment,
                                  const PipelineConfig& config);

struct InterpolationResult {
    Point3 point;
    bool clamped = false;  // d fell outside [0, |p1 p2|]
};

// Place a point on segment p1->p2 at distance d from p1 (d is clamped to
// the segment). Throws DegenerateSegment when p1 == p2.
InterpolationResult interpolate_pruning_point(const Point3& p1, const Point3& p2, double d);

// Cut blade angle for the segment through p1 and p2: 0 for vertical
// segments, pi/2 for horizontal ones, otherwise perpendicular to the
// segment. Symmetric in its arguments; throws DegenerateSegment when
// p1 == p2.
double orientation_angle(const Point2& p1, const Point2& p2);

struct CorrectionResult {
    Point2 position;
    bool corrected = false;
    bool failed = false;  // nothing reachable: point kept, flagged upstream
};

// Snap a point onto its organ: already-on-mask points pass through,
// otherwise the scan walks +-x then +-y out to max_radius, preferring
// the first mask pixel and falling back to the first valid-depth pixel.
CorrectionResult correct_onto_organ(const Point2& point_px, const Mask& target_mask,
                                    const DepthImage& depth, int max_radius);

// Turn the per-region assessments into concrete pruning points (possibly
// several per region: replacement and non-new spur cuts also cut the
// parent organ above the basal cane). Correction failures and fallbacks
// are flagged on the emitted points; generation never aborts a scene.
std::vector<PruningPoint> generate_pruning_points(
    const PlantModel& model,
    const std::vector<std::pair<PruningRegion, RegionAssessment>>& assessments,
    const PipelineConfig& config);

// Points + assessments as the versioned output JSON document.
std::string points_to_json(const std::vector<PruningPoint>& points,
                           const std::vector<std::pair<PruningRegion, RegionAssessment>>& assessments);

} // namespace vineprune
