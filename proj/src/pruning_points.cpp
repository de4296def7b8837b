#include "vineprune/pruning_points.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "vineprune/errors.hpp"
#include "vineprune/json_util.hpp"

namespace vineprune {

using nlohmann::json;

bool PruningPoint::has_flag(const std::string& name) const {
    return std::find(flags.begin(), flags.end(), name) != flags.end();
}

CutTable::CutTable(const PipelineConfig& config)
    : adjacency_min_m_(config.adjacency_min_m),
      vigor_min_m_(config.vigor_min_m),
      vigor_max_m_(config.vigor_max_m) {
    if (config.cut_rules.empty()) {
        rules_ = default_cut_rules();
    } else {
        for (const std::string& rule : config.cut_rules) rules_.push_back(parse_cut_rule(rule));
    }
}

namespace {

bool condition_holds(CutCondition condition, const RegionAssessment& a, double adjacency_min,
                     double vigor_min, double vigor_max) {
    switch (condition) {
        case CutCondition::Always: return true;
        case CutCondition::IsNew: return a.is_new;
        case CutCondition::IsReplacement: return a.is_replacement;
        case CutCondition::HasBasalCane: return a.has_basal_cane;
        case CutCondition::TooClose: return a.adjacent_distance_m < adjacency_min;
        case CutCondition::Ventral: return a.location == RegionLocation::Ventral;
        case CutCondition::Dorsal: return a.location == RegionLocation::Dorsal;
        case CutCondition::Intermediate: return a.location == RegionLocation::Intermediate;
        case CutCondition::Vertical: return a.growth == GrowthDirection::Vertical;
        case CutCondition::NotVertical: return a.growth == GrowthDirection::NotVertical;
        case CutCondition::GrowthUnknown: return a.growth == GrowthDirection::Unknown;
        case CutCondition::VigorInRange:
            return a.vigor_m && *a.vigor_m >= vigor_min && *a.vigor_m <= vigor_max;
        case CutCondition::VigorOutOfRange:
            return a.vigor_m && (*a.vigor_m < vigor_min || *a.vigor_m > vigor_max);
        case CutCondition::VigorUnknown: return !a.vigor_m;
        case CutCondition::NoCanes: return a.cane_count == 0;
    }
    return false;
}

} // namespace

std::optional<CutType> CutTable::select(const RegionAssessment& assessment) const {
    for (const CutRule& rule : rules_) {
        bool match = true;
        for (const CutTerm& term : rule.terms) {
            const bool holds = condition_holds(term.condition, assessment, adjacency_min_m_,
                                               vigor_min_m_, vigor_max_m_);
            if (holds == term.negated) {
                match = false;
                break;
            }
        }
        if (match) return rule.outcome;
    }
    return std::nullopt;
}

std::optional<CutType> select_cut(const RegionAssessment& assessment,
                                  const PipelineConfig& config) {
    return CutTable(config).select(assessment);
}

InterpolationResult interpolate_pruning_point(const Point3& p1, const Point3& p2, double d) {
    const double span = distance(p1, p2);
    if (span == 0.0) throw DegenerateSegment("interpolation endpoints coincide");

    InterpolationResult result;
    if (d < 0.0 || d > span) {
        d = std::clamp(d, 0.0, span);
        result.clamped = true;
    }
    const double w1 = std::abs(span - d) / span;
    const double w2 = 1.0 - w1;
    result.point = w1 * p1 + w2 * p2;
    return result;
}

double orientation_angle(const Point2& p1, const Point2& p2) {
    const double dx = p1.x - p2.x;
    const double dy = p1.y - p2.y;
    if (dx == 0.0 && dy == 0.0) throw DegenerateSegment("orientation endpoints coincide");
    if (dx == 0.0) return 0.0;
    if (dy == 0.0) return 1.5707963267948966;
    const double slope = dy / dx;
    return std::atan(slope) - (slope > 0 ? 1.0 : -1.0) * 1.5707963267948966;
}

CorrectionResult correct_onto_organ(const Point2& point_px, const Mask& target_mask,
                                    const DepthImage& depth, int max_radius) {
    const Pixel center{int(std::lround(point_px.x)), int(std::lround(point_px.y))};

    if (target_mask.in_bounds(center.x, center.y) && target_mask.at(center.x, center.y))
        return {point_px, false, false};

    // Scan order is fixed: +x, -x, +y, -y at growing radius. The whole
    // scan is tried against the mask first, then against valid depth.
    auto scan = [&](auto&& accept) -> std::optional<Pixel> {
        for (int r = 1; r <= max_radius; ++r) {
            const Pixel candidates[4] = {{center.x + r, center.y},
                                         {center.x - r, center.y},
                                         {center.x, center.y + r},
                                         {center.x, center.y - r}};
            for (const Pixel& c : candidates)
                if (accept(c)) return c;
        }
        return std::nullopt;
    };

    auto on_mask = scan([&](const Pixel& c) {
        return target_mask.in_bounds(c.x, c.y) && target_mask.at(c.x, c.y);
    });
    if (on_mask) return {{double(on_mask->x), double(on_mask->y)}, true, false};

    auto on_depth = scan([&](const Pixel& c) {
        return depth.in_bounds(c.x, c.y) && depth.valid(c.x, c.y);
    });
    if (on_depth) return {{double(on_depth->x), double(on_depth->y)}, true, false};

    return {point_px, false, true};
}

namespace {

Point2 interpolate_px(const Point2& p1, const Point2& p2, double d_px, bool* clamped) {
    const double span = distance(p1, p2);
    if (span == 0.0) throw DegenerateSegment("pixel interpolation endpoints coincide");
    double t = d_px / span;
    if (t < 0.0 || t > 1.0) {
        t = std::clamp(t, 0.0, 1.0);
        if (clamped) *clamped = true;
    }
    return p1 + t * (p2 - p1);
}

struct SegmentSpec {
    Point2 p1_px;
    Point2 p2_px;
    std::optional<Point3> p1_3d;
    std::optional<Point3> p2_3d;
    double d_m = 0.0;        // distance from p1 in meters
    bool midpoint = false;   // place at the segment midpoint instead
};

class PointBuilder {
public:
    PointBuilder(const PlantModel& model, const PipelineConfig& config,
                 std::vector<PruningPoint>& out)
        : model_(model), config_(config), out_(out) {}

    void emit(const SegmentSpec& seg, CutType cut, int region_id, int target_item_id,
              std::vector<std::string> flags) {
        PruningPoint point;
        point.cut = cut;
        point.region_id = region_id;
        point.target_item_id = target_item_id;
        point.flags = std::move(flags);

        try {
            point.angle_rad = orientation_angle(seg.p1_px, seg.p2_px);
        } catch (const DegenerateSegment&) {
            point.angle_rad = 0.0;
            point.flags.push_back("degenerate_segment");
            point.position_px = seg.p1_px;
            finalize(point, seg);
            return;
        }

        bool clamped = false;
        const bool have_3d = seg.p1_3d && seg.p2_3d && !(*seg.p1_3d == *seg.p2_3d);
        if (seg.midpoint) {
            point.position_px = interpolate_px(seg.p1_px, seg.p2_px,
                                               0.5 * distance(seg.p1_px, seg.p2_px), &clamped);
        } else if (have_3d) {
            // Metric offset mapped into pixels through this segment's own
            // 2D/3D length ratio.
            const double len_m = distance(*seg.p1_3d, *seg.p2_3d);
            const double len_px = distance(seg.p1_px, seg.p2_px);
            point.position_px =
                interpolate_px(seg.p1_px, seg.p2_px, seg.d_m * len_px / len_m, &clamped);
        } else {
            // No metric scale: read d as a fraction of the segment.
            point.flags.push_back("metric_scale_missing");
            point.position_px = interpolate_px(seg.p1_px, seg.p2_px,
                                               seg.d_m * distance(seg.p1_px, seg.p2_px), &clamped);
        }
        if (clamped) point.flags.push_back("offset_clamped");

        finalize(point, seg);
    }

private:
    void finalize(PruningPoint& point, const SegmentSpec& seg) {
        const Mask& mask = model_.item(point.target_item_id).instance.mask;
        const CorrectionResult snap = correct_onto_organ(point.position_px, mask, *model_.depth,
                                                         config_.correction_max_radius_px);
        if (snap.failed) {
            point.flags.push_back("correction_failed");
        } else {
            point.position_px = snap.position;
            point.corrected = snap.corrected;
        }

        point.position_3d = resolve_3d(point.position_px, seg);
        if (!point.position_3d) point.flags.push_back("no_depth_at_point");
        out_.push_back(std::move(point));
    }

    std::optional<Point3> resolve_3d(const Point2& px, const SegmentSpec& seg) const {
        const Pixel probe{int(std::lround(px.x)), int(std::lround(px.y))};
        if (model_.depth->in_bounds(probe.x, probe.y)) {
            try {
                const double z =
                    estimate_real_depth(probe, *model_.depth, model_.intrinsics,
                                        config_.depth_median_window_px,
                                        config_.correction_max_radius_px);
                return deproject(px, z, model_.intrinsics);
            } catch (const DepthError&) {
            }
        }
        // Depth hole at the final pixel: fall back to interpolating the
        // segment's own 3D endpoints.
        if (seg.p1_3d && seg.p2_3d && !(*seg.p1_3d == *seg.p2_3d)) {
            const double d = seg.midpoint ? 0.5 * distance(*seg.p1_3d, *seg.p2_3d) : seg.d_m;
            return interpolate_pruning_point(*seg.p1_3d, *seg.p2_3d, d).point;
        }
        return std::nullopt;
    }

    const PlantModel& model_;
    const PipelineConfig& config_;
    std::vector<PruningPoint>& out_;
};

// Node children of a cane, nearest the cane origin first (children are
// already sorted by distance from parent).
std::vector<int> cane_nodes(const PlantModel& model, int cane_id) {
    std::vector<int> nodes;
    for (int child : model.item(cane_id).children)
        if (model.item(child).organ_class() == OrganClass::Node) nodes.push_back(child);
    return nodes;
}

SegmentSpec whole_item_segment(const GrapevineItem& item, double d_m) {
    return {item.origin_px, item.endpoint_px, item.origin_3d, item.endpoint_3d, d_m, false};
}

} // namespace

std::vector<PruningPoint> generate_pruning_points(
    const PlantModel& model,
    const std::vector<std::pair<PruningRegion, RegionAssessment>>& assessments,
    const PipelineConfig& config) {
    std::vector<PruningPoint> points;
    const CutTable table(config);
    PointBuilder builder(model, config, points);
    const int keep_nodes = config.spur_nodes_n;

    for (const auto& [region, assessment] : assessments) {
        const std::optional<CutType> cut = table.select(assessment);
        if (!cut) continue;

        const GrapevineItem& region_item = model.item(region.item_id);
        const GrapevineItem* cane =
            region.basal_cane_id ? &model.item(*region.basal_cane_id) : nullptr;

        switch (*cut) {
            case CutType::CleanCut: {
                builder.emit(whole_item_segment(region_item, config.cut_offset_d_m),
                             CutType::CleanCut, region.item_id, region_item.id(), {});
                break;
            }
            case CutType::BaseBudCut: {
                const GrapevineItem& target = cane ? *cane : region_item;
                std::vector<std::string> flags;
                if (!cane) flags.push_back("no_basal_cane");

                SegmentSpec seg = whole_item_segment(target, config.cut_offset_d_m);
                const std::vector<int> nodes = cane_nodes(model, target.id());
                if (!nodes.empty()) {
                    const GrapevineItem& first = model.item(nodes.front());
                    seg.p2_px = first.origin_px;
                    seg.p2_3d = first.origin_3d;
                }
                builder.emit(seg, CutType::BaseBudCut, region.item_id, target.id(),
                             std::move(flags));
                break;
            }
            case CutType::SpurCut:
            case CutType::ReplacementCut: {
                const GrapevineItem& target = cane ? *cane : region_item;
                std::vector<std::string> flags;
                if (!cane) flags.push_back("no_basal_cane");

                const std::vector<int> nodes = cane_nodes(model, target.id());
                if (int(nodes.size()) >= keep_nodes + 1) {
                    // Cut halfway between the last kept node and the next.
                    const GrapevineItem& kept = model.item(nodes[size_t(keep_nodes) - 1]);
                    const GrapevineItem& removed = model.item(nodes[size_t(keep_nodes)]);
                    SegmentSpec seg{kept.origin_px, removed.origin_px, kept.origin_3d,
                                    removed.origin_3d, 0.0, true};
                    builder.emit(seg, *cut, region.item_id, target.id(), std::move(flags));
                } else {
                    // Nodes missing from the detection: offset along the
                    // cane instead, one d per node that should remain.
                    flags.push_back("fallback");
                    builder.emit(whole_item_segment(target,
                                                    config.cut_offset_d_m * (keep_nodes + 1)),
                                 *cut, region.item_id, target.id(), std::move(flags));
                }

                // Replacement cuts always sever the parent above the basal
                // cane; plain spur cuts only when the region is not new.
                const bool cut_parent =
                    *cut == CutType::ReplacementCut || !assessment.is_new;
                if (cut_parent && cane && cane->parent) {
                    const GrapevineItem& parent = model.item(*cane->parent);
                    if (parent.organ_class() != OrganClass::MainCordon) {
                        SegmentSpec seg{cane->origin_px, parent.endpoint_px, cane->origin_3d,
                                        parent.endpoint_3d, config.cut_offset_d_m, false};
                        builder.emit(seg, *cut, region.item_id, parent.id(), {"parent_cut"});
                    }
                }
                break;
            }
        }
    }
    return points;
}

std::string points_to_json(
    const std::vector<PruningPoint>& points,
    const std::vector<std::pair<PruningRegion, RegionAssessment>>& assessments) {
    json doc;
    doc["schema_version"] = 1;

    json point_array = json::array();
    size_t warnings = 0;
    for (const PruningPoint& p : points) {
        json entry;
        entry["position_px"] = json_point(p.position_px);
        entry["position_3d"] = p.position_3d ? json_point(*p.position_3d) : json(nullptr);
        entry["angle_rad"] = round6(p.angle_rad);
        entry["cut_type"] = to_string(p.cut);
        entry["region_id"] = p.region_id;
        entry["target_item_id"] = p.target_item_id;
        entry["corrected"] = p.corrected;
        entry["flags"] = p.flags;
        if (!p.flags.empty()) ++warnings;
        point_array.push_back(std::move(entry));
    }
    doc["points"] = std::move(point_array);
    doc["warnings"] = warnings;

    json region_array = json::array();
    for (const auto& [region, a] : assessments) {
        json entry;
        entry["region_id"] = region.item_id;
        entry["cordon_id"] = region.cordon_id;
        entry["basal_cane_id"] = region.basal_cane_id ? json(*region.basal_cane_id) : json(nullptr);
        entry["location"] = to_string(a.location);
        entry["cane_count"] = a.cane_count;
        entry["growth"] = to_string(a.growth);
        entry["vigor_m"] = a.vigor_m ? json(round6(*a.vigor_m)) : json(nullptr);
        entry["is_new"] = a.is_new;
        entry["is_replacement"] = a.is_replacement;
        entry["adjacent_distance_m"] = std::isfinite(a.adjacent_distance_m)
                                           ? json(round6(a.adjacent_distance_m))
                                           : json(nullptr);
        entry["flags"] = a.flags;
        region_array.push_back(std::move(entry));
    }
    doc["assessments"] = std::move(region_array);
    return doc.dump(2) + "\n";
}

} // namespace vineprune
