#include "vineprune/assessments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vineprune/errors.hpp"

namespace vineprune {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* to_string(RegionLocation location) {
    switch (location) {
        case RegionLocation::Dorsal: return "dorsal";
        case RegionLocation::Ventral: return "ventral";
        case RegionLocation::Intermediate: return "intermediate";
    }
    return "?";
}

const char* to_string(GrowthDirection growth) {
    switch (growth) {
        case GrowthDirection::Vertical: return "vertical";
        case GrowthDirection::NotVertical: return "not_vertical";
        case GrowthDirection::Unknown: return "unknown";
    }
    return "?";
}

RegionLocation location_from_row(double y_pr, double y_top, double d_mc, double alpha_v,
                                 double alpha_d) {
    const double dorsal_limit = y_top + (d_mc / 2.0) * (1.0 - std::cos(alpha_d / 2.0));
    const double ventral_limit = y_top + d_mc - (d_mc / 2.0) * (1.0 - std::cos(alpha_v / 2.0));
    if (y_pr < dorsal_limit) return RegionLocation::Dorsal;
    if (y_pr > ventral_limit) return RegionLocation::Ventral;
    return RegionLocation::Intermediate;
}

namespace {

int column_count(const Mask& mask, int x) {
    const BBox& b = mask.bbox();
    int n = 0;
    for (int y = b.y0; y <= b.y1; ++y)
        if (mask.at(x, y)) ++n;
    return n;
}

int column_first_row(const Mask& mask, int x) {
    const BBox& b = mask.bbox();
    for (int y = b.y0; y <= b.y1; ++y)
        if (mask.at(x, y)) return y;
    return -1;
}

} // namespace

RegionLocation classify_location(const GrapevineItem& region_item, const GrapevineItem& cordon,
                                 double alpha_v, double alpha_d, std::vector<std::string>* flags) {
    const Mask& mask = cordon.instance.mask;
    const BBox& b = mask.bbox();

    int x = int(std::lround(region_item.origin_px.x));
    if (x < b.x0 || x > b.x1) {
        x = std::clamp(x, b.x0, b.x1);
        if (flags) flags->push_back("origin_outside_cordon_columns");
    }

    double d_mc;
    double y_top;
    if (column_count(mask, x) > 0) {
        d_mc = column_count(mask, x);
        y_top = column_first_row(mask, x);
    } else {
        // Occluded column: nearest non-empty column anchors the top row
        // and the diameter is the median over the 5 nearest columns.
        if (flags) flags->push_back("cordon_column_occluded");
        std::vector<std::pair<int, int>> nearest;  // (|dx|, x)
        for (int cx = b.x0; cx <= b.x1; ++cx)
            if (column_count(mask, cx) > 0) nearest.emplace_back(std::abs(cx - x), cx);
        std::sort(nearest.begin(), nearest.end());
        const size_t take = std::min<size_t>(5, nearest.size());
        std::vector<int> widths;
        for (size_t i = 0; i < take; ++i) widths.push_back(column_count(mask, nearest[i].second));
        std::sort(widths.begin(), widths.end());
        const size_t n = widths.size();
        d_mc = (n % 2 == 1) ? widths[n / 2] : 0.5 * (widths[n / 2 - 1] + widths[n / 2]);
        y_top = column_first_row(mask, nearest.front().second);
    }

    return location_from_row(region_item.origin_px.y, y_top, d_mc, alpha_v, alpha_d);
}

int count_canes(const PlantModel& model, int item_id) {
    int count = 0;
    std::vector<int> stack{item_id};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const GrapevineItem& item = model.item(id);
        if (item.organ_class() == OrganClass::Cane) ++count;
        for (int child : item.children) stack.push_back(child);
    }
    return count;
}

GrowthDirection classify_growth_direction(const std::optional<Point3>& origin,
                                          const std::optional<Point3>& endpoint, double alpha_l,
                                          double alpha_c) {
    if (!origin || !endpoint) return GrowthDirection::Unknown;
    const double dy = std::abs(origin->y - endpoint->y);
    if (dy == 0.0) return GrowthDirection::NotVertical;
    const double lateral = std::abs(origin->x - endpoint->x) / dy;
    const double cross = std::abs(origin->z - endpoint->z) / dy;
    return (lateral <= alpha_l && cross <= alpha_c) ? GrowthDirection::Vertical
                                                    : GrowthDirection::NotVertical;
}

std::optional<double> estimate_vigor(const GrapevineItem& basal_cane, const DepthImage& depth,
                                     const CameraIntrinsics& intrinsics, int window_w,
                                     int fallback_radius) {
    const Mask& mask = basal_cane.instance.mask;
    if (mask.empty()) return std::nullopt;
    const BBox& b = mask.bbox();

    // Orientation by bbox aspect ratio; a cane lying horizontally is
    // measured column-wise instead of row-wise.
    const bool vertical = b.height() >= b.width();

    double sum = 0.0;
    int measured = 0;
    const int outer0 = vertical ? b.y0 : b.x0;
    const int outer1 = vertical ? b.y1 : b.x1;
    const int inner0 = vertical ? b.x0 : b.y0;
    const int inner1 = vertical ? b.x1 : b.y1;

    for (int outer = outer0; outer <= outer1; ++outer) {
        int lo = -1, hi = -1;
        long acc = 0;
        int n = 0;
        for (int inner = inner0; inner <= inner1; ++inner) {
            const int x = vertical ? inner : outer;
            const int y = vertical ? outer : inner;
            if (!mask.at(x, y)) continue;
            if (lo < 0) lo = inner;
            hi = inner;
            acc += inner;
            ++n;
        }
        if (n == 0) continue;

        const double mid = double(acc) / n;
        const Pixel probe = vertical ? Pixel{int(std::lround(mid)), outer}
                                     : Pixel{outer, int(std::lround(mid))};
        double z;
        try {
            z = estimate_real_depth(probe, depth, intrinsics, window_w, fallback_radius);
        } catch (const DepthError&) {
            continue;
        }

        const Point2 lo_px = vertical ? Point2{double(lo), double(outer)}
                                      : Point2{double(outer), double(lo)};
        const Point2 hi_px = vertical ? Point2{double(hi), double(outer)}
                                      : Point2{double(outer), double(hi)};
        sum += distance(deproject(lo_px, z, intrinsics), deproject(hi_px, z, intrinsics));
        ++measured;
    }

    if (measured == 0) return std::nullopt;
    return sum / measured;
}

std::pair<bool, bool> classify_origin(const PlantModel& model, int item_id) {
    const GrapevineItem& item = model.item(item_id);
    if (!item.parent) throw AssessmentError("cannot classify the origin of an orphan region");
    const OrganClass parent_class = model.item(*item.parent).organ_class();
    return {parent_class == OrganClass::MainCordon, parent_class == OrganClass::Arm};
}

double adjacent_distance(const std::vector<std::optional<Point3>>& origins_along_cordon,
                         size_t index, AdjacencyMetric metric) {
    if (!origins_along_cordon[index]) return kInf;
    const Point3& here = *origins_along_cordon[index];

    auto neighbor = [&](size_t i) -> double {
        if (i >= origins_along_cordon.size() || !origins_along_cordon[i]) return kInf;
        return distance(here, *origins_along_cordon[i]);
    };
    const double d_prev = index == 0 ? kInf : neighbor(index - 1);
    const double d_next = neighbor(index + 1);
    return metric == AdjacencyMetric::Max ? std::max(d_prev, d_next) : std::min(d_prev, d_next);
}

namespace {

std::optional<int> find_basal_cane(const PlantModel& model, int region_id) {
    // Cane descendant with the smallest distance-from-parent, ties to the
    // lower instance ID; the region itself when it is a cane.
    if (model.item(region_id).organ_class() == OrganClass::Cane) return region_id;

    std::optional<int> best;
    std::vector<int> stack{region_id};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const GrapevineItem& item = model.item(id);
        if (id != region_id && item.organ_class() == OrganClass::Cane) {
            if (!best) {
                best = id;
            } else {
                const GrapevineItem& incumbent = model.item(*best);
                if (item.distance_from_parent_px < incumbent.distance_from_parent_px ||
                    (item.distance_from_parent_px == incumbent.distance_from_parent_px &&
                     id < *best))
                    best = id;
            }
        }
        for (int child : item.children) stack.push_back(child);
    }
    return best;
}

} // namespace

std::vector<std::pair<PruningRegion, RegionAssessment>> assess_all(const PlantModel& model,
                                                                   const DepthImage& depth,
                                                                   const CameraIntrinsics& intrinsics,
                                                                   const PipelineConfig& config) {
    std::vector<std::pair<PruningRegion, RegionAssessment>> out;

    for (int cordon_id : model.roots) {
        const GrapevineItem& cordon = model.item(cordon_id);

        std::vector<int> regions = cordon.children;
        std::sort(regions.begin(), regions.end(), [&](int a, int b) {
            const double xa = model.item(a).origin_px.x;
            const double xb = model.item(b).origin_px.x;
            if (xa != xb) return xa < xb;
            return a < b;
        });

        std::vector<std::optional<Point3>> origins;
        origins.reserve(regions.size());
        for (int id : regions) origins.push_back(model.item(id).origin_3d);

        for (size_t i = 0; i < regions.size(); ++i) {
            const int region_id = regions[i];
            const GrapevineItem& region_item = model.item(region_id);

            PruningRegion region;
            region.item_id = region_id;
            region.cordon_id = cordon_id;
            region.basal_cane_id = find_basal_cane(model, region_id);

            RegionAssessment a;
            a.has_basal_cane = region.basal_cane_id.has_value();
            a.location =
                classify_location(region_item, cordon, config.alpha_v, config.alpha_d, &a.flags);
            a.cane_count = count_canes(model, region_id);

            if (region.basal_cane_id) {
                const GrapevineItem& cane = model.item(*region.basal_cane_id);
                a.growth = classify_growth_direction(cane.origin_3d, cane.endpoint_3d,
                                                     config.alpha_l, config.alpha_c);
                a.vigor_m = estimate_vigor(cane, depth, intrinsics,
                                           config.depth_median_window_px,
                                           config.correction_max_radius_px);
                if (!a.vigor_m) a.flags.push_back("vigor_unknown");
            } else {
                a.growth = GrowthDirection::Unknown;
            }

            // Origin classification looks at the basal cane when there is
            // one: replacement cuts are keyed on the cane growing from an
            // arm, new regions on it growing straight from the cordon.
            const int origin_probe = region.basal_cane_id.value_or(region_id);
            auto [is_new, is_replacement] = classify_origin(model, origin_probe);
            a.is_new = is_new;
            a.is_replacement = is_replacement;

            a.adjacent_distance_m = adjacent_distance(origins, i, config.adjacency_metric);
            if (!origins[i]) a.flags.push_back("adjacency_unavailable");

            out.emplace_back(region, std::move(a));
        }
    }
    return out;
}

} // namespace vineprune
