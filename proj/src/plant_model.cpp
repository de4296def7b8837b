#include "vineprune/plant_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <json.hpp>

#include "vineprune/errors.hpp"
#include "vineprune/json_util.hpp"

namespace vineprune {

using nlohmann::json;

std::vector<int> PlantModel::orphan_roots() const {
    std::vector<int> out;
    for (int id : orphans)
        if (!items[size_t(id)].parent) out.push_back(id);
    return out;
}

bool relationship_allowed(OrganClass parent, OrganClass child) {
    switch (parent) {
        case OrganClass::MainCordon:
            return child == OrganClass::Arm || child == OrganClass::Spur ||
                   child == OrganClass::Cane;
        case OrganClass::Arm: return child == OrganClass::Spur || child == OrganClass::Cane;
        case OrganClass::Spur: return child == OrganClass::Cane;
        case OrganClass::Cane: return child == OrganClass::Node;
        case OrganClass::Node: return false;
    }
    return false;
}

OrganClass connection_parent_class(ConnectionKind kind) {
    switch (kind) {
        case ConnectionKind::MainCordonArm:
        case ConnectionKind::MainCordonSpur:
        case ConnectionKind::MainCordonCane: return OrganClass::MainCordon;
        case ConnectionKind::ArmSpur:
        case ConnectionKind::ArmCane: return OrganClass::Arm;
        case ConnectionKind::SpurCane: return OrganClass::Spur;
        case ConnectionKind::CaneNode: return OrganClass::Cane;
    }
    return OrganClass::MainCordon;
}

OrganClass connection_child_class(ConnectionKind kind) {
    switch (kind) {
        case ConnectionKind::MainCordonArm: return OrganClass::Arm;
        case ConnectionKind::MainCordonSpur: return OrganClass::Spur;
        case ConnectionKind::MainCordonCane: return OrganClass::Cane;
        case ConnectionKind::ArmSpur: return OrganClass::Spur;
        case ConnectionKind::ArmCane: return OrganClass::Cane;
        case ConnectionKind::SpurCane: return OrganClass::Cane;
        case ConnectionKind::CaneNode: return OrganClass::Node;
    }
    return OrganClass::Node;
}

LabelMap build_label_map(const std::vector<const InstanceRecord*>& items, int width, int height) {
    std::vector<const InstanceRecord*> ordered = items;
    std::sort(ordered.begin(), ordered.end(),
              [](const InstanceRecord* a, const InstanceRecord* b) {
                  return a->instance_id < b->instance_id;
              });

    LabelMap labels(width, height);
    for (const InstanceRecord* rec : ordered) {
        const BBox& b = rec->mask.bbox();
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x)
                if (rec->mask.at(x, y)) labels.stamp(x, y, uint32_t(rec->instance_id));
    }
    return labels;
}

namespace {

double centroid_row(const std::vector<Pixel>& pixels) {
    double sy = 0;
    for (const Pixel& p : pixels) sy += p.y;
    return sy / double(pixels.size());
}

Mask bbox_fill(const InstanceRecord& rec) {
    Mask mask(rec.mask.width(), rec.mask.height());
    fill_rect(mask, rec.bbox);
    return mask;
}

// One sweep of the connection search loop, bottom-up or top-down.
std::optional<ConnectionInfo> connection_sweep(const LabelMap& labels, const Mask& child_mask,
                                               const ConnectionParams& params, bool from_top,
                                               int target_slot) {
    Mask mask = child_mask;
    for (int iter = 0; iter <= params.max_iter; ++iter) {
        if (iter > 0) mask = dilate(mask, params.dilation_px);

        auto overlaps = overlap_labels(labels, mask);
        if (!overlaps.empty()) {
            // Pick the bottom-most (or, from the top branch, top-most)
            // overlapped parent by intersection centroid row; ties go to
            // the lower instance ID (overlaps are ID-sorted already).
            size_t best = 0;
            double best_row = centroid_row(overlaps[0].second);
            for (size_t i = 1; i < overlaps.size(); ++i) {
                double row = centroid_row(overlaps[i].second);
                if (from_top ? row < best_row : row > best_row) {
                    best = i;
                    best_row = row;
                }
            }

            const int slot = slot_index(mask.bbox(), overlaps[best].second, params.n_slots);
            if (slot == target_slot) {
                ConnectionInfo info;
                info.parent_id = overlaps[best].first;
                info.iteration = iter;
                info.slot = slot;
                info.fallback = from_top;
                info.intersection = std::move(overlaps[best].second);
                return info;
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::map<int, ConnectionInfo> compute_connections(const std::vector<const InstanceRecord*>& parents,
                                                  const std::vector<const InstanceRecord*>& children,
                                                  const ConnectionParams& params,
                                                  bool child_bbox_as_mask) {
    std::map<int, ConnectionInfo> connections;
    if (parents.empty() || children.empty()) return connections;

    const int width = parents.front()->mask.width();
    const int height = parents.front()->mask.height();
    const LabelMap labels = build_label_map(parents, width, height);

    for (const InstanceRecord* child : children) {
        const Mask child_mask = child_bbox_as_mask ? bbox_fill(*child) : child->mask;
        if (child_mask.empty()) continue;

        auto info = connection_sweep(labels, child_mask, params, false, params.n_slots);
        if (!info && params.include_top)
            info = connection_sweep(labels, child_mask, params, true, 1);
        if (info) connections.emplace(child->instance_id, std::move(*info));
    }
    return connections;
}

namespace {

Point2 band_centroid(const Mask& mask, bool leftmost, int band_cols) {
    const BBox& b = mask.bbox();
    int x0, x1;
    if (leftmost) {
        x0 = b.x0;
        x1 = std::min(b.x1, b.x0 + band_cols - 1);
    } else {
        x1 = b.x1;
        x0 = std::max(b.x0, b.x1 - band_cols + 1);
    }
    double sx = 0, sy = 0;
    size_t n = 0;
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (mask.at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
    return {sx / double(n), sy / double(n)};
}

std::optional<Point3> lift_to_3d(GrapevineItem& item, const Point2& px, const DepthImage& depth,
                                 const CameraIntrinsics& intrinsics, const PipelineConfig& config,
                                 const char* flag) {
    const Pixel center{int(std::lround(px.x)), int(std::lround(px.y))};
    if (!depth.in_bounds(center.x, center.y)) {
        item.flags.push_back(flag);
        return std::nullopt;
    }
    try {
        const double z = estimate_real_depth(center, depth, intrinsics,
                                             config.depth_median_window_px,
                                             config.correction_max_radius_px);
        return deproject(px, z, intrinsics);
    } catch (const DepthError&) {
        item.flags.push_back(flag);
        return std::nullopt;
    }
}

} // namespace

void derive_geometry(GrapevineItem& item, const GrapevineItem* parent, const DepthImage& depth,
                     const CameraIntrinsics& intrinsics, const PipelineConfig& config) {
    const Mask& mask = item.instance.mask;

    if (item.connection && !item.connection->intersection.empty()) {
        double sx = 0, sy = 0;
        for (const Pixel& p : item.connection->intersection) {
            sx += p.x;
            sy += p.y;
        }
        const double n = double(item.connection->intersection.size());
        item.origin_px = {sx / n, sy / n};
    } else {
        // Roots and orphan subtree roots anchor at the leading column
        // band of their mask (the plant grows away from that end).
        item.origin_px =
            band_centroid(mask, config.root_origin_side == RootOriginSide::Left, 3);
    }

    // Endpoint: set pixel farthest from the origin; scan order breaks
    // ties toward the smallest (row, col).
    const BBox& b = mask.bbox();
    double best_d2 = -1.0;
    Pixel best{b.x0, b.y0};
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            if (!mask.at(x, y)) continue;
            const double dx = x - item.origin_px.x;
            const double dy = y - item.origin_px.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 > best_d2) {
                best_d2 = d2;
                best = {x, y};
            }
        }
    item.endpoint_px = {double(best.x), double(best.y)};

    item.origin_3d = lift_to_3d(item, item.origin_px, depth, intrinsics, config, "no_depth_at_origin");
    item.endpoint_3d =
        lift_to_3d(item, item.endpoint_px, depth, intrinsics, config, "no_depth_at_endpoint");

    item.distance_from_parent_px = parent ? distance(parent->origin_px, item.origin_px) : 0.0;
}

namespace {

std::vector<ConnectionKind> pass_sequence(PassOrder order) {
    if (order == PassOrder::SpecificFirst)
        return {ConnectionKind::SpurCane,       ConnectionKind::ArmSpur,
                ConnectionKind::ArmCane,        ConnectionKind::MainCordonArm,
                ConnectionKind::MainCordonSpur, ConnectionKind::MainCordonCane,
                ConnectionKind::CaneNode};
    return {ConnectionKind::MainCordonArm, ConnectionKind::MainCordonSpur,
            ConnectionKind::MainCordonCane, ConnectionKind::ArmSpur,
            ConnectionKind::ArmCane,        ConnectionKind::SpurCane,
            ConnectionKind::CaneNode};
}

} // namespace

PlantModel assemble_model(std::vector<InstanceRecord> records,
                          std::shared_ptr<const DepthImage> depth,
                          const CameraIntrinsics& intrinsics, const PipelineConfig& config) {
    std::sort(records.begin(), records.end(),
              [](const InstanceRecord& a, const InstanceRecord& b) {
                  return a.instance_id < b.instance_id;
              });
    for (size_t i = 0; i < records.size(); ++i)
        if (records[i].instance_id != int(i))
            throw UsageError("instance IDs must be dense 0..k-1 before model assembly");

    PlantModel model;
    model.intrinsics = intrinsics;
    model.depth = std::move(depth);
    if (!records.empty()) {
        model.width = records.front().mask.width();
        model.height = records.front().mask.height();
    }
    for (InstanceRecord& rec : records) {
        if (rec.mask.width() != model.width || rec.mask.height() != model.height)
            throw DimensionError("instance masks disagree on scene dimensions");
        GrapevineItem item;
        item.instance = std::move(rec);
        model.items.push_back(std::move(item));
    }

    for (const GrapevineItem& item : model.items)
        if (item.organ_class() == OrganClass::MainCordon) model.roots.push_back(item.id());
    if (model.roots.empty()) throw EmptyModelError("scene contains no main cordon instance");

    std::vector<bool> claimed(model.items.size(), false);
    for (ConnectionKind kind : pass_sequence(config.pass_order)) {
        const OrganClass parent_class = connection_parent_class(kind);
        const OrganClass child_class = connection_child_class(kind);

        std::vector<const InstanceRecord*> parents, children;
        for (const GrapevineItem& item : model.items) {
            if (item.organ_class() == parent_class) parents.push_back(&item.instance);
            if (item.organ_class() == child_class && !claimed[size_t(item.id())])
                children.push_back(&item.instance);
        }

        auto connections = compute_connections(parents, children, config.connection(kind),
                                               kind == ConnectionKind::CaneNode);
        for (auto& [child_id, info] : connections) {
            claimed[size_t(child_id)] = true;
            GrapevineItem& child = model.items[size_t(child_id)];
            child.parent = info.parent_id;
            model.items[size_t(info.parent_id)].children.push_back(child_id);
            child.connection = std::move(info);
        }
    }

    // Geometry is derived parents-first so each child can measure its
    // distance from an already-anchored parent origin.
    std::vector<int> order;
    {
        std::vector<int> starts = model.roots;
        for (const GrapevineItem& item : model.items)
            if (!item.parent && item.organ_class() != OrganClass::MainCordon)
                starts.push_back(item.id());
        std::deque<int> queue(starts.begin(), starts.end());
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            order.push_back(id);
            for (int child : model.items[size_t(id)].children) queue.push_back(child);
        }
    }
    for (int id : order) {
        GrapevineItem& item = model.items[size_t(id)];
        const GrapevineItem* parent =
            item.parent ? &model.items[size_t(*item.parent)] : nullptr;
        derive_geometry(item, parent, *model.depth, intrinsics, config);
    }

    for (GrapevineItem& item : model.items) {
        std::sort(item.children.begin(), item.children.end(), [&](int a, int b) {
            const GrapevineItem& ia = model.items[size_t(a)];
            const GrapevineItem& ib = model.items[size_t(b)];
            if (ia.distance_from_parent_px != ib.distance_from_parent_px)
                return ia.distance_from_parent_px < ib.distance_from_parent_px;
            return a < b;
        });
    }

    // Orphans: anything a root cannot reach.
    std::vector<bool> reachable(model.items.size(), false);
    std::deque<int> queue(model.roots.begin(), model.roots.end());
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        reachable[size_t(id)] = true;
        for (int child : model.items[size_t(id)].children) queue.push_back(child);
    }
    for (GrapevineItem& item : model.items)
        if (!reachable[size_t(item.id())]) {
            model.orphans.push_back(item.id());
            item.flags.push_back("orphan");
        }

    return model;
}

std::vector<std::pair<int, int>> model_edges(const PlantModel& model) {
    std::vector<std::pair<int, int>> edges;
    for (const GrapevineItem& item : model.items)
        if (item.parent) edges.emplace_back(*item.parent, item.id());
    std::sort(edges.begin(), edges.end());
    return edges;
}

namespace {

json item_to_json(const PlantModel& model, int id) {
    const GrapevineItem& item = model.item(id);
    json node;
    node["id"] = item.id();
    node["class"] = to_string(item.organ_class());
    node["origin_px"] = json_point(item.origin_px);
    node["endpoint_px"] = json_point(item.endpoint_px);
    node["origin_3d"] = item.origin_3d ? json_point(*item.origin_3d) : json(nullptr);
    node["endpoint_3d"] = item.endpoint_3d ? json_point(*item.endpoint_3d) : json(nullptr);
    node["distance_from_parent_px"] = round6(item.distance_from_parent_px);
    if (item.connection) {
        node["connection"] = {{"iteration", item.connection->iteration},
                              {"slot", item.connection->slot},
                              {"fallback", item.connection->fallback}};
    } else {
        node["connection"] = nullptr;
    }
    node["flags"] = item.flags;
    json children = json::array();
    for (int child : item.children) children.push_back(item_to_json(model, child));
    node["children"] = std::move(children);
    return node;
}

} // namespace

std::string model_to_json(const PlantModel& model) {
    json doc;
    doc["schema_version"] = 1;
    doc["width"] = model.width;
    doc["height"] = model.height;
    doc["intrinsics"] = {{"fx", round6(model.intrinsics.fx)},
                         {"fy", round6(model.intrinsics.fy)},
                         {"cx", round6(model.intrinsics.cx)},
                         {"cy", round6(model.intrinsics.cy)},
                         {"depth_scale", round6(model.intrinsics.depth_scale)}};
    json roots = json::array();
    for (int id : model.roots) roots.push_back(item_to_json(model, id));
    doc["roots"] = std::move(roots);
    json orphans = json::array();
    for (int id : model.orphan_roots()) orphans.push_back(item_to_json(model, id));
    doc["orphans"] = std::move(orphans);
    return doc.dump(2) + "\n";
}

} // namespace vineprune
