#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vineprune/camera.hpp"
#include "vineprune/coco.hpp"
#include "vineprune/config.hpp"
#include "vineprune/raster.hpp"

namespace vineprune {

// How a child got attached to its parent, kept for debuggability and
// because the attachment pixels define the child's origin.
struct ConnectionInfo {
    int parent_id = -1;
    int iteration = 0;   // dilation iteration that produced the overlap
    int slot = 0;        // slot the intersection centroid landed in
    bool fallback = false;  // connected through the top-growth branch
    std::vector<Pixel> intersection;
};

// One node of the plant tree: an organ instance plus derived geometry and
// its place in the parent/children structure. Items are referenced by
// index into PlantModel::items, which equals the instance ID.
struct GrapevineItem {
    InstanceRecord instance;

    Point2 origin_px;
    Point2 endpoint_px;
    std::optional<Point3> origin_3d;
    std::optional<Point3> endpoint_3d;

    std::optional<int> parent;
    std::vector<int> children;  // ascending distance_from_parent
    double distance_from_parent_px = 0.0;

    std::optional<ConnectionInfo> connection;
    std::vector<std::string> flags;

    OrganClass organ_class() const { return instance.organ_class; }
    int id() const { return instance.instance_id; }
};

// Rooted forest over the scene's organ instances. Roots are the main
// cordons; orphans are items unreachable from any root (their own
// sub-structure is kept). Immutable once assembled.
struct PlantModel {
    std::vector<GrapevineItem> items;
    std::vector<int> roots;
    std::vector<int> orphans;

    int width = 0;
    int height = 0;
    CameraIntrinsics intrinsics;
    std::shared_ptr<const DepthImage> depth;

    const GrapevineItem& item(int id) const { return items[size_t(id)]; }

    // Orphans with no parent; the forest of these plus `roots` spans
    // every item exactly once.
    std::vector<int> orphan_roots() const;
};

// Table I: which child classes may attach to a parent class.
bool relationship_allowed(OrganClass parent, OrganClass child);

// Parent/child classes of each connection pass.
OrganClass connection_parent_class(ConnectionKind kind);
OrganClass connection_child_class(ConnectionKind kind);

// Stamp the instance masks of one organ class into an ID raster; where
// masks overlap the higher instance ID wins.
LabelMap build_label_map(const std::vector<const InstanceRecord*>& items, int width, int height);

// Run the connection search for one parent/child class pair. For each
// child, the (cumulatively dilated) mask is intersected with the parent
// label map: the bottom-most overlapped parent is accepted if the shared
// pixels land in the child's trailing slot; children that never connect
// get one more sweep from the top when include_top is set. Children
// already claimed are skipped; unconnected children are absent from the
// result. When child_bbox_as_mask is set the child mask is replaced with
// its filled bounding box (the node attachment mode).
std::map<int, ConnectionInfo> compute_connections(const std::vector<const InstanceRecord*>& parents,
                                                  const std::vector<const InstanceRecord*>& children,
                                                  const ConnectionParams& params,
                                                  bool child_bbox_as_mask = false);

// Fill origin/endpoint geometry for one item: the origin is the centroid
// of the attachment pixels (roots anchor at the cordon's leading column
// band), the endpoint is the mask pixel farthest from the origin, and 3D
// variants come from the depth image where it is valid.
void derive_geometry(GrapevineItem& item, const GrapevineItem* parent, const DepthImage& depth,
                     const CameraIntrinsics& intrinsics, const PipelineConfig& config);

// Build the full model: run every connection pass in configured order
// with first-claim-wins, derive geometry root-down, and sort children by
// distance from parent. Throws EmptyModelError when no main cordon is
// present; records must have dense instance IDs 0..k-1.
PlantModel assemble_model(std::vector<InstanceRecord> records,
                          std::shared_ptr<const DepthImage> depth,
                          const CameraIntrinsics& intrinsics, const PipelineConfig& config);

// All (parent_id, child_id) edges, sorted.
std::vector<std::pair<int, int>> model_edges(const PlantModel& model);

// Nested-tree JSON for the model (schema_version 1, floats rounded to 6
// decimals so output is byte-stable).
std::string model_to_json(const PlantModel& model);

} // namespace vineprune
