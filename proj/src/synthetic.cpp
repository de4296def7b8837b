#include "vineprune/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vineprune/errors.hpp"

namespace vineprune {

int Rng::uniform_int(int lo, int hi) {
    return lo + int(next() % uint64_t(hi - lo + 1));
}

double Rng::normal(double mean, double sigma) {
    if (have_spare_) {
        have_spare_ = false;
        return mean + sigma * spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 1e-12);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return mean + sigma * radius * std::cos(angle);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rectangles drawn by the generator; inclusive bounds.
struct Rect {
    int x0, y0, x1, y1;

    BBox bbox() const { return {x0, y0, x1, y1}; }
    double center_x() const { return 0.5 * (x0 + x1); }
};

PolygonRing rect_ring(const Rect& r) {
    return {{double(r.x0), double(r.y0)},
            {double(r.x1), double(r.y0)},
            {double(r.x1), double(r.y1)},
            {double(r.x0), double(r.y1)}};
}

// Staging item: geometry is filled in closed form as the scene is laid
// out, then converted to records + truth model at the end.
struct Draft {
    OrganClass organ_class;
    Rect rect;
    int parent = -1;
    Point2 origin;
    Point2 endpoint;
};

// Endpoint of a rectangular organ: the far-row corner farthest from the
// origin; ties resolve to the smaller column like the mask scan does.
Point2 rect_endpoint(const Rect& r, const Point2& origin, bool far_is_top) {
    const int y = far_is_top ? r.y0 : r.y1;
    const double left = origin.x - r.x0;
    const double right = r.x1 - origin.x;
    return {double(right > left ? r.x1 : r.x0), double(y)};
}

class SceneBuilder {
public:
    explicit SceneBuilder(const SceneSpec& spec) : spec_(spec) {}

    SceneBundle build();

private:
    int add_draft(OrganClass organ_class, const Rect& rect, int parent) {
        check_rect(rect);
        drafts_.push_back({organ_class, rect, parent, {}, {}});
        return int(drafts_.size()) - 1;
    }

    void check_rect(const Rect& r) const {
        if (r.x0 > r.x1 || r.y0 > r.y1 || r.x0 < 0 || r.y0 < 0 || r.x1 >= spec_.width ||
            r.y1 >= spec_.height)
            throw SpecError("organ rectangle leaves the canvas");
    }

    void lay_out_unit(const UnitSpec& unit);
    void add_cane(const CaneSpec& cane, const Rect& mount, int mount_id, bool ventral,
                  int slot_of, int slot_count);

    Point3 to_3d(const Point2& px) const {
        return {(px.x - spec_.intrinsics.cx) * spec_.depth_plane_m / spec_.intrinsics.fx,
                (px.y - spec_.intrinsics.cy) * spec_.depth_plane_m / spec_.intrinsics.fy,
                spec_.depth_plane_m};
    }

    const SceneSpec& spec_;
    std::vector<Draft> drafts_;
    std::vector<int> region_ids_;         // cordon children, left to right
    std::vector<int> region_basal_cane_;  // id or -1, parallel to region_ids_
};

void SceneBuilder::add_cane(const CaneSpec& cane, const Rect& mount, int mount_id, bool ventral,
                            int slot_of, int slot_count) {
    const int w = cane.width_px;

    // One cane sits centered on its mount; two share it left and right
    // with a gap so the instances never overlap.
    int x0;
    if (slot_count == 1) {
        x0 = int(std::lround(mount.center_x())) - (w - 1) / 2;
    } else if (slot_of == 0) {
        x0 = int(std::lround(mount.center_x())) - w - 1;
    } else {
        x0 = int(std::lround(mount.center_x())) + 2;
    }
    const int x1 = x0 + w - 1;
    if (x0 < mount.x0 || x1 > mount.x1) throw SpecError("cane does not fit on its mount");

    Rect rect;
    int base_row;
    if (!ventral) {
        base_row = mount.y0;  // overlap the mount's top row
        rect = {x0, base_row - cane.length_px + 1, x1, base_row};
    } else {
        base_row = mount.y1;
        rect = {x0, base_row, x1, base_row + cane.length_px - 1};
    }

    const int cane_id = add_draft(OrganClass::Cane, rect, mount_id);
    Draft& draft = drafts_.back();
    draft.origin = {0.5 * (std::max(rect.x0, mount.x0) + std::min(rect.x1, mount.x1)),
                    double(base_row)};
    draft.endpoint = rect_endpoint(rect, draft.origin, !ventral);

    // Nodes protrude sideways off the cane: outward when the cane shares
    // its mount, alternating otherwise, so every node touches exactly one
    // cane.
    for (int j = 1; j <= cane.node_count; ++j) {
        const int row = ventral ? base_row + j * cane.node_spacing_px
                                : base_row - j * cane.node_spacing_px;
        bool left;
        if (slot_count == 1)
            left = (j % 2 == 1);
        else
            left = (slot_of == 0);

        Rect node_rect = left ? Rect{rect.x0 - 3, row - 1, rect.x0 + 1, row + 1}
                              : Rect{rect.x1 - 1, row - 1, rect.x1 + 3, row + 1};
        if (node_rect.y0 < rect.y0 || node_rect.y1 > rect.y1)
            throw SpecError("node band leaves its cane");

        add_draft(OrganClass::Node, node_rect, cane_id);
        Draft& node = drafts_.back();
        node.origin = {left ? rect.x0 + 0.5 : rect.x1 - 0.5, double(row)};
        node.endpoint = rect_endpoint(node_rect, node.origin, true);
    }
}

void SceneBuilder::lay_out_unit(const UnitSpec& unit) {
    const Rect cordon = drafts_[0].rect;
    const int attach_row = unit.ventral ? cordon.y1 : cordon.y0;
    const int c = unit.center_col;

    auto stack_rect = [&](int below_of_row, int length, int half_width) -> Rect {
        if (!unit.ventral)
            return {c - half_width, below_of_row - length + 1, c + half_width, below_of_row};
        return {c - half_width, below_of_row, c + half_width, below_of_row + length - 1};
    };

    if (unit.kind == UnitKind::DirectCane) {
        if (unit.canes.size() != 1) throw SpecError("a direct-cane unit carries exactly one cane");
        add_cane(unit.canes.front(), cordon, 0, unit.ventral, 0, 1);
        region_ids_.push_back(int(drafts_.size()) - 1 - unit.canes.front().node_count);
        region_basal_cane_.push_back(region_ids_.back());
        return;
    }

    const int half = (unit.stub_width_px - 1) / 2;
    Rect stub = stack_rect(attach_row, unit.stub_length_px, half);

    int mount_id;
    Rect mount;
    if (unit.kind == UnitKind::Spur || unit.kind == UnitKind::Arm) {
        const OrganClass cls =
            unit.kind == UnitKind::Spur ? OrganClass::Spur : OrganClass::Arm;
        mount_id = add_draft(cls, stub, 0);
        drafts_.back().origin = {double(c), double(attach_row)};
        drafts_.back().endpoint = rect_endpoint(stub, drafts_.back().origin, !unit.ventral);
        mount = stub;
    } else {  // ArmSpur: arm on the cordon, spur on the arm
        const int arm_id = add_draft(OrganClass::Arm, stub, 0);
        drafts_.back().origin = {double(c), double(attach_row)};
        drafts_.back().endpoint = rect_endpoint(stub, drafts_.back().origin, !unit.ventral);

        const int spur_attach = unit.ventral ? stub.y1 : stub.y0;
        Rect spur = stack_rect(spur_attach, std::max(20, unit.stub_length_px - 4),
                               std::max(2, half - 1));
        mount_id = add_draft(OrganClass::Spur, spur, arm_id);
        drafts_.back().origin = {double(c), double(spur_attach)};
        drafts_.back().endpoint = rect_endpoint(spur, drafts_.back().origin, !unit.ventral);
        mount = spur;
        region_ids_.push_back(arm_id);
    }
    if (unit.kind != UnitKind::ArmSpur) region_ids_.push_back(mount_id);

    int first_cane = -1;
    for (size_t i = 0; i < unit.canes.size(); ++i) {
        add_cane(unit.canes[i], mount, mount_id, unit.ventral, int(i), int(unit.canes.size()));
        if (i == 0) first_cane = int(drafts_.size()) - 1 - unit.canes[i].node_count;
    }
    region_basal_cane_.push_back(first_cane);
}

SceneBundle SceneBuilder::build() {
    spec_.intrinsics.validate();
    if (spec_.cordon_diameter_px < 8)
        throw SpecError("cordon diameter must be at least 8 px for the location bands");

    const Rect cordon{spec_.cordon_col, spec_.cordon_row,
                      spec_.cordon_col + spec_.cordon_length_px - 1,
                      spec_.cordon_row + spec_.cordon_diameter_px - 1};
    add_draft(OrganClass::MainCordon, cordon, -1);
    drafts_[0].origin = {double(cordon.x0 + 1), cordon.y0 + (spec_.cordon_diameter_px - 1) / 2.0};
    drafts_[0].endpoint = {double(cordon.x1), double(cordon.y0)};

    std::vector<UnitSpec> units = spec_.units;
    std::sort(units.begin(), units.end(),
              [](const UnitSpec& a, const UnitSpec& b) { return a.center_col < b.center_col; });
    int last_right_edge = -1;
    for (const UnitSpec& unit : units) {
        lay_out_unit(unit);
        // No horizontal cross-talk between units: dilation may reach 15px.
        int left_edge = unit.center_col - unit.stub_width_px / 2 - 12;
        if (left_edge <= last_right_edge + 16)
            throw SpecError("units are too close together for independent attachment");
        last_right_edge = unit.center_col + unit.stub_width_px / 2 + 12;
    }

    SceneBundle bundle;
    bundle.spec = spec_;
    bundle.intrinsics = spec_.intrinsics;

    // Records: rectangle masks plus the matching polygon rings.
    for (size_t i = 0; i < drafts_.size(); ++i) {
        InstanceRecord rec;
        rec.instance_id = int(i);
        rec.source_annotation_id = int(i) + 1;
        rec.organ_class = drafts_[i].organ_class;
        rec.polygons = {rect_ring(drafts_[i].rect)};
        rec.mask = Mask(spec_.width, spec_.height);
        fill_rect(rec.mask, drafts_[i].rect.bbox());
        rec.bbox = rec.mask.bbox();
        bundle.records.push_back(std::move(rec));
    }

    // Depth: the organ silhouette sits on a flat plane, background is
    // invalid; optional gaussian noise on the organ pixels.
    auto depth = std::make_shared<DepthImage>(spec_.width, spec_.height, 0);
    Rng rng(spec_.seed ^ 0x9e3779b97f4a7c15ull);
    const double scale = spec_.intrinsics.depth_scale;
    for (const InstanceRecord& rec : bundle.records) {
        const BBox& b = rec.bbox;
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x) {
                if (!rec.mask.at(x, y)) continue;
                double meters = spec_.depth_plane_m;
                if (spec_.depth_noise_sigma_m > 0.0)
                    meters = rng.normal(meters, spec_.depth_noise_sigma_m);
                const long units = std::lround(meters / scale);
                depth->set(x, y, uint16_t(std::clamp(units, 1l, 65535l)));
            }
    }
    bundle.depth = depth;

    // Truth tree straight from the construction.
    PlantModel& truth = bundle.truth_tree;
    truth.width = spec_.width;
    truth.height = spec_.height;
    truth.intrinsics = spec_.intrinsics;
    truth.depth = depth;
    for (size_t i = 0; i < drafts_.size(); ++i) {
        GrapevineItem item;
        item.instance = bundle.records[i];
        item.origin_px = drafts_[i].origin;
        item.endpoint_px = drafts_[i].endpoint;
        item.origin_3d = to_3d(drafts_[i].origin);
        item.endpoint_3d = to_3d(drafts_[i].endpoint);
        if (drafts_[i].parent >= 0) {
            item.parent = drafts_[i].parent;
            item.distance_from_parent_px =
                distance(drafts_[size_t(drafts_[i].parent)].origin, drafts_[i].origin);
        }
        truth.items.push_back(std::move(item));
    }
    for (size_t i = 0; i < drafts_.size(); ++i)
        if (drafts_[i].parent >= 0)
            truth.items[size_t(drafts_[i].parent)].children.push_back(int(i));
    for (GrapevineItem& item : truth.items)
        std::sort(item.children.begin(), item.children.end(), [&](int a, int b) {
            const double da = truth.items[size_t(a)].distance_from_parent_px;
            const double db = truth.items[size_t(b)].distance_from_parent_px;
            if (da != db) return da < db;
            return a < b;
        });
    truth.roots = {0};

    // Truth assessments and expected cuts, from the layout alone. The
    // dorsal/ventral margins hold for every legal diameter (>= 8 px at
    // the default sector angles), so location follows the attachment side.
    PipelineConfig defaults;
    defaults.intrinsics = spec_.intrinsics;
    for (size_t r = 0; r < region_ids_.size(); ++r) {
        const int region_id = region_ids_[r];
        const int cane_id = region_basal_cane_[r];
        const GrapevineItem& region_item = truth.items[size_t(region_id)];

        PruningRegion region;
        region.item_id = region_id;
        region.cordon_id = 0;
        if (cane_id >= 0) region.basal_cane_id = cane_id;

        RegionAssessment a;
        a.has_basal_cane = cane_id >= 0;
        const UnitSpec& unit = units[r];
        a.location = unit.ventral ? RegionLocation::Ventral : RegionLocation::Dorsal;

        a.cane_count = int(unit.canes.size());

        if (cane_id >= 0) {
            const GrapevineItem& cane = truth.items[size_t(cane_id)];
            a.growth = classify_growth_direction(cane.origin_3d, cane.endpoint_3d,
                                                 defaults.alpha_l, defaults.alpha_c);
            const int w = cane.instance.bbox.width();
            a.vigor_m = (w - 1) * spec_.depth_plane_m / spec_.intrinsics.fx;
        }

        switch (unit.kind) {
            case UnitKind::DirectCane:
                a.is_new = true;
                break;
            case UnitKind::Arm:
                a.is_replacement = cane_id >= 0;
                break;
            default: break;
        }

        // Adjacent-region distance from the truth origins.
        double prev = kInf, next = kInf;
        if (r > 0)
            prev = distance(*region_item.origin_3d,
                            *truth.items[size_t(region_ids_[r - 1])].origin_3d);
        if (r + 1 < region_ids_.size())
            next = distance(*region_item.origin_3d,
                            *truth.items[size_t(region_ids_[r + 1])].origin_3d);
        a.adjacent_distance_m = defaults.adjacency_metric == AdjacencyMetric::Max
                                    ? std::max(prev, next)
                                    : std::min(prev, next);

        bundle.truth_assessments.emplace_back(region, a);
    }

    // Expected cuts mirror the default decision table on the truth
    // assessments, with positions from the known rectangles.
    for (const auto& [region, a] : bundle.truth_assessments) {
        const int N = defaults.spur_nodes_n;
        const GrapevineItem* cane =
            region.basal_cane_id ? &truth.items[size_t(*region.basal_cane_id)] : nullptr;

        auto along = [&](const GrapevineItem& item, double d_m) -> Point2 {
            const double len_m = distance(*item.origin_3d, *item.endpoint_3d);
            const double t = std::clamp(d_m / len_m, 0.0, 1.0);
            return item.origin_px + t * (item.endpoint_px - item.origin_px);
        };

        TruthPoint tp;
        tp.region_id = region.item_id;
        const bool vigor_ok = a.vigor_m && *a.vigor_m >= defaults.vigor_min_m &&
                              *a.vigor_m <= defaults.vigor_max_m;

        if (a.is_new && a.adjacent_distance_m < defaults.adjacency_min_m) {
            tp.cut = CutType::CleanCut;
            tp.target_item_id = region.item_id;
            tp.position_px = along(truth.items[size_t(region.item_id)], defaults.cut_offset_d_m);
            bundle.truth_points.push_back(tp);
            continue;
        }
        if (a.is_new && a.location == RegionLocation::Ventral) {
            tp.cut = CutType::BaseBudCut;
            const GrapevineItem& target = cane ? *cane : truth.items[size_t(region.item_id)];
            tp.target_item_id = target.id();
            GrapevineItem seg = target;
            if (!target.children.empty()) {
                const GrapevineItem& first = truth.items[size_t(target.children.front())];
                seg.endpoint_px = first.origin_px;
                seg.endpoint_3d = first.origin_3d;
            }
            tp.position_px = along(seg, defaults.cut_offset_d_m);
            bundle.truth_points.push_back(tp);
            continue;
        }

        std::optional<CutType> cut;
        if (a.is_replacement && cane)
            cut = CutType::ReplacementCut;
        else if (cane && a.growth == GrowthDirection::Vertical && vigor_ok)
            cut = CutType::SpurCut;
        else if (cane && (a.growth == GrowthDirection::NotVertical ||
                          (a.vigor_m && !vigor_ok)))
            cut = CutType::BaseBudCut;
        else if (a.cane_count == 0)
            cut = std::nullopt;
        else
            cut = CutType::SpurCut;
        if (!cut) continue;

        const GrapevineItem& target = cane ? *cane : truth.items[size_t(region.item_id)];
        tp.cut = *cut;
        tp.target_item_id = target.id();
        if (*cut == CutType::BaseBudCut) {
            GrapevineItem seg = target;
            if (!target.children.empty()) {
                const GrapevineItem& first = truth.items[size_t(target.children.front())];
                seg.endpoint_px = first.origin_px;
                seg.endpoint_3d = first.origin_3d;
            }
            tp.position_px = along(seg, defaults.cut_offset_d_m);
            bundle.truth_points.push_back(tp);
            continue;
        }

        // Spur / replacement: midpoint between node N and N+1, or the
        // flagged along-cane fallback.
        if (int(target.children.size()) >= N + 1) {
            const GrapevineItem& kept = truth.items[size_t(target.children[size_t(N) - 1])];
            const GrapevineItem& removed = truth.items[size_t(target.children[size_t(N)])];
            tp.position_px = 0.5 * (kept.origin_px + removed.origin_px);
        } else {
            tp.fallback = true;
            tp.position_px = along(target, defaults.cut_offset_d_m * (N + 1));
        }
        bundle.truth_points.push_back(tp);

        if (*cut == CutType::ReplacementCut || !a.is_new) {
            if (cane && cane->parent &&
                truth.items[size_t(*cane->parent)].organ_class() != OrganClass::MainCordon) {
                TruthPoint parent_tp;
                parent_tp.cut = *cut;
                parent_tp.region_id = region.item_id;
                parent_tp.target_item_id = *cane->parent;
                parent_tp.parent_cut = true;
                bundle.truth_points.push_back(parent_tp);
            }
        }
    }

    return bundle;
}

} // namespace

SceneBundle generate_scene(const SceneSpec& spec) {
    return SceneBuilder(spec).build();
}

SceneSpec default_scene_spec(uint64_t seed) {
    Rng rng(seed);
    SceneSpec spec;
    spec.seed = seed;
    spec.cordon_diameter_px = rng.uniform_int(18, 26);
    spec.cordon_row = rng.uniform_int(210, 250);
    spec.cordon_length_px = rng.uniform_int(500, 540);

    const int unit_count = rng.uniform_int(3, 6);
    for (int k = 0; k < unit_count; ++k) {
        UnitSpec unit;
        unit.center_col = spec.cordon_col +
                          int(std::lround((k + 0.5) * spec.cordon_length_px / double(unit_count)));

        const double kind_roll = rng.uniform();
        if (kind_roll < 0.45)
            unit.kind = UnitKind::Spur;
        else if (kind_roll < 0.60)
            unit.kind = UnitKind::Arm;
        else if (kind_roll < 0.75)
            unit.kind = UnitKind::ArmSpur;
        else
            unit.kind = UnitKind::DirectCane;

        unit.ventral = rng.uniform() < 0.2;
        unit.stub_length_px = rng.uniform_int(22, 30);

        const int cane_count = unit.kind == UnitKind::DirectCane ? 1 : rng.uniform_int(1, 2);
        const int width = rng.uniform_int(5, 7);
        unit.stub_width_px = cane_count == 2 ? 2 * width + 5 : std::max(9, width + 4);
        if (unit.stub_width_px % 2 == 0) ++unit.stub_width_px;

        for (int i = 0; i < cane_count; ++i) {
            CaneSpec cane;
            cane.width_px = width;
            cane.length_px = rng.uniform_int(70, 110);
            const double node_roll = rng.uniform();
            if (node_roll < 0.10)
                cane.node_count = 0;
            else if (node_roll < 0.20)
                cane.node_count = 1;
            else if (node_roll < 0.35)
                cane.node_count = 2;
            else if (node_roll < 0.75)
                cane.node_count = 3;
            else
                cane.node_count = 4;
            cane.node_spacing_px = rng.uniform_int(14, 20);
            if (cane.node_count > 0)
                cane.node_spacing_px =
                    std::min(cane.node_spacing_px, (cane.length_px - 6) / cane.node_count);
            unit.canes.push_back(cane);
        }
        spec.units.push_back(unit);
    }
    return spec;
}

SceneBundle perturb(const SceneBundle& bundle, const std::vector<PerturbOp>& ops, uint64_t seed) {
    SceneBundle out = bundle;
    out.depth = std::make_shared<DepthImage>(*bundle.depth);
    out.truth_tree.depth = out.depth;
    Rng rng(seed);

    bool masks_touched = false;
    for (const PerturbOp& op : ops) {
        switch (op.kind) {
            case PerturbOp::Kind::EraseRowBand: {
                if (op.target_instance < 0 || op.target_instance >= int(out.records.size()))
                    throw SpecError("perturbation targets a missing instance");
                Mask& mask = out.records[size_t(op.target_instance)].mask;
                const BBox box = mask.bbox();
                for (int y = op.band_start; y < op.band_start + op.band_size; ++y) {
                    if (y < box.y0 || y > box.y1) continue;
                    for (int x = box.x0; x <= box.x1; ++x)
                        if (mask.at(x, y)) mask.clear(x, y);
                }
                masks_touched = true;
                break;
            }
            case PerturbOp::Kind::DepthNoise: {
                DepthImage& depth = *out.depth;
                const double scale = out.intrinsics.depth_scale;
                for (int y = 0; y < depth.height(); ++y)
                    for (int x = 0; x < depth.width(); ++x) {
                        if (!depth.valid(x, y)) continue;
                        const double meters = depth.at(x, y) * scale +
                                              rng.normal(0.0, op.sigma_m);
                        depth.set(x, y,
                                  uint16_t(std::clamp(std::lround(meters / scale), 1l, 65535l)));
                    }
                break;
            }
        }
    }

    if (masks_touched) {
        // Re-split edited masks into components and re-densify IDs.
        std::vector<InstanceRecord> rebuilt;
        for (InstanceRecord& rec : out.records) {
            if (rec.mask.empty()) continue;
            auto components = connected_components(rec.mask);
            for (const auto& comp : components) {
                InstanceRecord part;
                part.instance_id = int(rebuilt.size());
                part.source_annotation_id = int(rebuilt.size()) + 1;
                part.organ_class = rec.organ_class;
                part.mask = Mask(rec.mask.width(), rec.mask.height());
                for (const Pixel& p : comp) part.mask.set(p.x, p.y);
                part.bbox = part.mask.bbox();

                // Bands cross the whole organ, so every component stays a
                // rectangle; anything else cannot be rendered back to a
                // polygon ring.
                if (size_t(part.bbox.width()) * size_t(part.bbox.height()) != comp.size())
                    throw SpecError("perturbation produced a non-rectangular fragment");
                part.polygons = {rect_ring(
                    {part.bbox.x0, part.bbox.y0, part.bbox.x1, part.bbox.y1})};
                rebuilt.push_back(std::move(part));
            }
        }
        out.records = std::move(rebuilt);
    }
    return out;
}

ModelScore score_model(const PlantModel& predicted, const PlantModel& truth) {
    if (predicted.items.size() != truth.items.size())
        throw ScoringError("models cover different instance-ID universes");

    const auto predicted_edges = model_edges(predicted);
    const auto truth_edges = model_edges(truth);
    std::set<std::pair<int, int>> pred(predicted_edges.begin(), predicted_edges.end());
    std::set<std::pair<int, int>> want(truth_edges.begin(), truth_edges.end());

    size_t tp = 0;
    for (const auto& e : pred)
        if (want.count(e)) ++tp;

    ModelScore score;
    score.edge_precision = pred.empty() ? 1.0 : double(tp) / double(pred.size());
    score.edge_recall = want.empty() ? 1.0 : double(tp) / double(want.size());
    score.tree_isomorphic = pred == want && predicted.roots == truth.roots;
    return score;
}

AnnotationScene bundle_to_scene(const SceneBundle& bundle) {
    AnnotationScene scene;
    scene.image_id = 1;
    scene.image_name = "synthetic_" + std::to_string(bundle.spec.seed) + ".png";
    scene.width = bundle.spec.width;
    scene.height = bundle.spec.height;
    scene.records = bundle.records;
    return scene;
}

} // namespace vineprune
