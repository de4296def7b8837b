#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vineprune/geometry.hpp"
#include "vineprune/raster.hpp"

namespace vineprune {

// The five annotated grapevine organ classes.
enum class OrganClass { MainCordon, Arm, Spur, Cane, Node };

const char* to_string(OrganClass c);

// name -> class lookup; names are matched after normalization (lowercase,
// '-'/'_' folded to spaces, surrounding whitespace dropped).
using ClassMap = std::map<std::string, OrganClass>;

// Map covering exactly the five organ names.
ClassMap default_class_map();

std::string normalize_class_name(std::string_view name);

// One ingested organ annotation. The mask is the rasterization of the
// polygons at scene resolution and the bbox is tight around it.
struct InstanceRecord {
    int instance_id = 0;      // dense 0..k-1 within the scene
    int source_annotation_id = 0;
    OrganClass organ_class = OrganClass::Cane;
    std::vector<PolygonRing> polygons;
    Mask mask;
    BBox bbox;
};

// Scene-level result of reading one image's annotations.
struct AnnotationScene {
    int image_id = 0;
    std::string image_name;
    int width = 0;
    int height = 0;
    std::vector<InstanceRecord> records;
};

// Read a COCO instance-segmentation JSON (polygons only; RLE rejected).
// The file must reference exactly one image unless image_id selects one.
// Instance IDs are re-mapped to dense 0..k-1 in annotation-id order.
AnnotationScene parse_annotations(const std::string& json_text, const ClassMap& class_map,
                                  std::optional<int> image_id = std::nullopt);

AnnotationScene load_annotations(const std::string& path, const ClassMap& class_map,
                                 std::optional<int> image_id = std::nullopt);

// Serialize a scene back to COCO JSON. Re-parsing the output yields
// records with identical masks.
std::string write_coco(const AnnotationScene& scene);

} // namespace vineprune
