#include "vineprune/coco.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vineprune/errors.hpp"

namespace vineprune {

using nlohmann::json;

const char* to_string(OrganClass c) {
    switch (c) {
        case OrganClass::MainCordon: return "main cordon";
        case OrganClass::Arm: return "arm";
        case OrganClass::Spur: return "spur";
        case OrganClass::Cane: return "cane";
        case OrganClass::Node: return "node";
    }
    return "?";
}

std::string normalize_class_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == '_' || c == '-') c = ' ';
        out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    }
    const size_t begin = out.find_first_not_of(' ');
    if (begin == std::string::npos) return "";
    const size_t end = out.find_last_not_of(' ');
    return out.substr(begin, end - begin + 1);
}

ClassMap default_class_map() {
    return {
        {"main cordon", OrganClass::MainCordon},
        {"arm", OrganClass::Arm},
        {"spur", OrganClass::Spur},
        {"cane", OrganClass::Cane},
        {"node", OrganClass::Node},
    };
}

namespace {

InstanceRecord make_record(int dense_id, int annotation_id, OrganClass organ_class,
                           std::vector<PolygonRing> polygons, int width, int height) {
    InstanceRecord rec;
    rec.instance_id = dense_id;
    rec.source_annotation_id = annotation_id;
    rec.organ_class = organ_class;
    rec.mask = rasterize_polygons(polygons, width, height);
    rec.polygons = std::move(polygons);

    if (rec.mask.empty()) {
        // Sub-pixel annotation: keep the nearest in-bounds pixel to the
        // polygon centroid so the record still has a footprint.
        double sx = 0, sy = 0;
        size_t n = 0;
        for (const PolygonRing& ring : rec.polygons)
            for (const Point2& v : ring) {
                sx += v.x;
                sy += v.y;
                ++n;
            }
        int px = std::clamp(int(std::lround(sx / double(n))), 0, width - 1);
        int py = std::clamp(int(std::lround(sy / double(n))), 0, height - 1);
        rec.mask.set(px, py);
    }
    rec.bbox = rec.mask.bbox();
    return rec;
}

} // namespace

AnnotationScene parse_annotations(const std::string& json_text, const ClassMap& class_map,
                                  std::optional<int> image_id) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid COCO JSON: ") + e.what());
    }
    if (!doc.contains("images") || !doc.contains("annotations") || !doc.contains("categories"))
        throw UsageError("COCO JSON must contain images, annotations and categories arrays");

    const json& images = doc["images"];
    if (images.empty()) throw UsageError("COCO JSON contains no images");

    const json* image = nullptr;
    if (image_id) {
        for (const json& im : images)
            if (im.at("id").get<int>() == *image_id) image = &im;
        if (!image)
            throw UsageError("image id " + std::to_string(*image_id) + " not present in file");
    } else if (images.size() == 1) {
        image = &images.front();
    } else {
        std::ostringstream msg;
        msg << "COCO file references " << images.size()
            << " images; select one with an image id. Available:";
        for (const json& im : images) {
            msg << " " << im.at("id").get<int>();
            if (im.contains("file_name")) msg << " (" << im["file_name"].get<std::string>() << ")";
        }
        throw UsageError(msg.str());
    }

    AnnotationScene scene;
    scene.image_id = image->at("id").get<int>();
    scene.image_name = image->value("file_name", std::string{});
    scene.width = image->at("width").get<int>();
    scene.height = image->at("height").get<int>();
    if (scene.width <= 0 || scene.height <= 0)
        throw UsageError("COCO image has non-positive dimensions");

    std::map<int, OrganClass> category_classes;
    for (const json& cat : doc["categories"]) {
        const std::string name = cat.at("name").get<std::string>();
        auto found = class_map.find(normalize_class_name(name));
        if (found == class_map.end())
            throw ClassMapError("COCO category '" + name + "' is not a grapevine organ class");
        category_classes[cat.at("id").get<int>()] = found->second;
    }

    struct Pending {
        int annotation_id;
        OrganClass organ_class;
        std::vector<PolygonRing> polygons;
    };
    std::vector<Pending> pending;
    for (const json& ann : doc["annotations"]) {
        if (ann.at("image_id").get<int>() != scene.image_id) continue;

        const json& seg = ann.at("segmentation");
        if (!seg.is_array())
            throw GeometryError("annotation " + std::to_string(ann.at("id").get<int>()) +
                                ": RLE segmentation is not supported, polygons only");

        Pending item;
        item.annotation_id = ann.at("id").get<int>();
        auto cat = category_classes.find(ann.at("category_id").get<int>());
        if (cat == category_classes.end())
            throw ClassMapError("annotation " + std::to_string(item.annotation_id) +
                                " references an unknown category id");
        item.organ_class = cat->second;

        for (const json& flat : seg) {
            if (!flat.is_array())
                throw GeometryError("annotation " + std::to_string(item.annotation_id) +
                                    ": RLE segmentation is not supported, polygons only");
            if (flat.size() < 6 || flat.size() % 2 != 0)
                throw GeometryError("annotation " + std::to_string(item.annotation_id) +
                                    ": polygon needs at least 3 (x, y) vertices");
            PolygonRing ring;
            ring.reserve(flat.size() / 2);
            for (size_t i = 0; i < flat.size(); i += 2)
                ring.push_back({flat[i].get<double>(), flat[i + 1].get<double>()});
            item.polygons.push_back(std::move(ring));
        }
        if (item.polygons.empty())
            throw GeometryError("annotation " + std::to_string(item.annotation_id) +
                                " has no polygons");
        pending.push_back(std::move(item));
    }

    std::sort(pending.begin(), pending.end(),
              [](const Pending& a, const Pending& b) { return a.annotation_id < b.annotation_id; });
    scene.records.reserve(pending.size());
    for (size_t i = 0; i < pending.size(); ++i)
        scene.records.push_back(make_record(int(i), pending[i].annotation_id,
                                            pending[i].organ_class, std::move(pending[i].polygons),
                                            scene.width, scene.height));
    return scene;
}

AnnotationScene load_annotations(const std::string& path, const ClassMap& class_map,
                                 std::optional<int> image_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open annotation file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_annotations(buffer.str(), class_map, image_id);
}

std::string write_coco(const AnnotationScene& scene) {
    json doc;
    doc["images"] = json::array(
        {{{"id", scene.image_id}, {"file_name", scene.image_name}, {"width", scene.width},
          {"height", scene.height}}});

    doc["categories"] = json::array();
    for (int c = 0; c < 5; ++c)
        doc["categories"].push_back({{"id", c + 1}, {"name", to_string(OrganClass(c))}});

    doc["annotations"] = json::array();
    for (const InstanceRecord& rec : scene.records) {
        json seg = json::array();
        for (const PolygonRing& ring : rec.polygons) {
            json flat = json::array();
            for (const Point2& v : ring) {
                flat.push_back(v.x);
                flat.push_back(v.y);
            }
            seg.push_back(std::move(flat));
        }
        doc["annotations"].push_back(
            {{"id", rec.source_annotation_id},
             {"image_id", scene.image_id},
             {"category_id", int(rec.organ_class) + 1},
             {"segmentation", std::move(seg)},
             {"bbox", {rec.bbox.x0, rec.bbox.y0, rec.bbox.width(), rec.bbox.height()}},
             {"area", rec.mask.count()},
             {"iscrowd", 0}});
    }
    return doc.dump(2);
}

} // namespace vineprune
