#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "vineprune/camera.hpp"
#include "vineprune/coco.hpp"
#include "vineprune/raster.hpp"

namespace vineprune::test {

// Fresh scratch directory under the system temp root.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    auto dir = std::filesystem::temp_directory_path() /
               ("vineprune_" + tag + "_" + std::to_string(stamp) + "_" +
                std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir);
    return dir;
}

inline Mask mask_from_rects(int width, int height, const std::vector<BBox>& rects) {
    Mask mask(width, height);
    for (const BBox& r : rects) fill_rect(mask, r);
    return mask;
}

inline InstanceRecord record_from_rects(int id, OrganClass organ_class, int width, int height,
                                        const std::vector<BBox>& rects) {
    InstanceRecord rec;
    rec.instance_id = id;
    rec.source_annotation_id = id + 1;
    rec.organ_class = organ_class;
    rec.mask = mask_from_rects(width, height, rects);
    rec.bbox = rec.mask.bbox();
    for (const BBox& r : rects)
        rec.polygons.push_back({{double(r.x0), double(r.y0)},
                                {double(r.x1), double(r.y0)},
                                {double(r.x1), double(r.y1)},
                                {double(r.x0), double(r.y1)}});
    return rec;
}

inline DepthImage uniform_depth(int width, int height, uint16_t value) {
    return DepthImage(width, height, value);
}

inline CameraIntrinsics test_intrinsics(double fx = 600.0, double fy = 600.0, double cx = 320.0,
                                        double cy = 240.0, double depth_scale = 0.001) {
    return {fx, fy, cx, cy, depth_scale};
}

} // namespace vineprune::test
