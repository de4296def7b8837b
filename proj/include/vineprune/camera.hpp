#pragma once

#include <cstdint>
#include <vector>

#include "vineprune/geometry.hpp"

namespace vineprune {

// Pinhole model plus the scale of the stored depth units.
struct CameraIntrinsics {
    double fx = 600.0;       // focal length, px
    double fy = 600.0;       // focal length, px
    double cx = 320.0;       // principal point, px
    double cy = 240.0;       // principal point, px
    double depth_scale = 0.001;  // meters per stored depth unit

    void validate() const;
};

// Per-pixel depth in stored units; 0 marks an invalid measurement.
class DepthImage {
public:
    DepthImage() = default;
    DepthImage(int width, int height, uint16_t fill = 0)
        : width_(width), height_(height), values_(size_t(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    uint16_t at(int x, int y) const { return values_[size_t(y) * width_ + x]; }
    void set(int x, int y, uint16_t v) { values_[size_t(y) * width_ + x] = v; }
    bool valid(int x, int y) const { return at(x, y) != 0; }

    const std::vector<uint16_t>& values() const { return values_; }
    std::vector<uint16_t>& values() { return values_; }

    friend bool operator==(const DepthImage&, const DepthImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint16_t> values_;
};

// Back-project a pixel at known metric depth into the camera frame.
// Throws DepthError for depth_m <= 0.
Point3 deproject(const Point2& pixel, double depth_m, const CameraIntrinsics& intr);

// Forward projection, the inverse of deproject for z > 0.
Point2 project(const Point3& p, const CameraIntrinsics& intr);

// Robust metric depth at a pixel: median of the valid samples in a
// (2*window_w + 1)^2 window; when the whole window is invalid, the
// nearest valid pixel within fallback_radius is used instead. Throws
// DepthError when nothing valid is in reach.
double estimate_real_depth(const Pixel& pixel, const DepthImage& depth,
                           const CameraIntrinsics& intr, int window_w = 2,
                           int fallback_radius = 24);

} // namespace vineprune
