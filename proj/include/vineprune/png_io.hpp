#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vineprune/camera.hpp"

namespace vineprune {

// Simple interleaved 8-bit RGB raster for overlay rendering.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // 3 bytes per pixel, row-major

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(size_t(w) * h * 3, 0) {}

    void put(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
        size_t i = (size_t(y) * width + x) * 3;
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Load a 16-bit single-channel PNG as a depth raster (stored units; 0 is
// the invalid sentinel). 8-bit grayscale files are widened. Throws
// UsageError on unreadable files and DimensionError when expected
// dimensions are given and do not match.
DepthImage read_depth_png(const std::string& path, int expected_width = -1,
                          int expected_height = -1);

void write_depth_png(const std::string& path, const DepthImage& depth);

void write_rgb_png(const std::string& path, const RgbImage& image);

} // namespace vineprune
