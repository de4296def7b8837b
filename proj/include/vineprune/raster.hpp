#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vineprune/geometry.hpp"

namespace vineprune {

// Binary raster at full scene resolution. Pixels are addressed (x, y)
// with x = column. A tight bounding box of the set pixels is kept
// alongside so mask walks stay proportional to organ size, not image size.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height) : width_(width), height_(height), data_(size_t(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
    bool at(int x, int y) const { return data_[size_t(y) * width_ + x] != 0; }

    void set(int x, int y) {
        uint8_t& cell = data_[size_t(y) * width_ + x];
        if (!cell) {
            cell = 1;
            ++count_;
            bbox_.expand(x, y);
        }
    }

    void clear(int x, int y) {
        uint8_t& cell = data_[size_t(y) * width_ + x];
        if (cell) {
            cell = 0;
            --count_;
            bbox_dirty_ = true;
        }
    }

    // Number of set pixels.
    size_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    // Tight bounding box of set pixels; empty box for an empty mask.
    const BBox& bbox() const {
        if (bbox_dirty_) recompute_bbox();
        return bbox_;
    }

    std::vector<Pixel> pixels() const;

    // Centroid of set pixels; mask must be non-empty.
    Point2 centroid() const;

    friend bool operator==(const Mask& a, const Mask& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    void recompute_bbox() const;

    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
    size_t count_ = 0;
    mutable BBox bbox_{};
    mutable bool bbox_dirty_ = false;
};

// Instance-ID raster: 0 = background, value v > 0 = instance v - 1.
// Built by stamping each instance mask with (id + 1); where two source
// masks overlap the higher instance ID wins.
class LabelMap {
public:
    LabelMap() = default;
    LabelMap(int width, int height) : width_(width), height_(height), data_(size_t(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }

    uint32_t raw(int x, int y) const { return data_[size_t(y) * width_ + x]; }
    void stamp(int x, int y, uint32_t instance_id) { data_[size_t(y) * width_ + x] = instance_id + 1; }

    // Instance ID at pixel, or -1 for background.
    int64_t id_at(int x, int y) const {
        uint32_t v = raw(x, y);
        return v == 0 ? -1 : int64_t(v) - 1;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint32_t> data_;
};

// Morphological dilation with a disc structuring element (offsets with
// dx^2 + dy^2 <= radius^2), clipped at the image border. radius >= 1.
Mask dilate(const Mask& mask, int radius);

// All instances overlapped by `mask` with the shared pixels, sorted by
// instance ID. Empty result when nothing overlaps.
std::vector<std::pair<int, std::vector<Pixel>>> overlap_labels(const LabelMap& labels,
                                                               const Mask& mask);

// Band index 1..n_slots along the bbox major axis (ties go to the
// vertical axis). Band 1 sits at the top (vertical) or left (horizontal)
// end; the band containing the centroid of `pixel_set` is returned,
// clamped so exact trailing-edge centroids land in band n_slots.
int slot_index(const BBox& bbox, const std::vector<Pixel>& pixel_set, int n_slots);

// Boundary-inclusive point-in-polygon: pixel centers exactly on an edge
// or vertex count as inside. Even-odd rule for the interior.
bool point_in_polygon(const Point2& p, const PolygonRing& ring);

// Rasterize polygon rings (union) onto a width x height canvas. Pixel
// centers sit at integer coordinates; boundary pixels are included.
Mask rasterize_polygons(const std::vector<PolygonRing>& rings, int width, int height);

// Fill a rectangle, clipped to the canvas.
void fill_rect(Mask& mask, const BBox& rect);

// 4-connected components of the set pixels, each as a pixel list sorted
// (row, col); components ordered by their first pixel.
std::vector<std::vector<Pixel>> connected_components(const Mask& mask);

} // namespace vineprune
