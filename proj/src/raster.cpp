#include "vineprune/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "vineprune/errors.hpp"

namespace vineprune {

std::vector<Pixel> Mask::pixels() const {
    std::vector<Pixel> out;
    out.reserve(count_);
    const BBox& b = bbox();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x)
            if (at(x, y)) out.push_back({x, y});
    return out;
}

Point2 Mask::centroid() const {
    double sx = 0, sy = 0;
    size_t n = 0;
    const BBox& b = bbox();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x)
            if (at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
    return {sx / double(n), sy / double(n)};
}

void Mask::recompute_bbox() const {
    BBox fresh;
    // Previous bbox still bounds the set pixels after clears.
    const BBox scan = bbox_;
    for (int y = std::max(0, scan.y0); y <= std::min(height_ - 1, scan.y1); ++y)
        for (int x = std::max(0, scan.x0); x <= std::min(width_ - 1, scan.x1); ++x)
            if (at(x, y)) fresh.expand(x, y);
    bbox_ = fresh;
    bbox_dirty_ = false;
}

Mask dilate(const Mask& mask, int radius) {
    Mask out(mask.width(), mask.height());
    if (mask.empty()) return out;

    std::vector<Pixel> disc;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) disc.push_back({dx, dy});

    const BBox& b = mask.bbox();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            if (!mask.at(x, y)) continue;
            for (const Pixel& d : disc) {
                int nx = x + d.x, ny = y + d.y;
                if (out.in_bounds(nx, ny)) out.set(nx, ny);
            }
        }
    return out;
}

std::vector<std::pair<int, std::vector<Pixel>>> overlap_labels(const LabelMap& labels,
                                                               const Mask& mask) {
    std::map<int, std::vector<Pixel>> hits;
    const BBox& b = mask.bbox();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            if (!mask.at(x, y)) continue;
            int64_t id = labels.id_at(x, y);
            if (id >= 0) hits[int(id)].push_back({x, y});
        }
    return {hits.begin(), hits.end()};
}

int slot_index(const BBox& bbox, const std::vector<Pixel>& pixel_set, int n_slots) {
    double sx = 0, sy = 0;
    for (const Pixel& p : pixel_set) {
        sx += p.x;
        sy += p.y;
    }
    const double cx = sx / double(pixel_set.size());
    const double cy = sy / double(pixel_set.size());

    const bool vertical = bbox.height() >= bbox.width();
    const double along = vertical ? cy - bbox.y0 : cx - bbox.x0;
    const double extent = vertical ? bbox.height() - 1 : bbox.width() - 1;

    if (extent <= 0) return 1;
    const double frac = along / extent;
    int slot = int(std::floor(frac * n_slots)) + 1;
    return std::clamp(slot, 1, n_slots);
}

namespace {

// Squared distance from point to segment, for the boundary-inclusive test.
double point_segment_dist2(const Point2& p, const Point2& a, const Point2& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    const double px = a.x + t * dx - p.x;
    const double py = a.y + t * dy - p.y;
    return px * px + py * py;
}

constexpr double kOnEdgeEps2 = 1e-12;

} // namespace

bool point_in_polygon(const Point2& p, const PolygonRing& ring) {
    const size_t n = ring.size();
    if (n < 3) return false;

    for (size_t i = 0; i < n; ++i) {
        if (point_segment_dist2(p, ring[i], ring[(i + 1) % n]) <= kOnEdgeEps2) return true;
    }

    // Even-odd crossing count, half-open in y so vertices count once.
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = ring[i];
        const Point2& b = ring[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

Mask rasterize_polygons(const std::vector<PolygonRing>& rings, int width, int height) {
    Mask mask(width, height);
    for (const PolygonRing& ring : rings) {
        if (ring.size() < 3) throw GeometryError("polygon ring has fewer than 3 vertices");

        BBox box;
        for (const Point2& v : ring) {
            box.expand(int(std::floor(v.x)), int(std::floor(v.y)));
            box.expand(int(std::ceil(v.x)), int(std::ceil(v.y)));
        }
        box.x0 = std::max(box.x0, 0);
        box.y0 = std::max(box.y0, 0);
        box.x1 = std::min(box.x1, width - 1);
        box.y1 = std::min(box.y1, height - 1);

        for (int y = box.y0; y <= box.y1; ++y)
            for (int x = box.x0; x <= box.x1; ++x)
                if (point_in_polygon({double(x), double(y)}, ring)) mask.set(x, y);
    }
    return mask;
}

void fill_rect(Mask& mask, const BBox& rect) {
    const int x0 = std::max(rect.x0, 0);
    const int y0 = std::max(rect.y0, 0);
    const int x1 = std::min(rect.x1, mask.width() - 1);
    const int y1 = std::min(rect.y1, mask.height() - 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            mask.set(x, y);
}

std::vector<std::vector<Pixel>> connected_components(const Mask& mask) {
    std::vector<std::vector<Pixel>> components;
    if (mask.empty()) return components;

    const BBox& b = mask.bbox();
    const int bw = b.width();
    std::vector<uint8_t> seen(size_t(bw) * b.height(), 0);
    auto seen_at = [&](int x, int y) -> uint8_t& {
        return seen[size_t(y - b.y0) * bw + (x - b.x0)];
    };

    for (int sy = b.y0; sy <= b.y1; ++sy)
        for (int sx = b.x0; sx <= b.x1; ++sx) {
            if (!mask.at(sx, sy) || seen_at(sx, sy)) continue;
            std::vector<Pixel> comp;
            std::deque<Pixel> queue{{sx, sy}};
            seen_at(sx, sy) = 1;
            while (!queue.empty()) {
                Pixel p = queue.front();
                queue.pop_front();
                comp.push_back(p);
                const Pixel nbrs[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
                for (const Pixel& q : nbrs) {
                    if (!b.contains(q.x, q.y) || !mask.at(q.x, q.y) || seen_at(q.x, q.y)) continue;
                    seen_at(q.x, q.y) = 1;
                    queue.push_back(q);
                }
            }
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }

    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b2) { return a.front() < b2.front(); });
    return components;
}

} // namespace vineprune
