#include "vineprune/camera.hpp"

#include <algorithm>
#include <cmath>

#include "vineprune/errors.hpp"

namespace vineprune {

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
        throw ConfigError("camera focal lengths must be positive");
    if (!(depth_scale > 0.0))
        throw ConfigError("depth_scale must be positive");
}

Point3 deproject(const Point2& pixel, double depth_m, const CameraIntrinsics& intr) {
    if (!(depth_m > 0.0)) throw DepthError("deproject requires positive depth");
    return {(pixel.x - intr.cx) * depth_m / intr.fx,
            (pixel.y - intr.cy) * depth_m / intr.fy,
            depth_m};
}

Point2 project(const Point3& p, const CameraIntrinsics& intr) {
    return {p.x * intr.fx / p.z + intr.cx, p.y * intr.fy / p.z + intr.cy};
}

double estimate_real_depth(const Pixel& pixel, const DepthImage& depth,
                           const CameraIntrinsics& intr, int window_w, int fallback_radius) {
    std::vector<uint16_t> samples;
    samples.reserve(size_t(2 * window_w + 1) * (2 * window_w + 1));
    for (int dy = -window_w; dy <= window_w; ++dy)
        for (int dx = -window_w; dx <= window_w; ++dx) {
            int x = pixel.x + dx, y = pixel.y + dy;
            if (depth.in_bounds(x, y) && depth.valid(x, y)) samples.push_back(depth.at(x, y));
        }

    if (!samples.empty()) {
        std::sort(samples.begin(), samples.end());
        const size_t n = samples.size();
        double units = (n % 2 == 1) ? samples[n / 2]
                                    : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
        return units * intr.depth_scale;
    }

    // Window all-invalid: nearest valid pixel by Euclidean distance,
    // ties broken (dy, dx) lexicographically for determinism.
    for (int r = window_w + 1; r <= fallback_radius; ++r) {
        long best_d2 = -1;
        uint16_t best_value = 0;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                int x = pixel.x + dx, y = pixel.y + dy;
                if (!depth.in_bounds(x, y) || !depth.valid(x, y)) continue;
                long d2 = long(dx) * dx + long(dy) * dy;
                if (best_d2 < 0 || d2 < best_d2) {
                    best_d2 = d2;
                    best_value = depth.at(x, y);
                }
            }
        if (best_d2 >= 0) return best_value * intr.depth_scale;
    }
    throw DepthError("no valid depth within fallback radius");
}

} // namespace vineprune
