#pragma once

#include <cmath>

#include <json.hpp>

#include "vineprune/geometry.hpp"

namespace vineprune {

// All floats in emitted JSON are rounded to 6 decimals so repeated runs
// produce byte-identical files.
inline double round6(double v) {
    if (!std::isfinite(v)) return v;
    return std::round(v * 1e6) / 1e6;
}

inline nlohmann::json json_point(const Point2& p) {
    return nlohmann::json::array({round6(p.x), round6(p.y)});
}

inline nlohmann::json json_point(const Point3& p) {
    return nlohmann::json::array({round6(p.x), round6(p.y), round6(p.z)});
}

} // namespace vineprune
