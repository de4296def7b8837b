#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace vineprune {

// Integer pixel coordinate, x = column, y = row (y grows downward).
struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
    friend auto operator<=>(const Pixel& a, const Pixel& b) {
        if (a.y != b.y) return a.y <=> b.y;
        return a.x <=> b.x;
    }
};

// Sub-pixel image point.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

// Metric point in the camera frame: x right, y down, z forward, meters.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator*(double s, const Point2& p) { return {s * p.x, s * p.y}; }

inline Point3 operator-(const Point3& a, const Point3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Point3 operator+(const Point3& a, const Point3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }

inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }
inline double norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

// Inclusive pixel rectangle: x0 <= x <= x1, y0 <= y <= y1.
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = -1;
    int y1 = -1;

    bool empty() const { return x1 < x0 || y1 < y0; }
    int width() const { return empty() ? 0 : x1 - x0 + 1; }
    int height() const { return empty() ? 0 : y1 - y0 + 1; }
    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }

    void expand(int x, int y) {
        if (empty()) {
            x0 = x1 = x;
            y0 = y1 = y;
            return;
        }
        if (x < x0) x0 = x;
        if (x > x1) x1 = x;
        if (y < y0) y0 = y;
        if (y > y1) y1 = y;
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

// One closed polygon ring, vertices in pixel coordinates.
using PolygonRing = std::vector<Point2>;

} // namespace vineprune
