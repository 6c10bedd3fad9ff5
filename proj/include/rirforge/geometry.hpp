// Minimal 3D primitives shared by the solvers: points, axis-aligned boxes,
// segment/box intersection used for occlusion tests.
#pragma once

#include <array>
#include <cmath>

namespace rirforge {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

struct AxisAlignedBox {
  Point3 min_corner;
  Point3 max_corner;

  bool contains(const Point3& p, double eps = 0.0) const {
    return p.x > min_corner.x - eps && p.x < max_corner.x + eps &&
           p.y > min_corner.y - eps && p.y < max_corner.y + eps &&
           p.z > min_corner.z - eps && p.z < max_corner.z + eps;
  }
};

// Slab test for the closed segment [a, b] against a closed box.
bool segment_intersects_box(const Point3& a, const Point3& b, const AxisAlignedBox& box);

// Nearest entry parameter t in (t_min, 1] where the segment a + t*(b-a)
// enters the box, or a negative value if it misses.
double segment_box_entry(const Point3& a, const Point3& b, const AxisAlignedBox& box,
                         double t_min = 0.0);

}  // namespace rirforge
