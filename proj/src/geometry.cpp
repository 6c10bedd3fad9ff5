#include "rirforge/geometry.hpp"

#include <algorithm>
#include <limits>

namespace rirforge {

namespace {

// Computes the [t_enter, t_exit] parameter interval of the infinite line
// a + t*(b-a) clipped against the box slabs. Empty interval => miss.
bool clip_slabs(const Point3& a, const Point3& b, const AxisAlignedBox& box,
                double& t_enter, double& t_exit) {
  t_enter = -std::numeric_limits<double>::infinity();
  t_exit = std::numeric_limits<double>::infinity();
  const Point3 d = b - a;
  for (int axis = 0; axis < 3; ++axis) {
    const double origin = a[axis];
    const double dir = d[axis];
    const double lo = box.min_corner[axis];
    const double hi = box.max_corner[axis];
    if (std::abs(dir) < 1e-300) {
      if (origin < lo || origin > hi) return false;
      continue;
    }
    double t0 = (lo - origin) / dir;
    double t1 = (hi - origin) / dir;
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return false;
  }
  return true;
}

}  // namespace

bool segment_intersects_box(const Point3& a, const Point3& b, const AxisAlignedBox& box) {
  double t_enter, t_exit;
  if (!clip_slabs(a, b, box, t_enter, t_exit)) return false;
  return t_exit >= 0.0 && t_enter <= 1.0;
}

double segment_box_entry(const Point3& a, const Point3& b, const AxisAlignedBox& box,
                         double t_min) {
  double t_enter, t_exit;
  if (!clip_slabs(a, b, box, t_enter, t_exit)) return -1.0;
  if (t_exit < t_min || t_enter > 1.0) return -1.0;
  // Segment may start inside the box; the first boundary crossing is t_exit.
  const double t = t_enter > t_min ? t_enter : t_exit;
  return (t > t_min && t <= 1.0) ? t : -1.0;
}

}  // namespace rirforge
