#include "uavloc/los.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavloc {

namespace {

constexpr double kTol = 1e-9;  // meters

struct Interval {
  double lo, hi;
  bool empty() const { return !(lo < hi); }
};

// Clips [lo, hi] to the sub-interval where origin + t*dir lies inside
// (min, max) along one axis. Returns false when empty.
bool clip_axis(double origin, double dir, double min, double max, Interval& iv) {
  if (std::abs(dir) < 1e-15) {
    return origin > min && origin < max;
  }
  double t0 = (min - origin) / dir;
  double t1 = (max - origin) / dir;
  if (t0 > t1) std::swap(t0, t1);
  iv.lo = std::max(iv.lo, t0);
  iv.hi = std::min(iv.hi, t1);
  return !iv.empty();
}

bool blocked_by_box(const Position& a, const Position& b, const Box& box,
                    double eps_t) {
  Interval iv{eps_t, 1.0 - eps_t};
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  if (!clip_axis(a.x, dx, box.min.x, box.max.x, iv)) return false;
  if (!clip_axis(a.y, dy, box.min.y, box.max.y, iv)) return false;
  if (!clip_axis(a.z, dz, box.min.z, box.max.z, iv)) return false;
  return iv.hi - iv.lo > eps_t;
}

bool blocked_by_cylinder(const Position& a, const Position& b,
                         const Cylinder& cyl, double eps_t) {
  Interval iv{eps_t, 1.0 - eps_t};
  if (!clip_axis(a.z, b.z - a.z, 0.0, cyl.height, iv)) return false;

  const double dx = b.x - a.x, dy = b.y - a.y;
  const double ox = a.x - cyl.center_x, oy = a.y - cyl.center_y;
  const double qa = dx * dx + dy * dy;
  const double qb = 2.0 * (ox * dx + oy * dy);
  const double qc = ox * ox + oy * oy - cyl.radius * cyl.radius;
  if (qa < 1e-15) {
    if (qc >= 0.0) return false;  // vertical segment outside the circle
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) return false;
    const double sq = std::sqrt(disc);
    iv.lo = std::max(iv.lo, (-qb - sq) / (2.0 * qa));
    iv.hi = std::min(iv.hi, (-qb + sq) / (2.0 * qa));
    if (iv.empty()) return false;
  }
  return iv.hi - iv.lo > eps_t;
}

}  // namespace

bool segment_blocked(const Position& a, const Position& b, const Obstacle& obs) {
  const double len = distance(a, b);
  if (len <= kTol) {
    throw std::invalid_argument("segment_blocked: degenerate segment");
  }
  const double eps_t = kTol / len;
  if (const Box* box = std::get_if<Box>(&obs)) {
    return blocked_by_box(a, b, *box, eps_t);
  }
  return blocked_by_cylinder(a, b, std::get<Cylinder>(obs), eps_t);
}

LosVector classify(const SensorNetwork& net, const Position& x,
                   const std::vector<Obstacle>& obstacles) {
  LosVector v;
  v.s.resize(net.size(), true);
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (const Obstacle& obs : obstacles) {
      if (segment_blocked(x, net.sensors[i], obs)) {
        v.s[i] = false;
        break;
      }
    }
  }
  return v;
}

}  // namespace uavloc
