#include "uavloc/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace uavloc {

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void SensorNetwork::validate() const {
  if (sensors.size() < 4) {
    throw std::invalid_argument("N >= 4 required for 3D TDOA");
  }
  if (reference_index >= sensors.size()) {
    throw std::invalid_argument("reference_index out of range");
  }
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const Position& p = sensors[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw std::invalid_argument("sensor position not finite");
    }
    for (std::size_t j = i + 1; j < sensors.size(); ++j) {
      if (distance(sensors[i], sensors[j]) <= 1e-6) {
        throw std::invalid_argument("coincident sensors in network");
      }
    }
  }
}

void Trajectory::validate() const {
  if (waypoints.empty()) {
    throw std::invalid_argument("trajectory has no waypoints");
  }
  if (sample_interval_s <= 0.0) {
    throw std::invalid_argument("sample_interval_s must be positive");
  }
  if (speed_mps <= 0.0) {
    throw std::invalid_argument("speed_mps must be positive");
  }
  for (const Waypoint& w : waypoints) {
    if (w.hover_seconds < 0.0) {
      throw std::invalid_argument("hover_seconds must be nonnegative");
    }
  }
}

namespace {

struct Segment {
  double t0, t1;
  Position p0, p1;
};

Position lerp(const Position& a, const Position& b, double u) {
  return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), a.z + u * (b.z - a.z)};
}

}  // namespace

std::vector<TrajectorySample> sample_trajectory(const Trajectory& t) {
  t.validate();

  std::vector<Segment> segs;
  double clock = 0.0;
  for (std::size_t i = 0; i < t.waypoints.size(); ++i) {
    const Waypoint& w = t.waypoints[i];
    if (w.hover_seconds > 0.0) {
      segs.push_back({clock, clock + w.hover_seconds, w.position, w.position});
      clock += w.hover_seconds;
    }
    if (i + 1 < t.waypoints.size()) {
      const Waypoint& next = t.waypoints[i + 1];
      const double len = distance(w.position, next.position);
      if (len > 0.0) {
        const double dt = len / t.speed_mps;
        segs.push_back({clock, clock + dt, w.position, next.position});
        clock += dt;
      }
    }
  }

  std::vector<TrajectorySample> out;
  const double total = clock;
  const std::size_t n = static_cast<std::size_t>(std::floor(total / t.sample_interval_s + 1e-9)) + 1;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = static_cast<double>(k) * t.sample_interval_s;
    while (seg + 1 < segs.size() && tk > segs[seg].t1) ++seg;
    Position p;
    if (segs.empty()) {
      p = t.waypoints.front().position;
    } else {
      const Segment& s = segs[seg];
      const double span = s.t1 - s.t0;
      const double u = span > 0.0 ? std::clamp((tk - s.t0) / span, 0.0, 1.0) : 0.0;
      p = lerp(s.p0, s.p1, u);
    }
    out.push_back({tk, p});
  }
  return out;
}

void validate(const Obstacle& o) {
  if (const Box* b = std::get_if<Box>(&o)) {
    if (!(b->min.x < b->max.x && b->min.y < b->max.y && b->min.z < b->max.z)) {
      throw std::invalid_argument("box min must be componentwise below max");
    }
  } else {
    const Cylinder& c = std::get<Cylinder>(o);
    if (c.radius <= 0.0 || c.height <= 0.0) {
      throw std::invalid_argument("cylinder radius and height must be positive");
    }
  }
}

Position geodetic_to_enu(const GeodeticOrigin& origin, double lat_deg,
                         double lon_deg, double alt_m) {
  constexpr double kEarthRadius = 6378137.0;
  constexpr double kDegToRad = M_PI / 180.0;
  const double lat0 = origin.lat_deg * kDegToRad;
  return {(lon_deg - origin.lon_deg) * kDegToRad * kEarthRadius * std::cos(lat0),
          (lat_deg - origin.lat_deg) * kDegToRad * kEarthRadius,
          alt_m - origin.alt_m};
}

}  // namespace uavloc
