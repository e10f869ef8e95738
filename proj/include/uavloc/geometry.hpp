#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace uavloc {

/// Point in a local East-North-Up Cartesian frame, meters.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

/// N time-synchronized receivers plus the index of the reference sensor
/// that anchors all range differences.
struct SensorNetwork {
  std::vector<Position> sensors;
  std::size_t reference_index = 0;

  std::size_t size() const { return sensors.size(); }
  const Position& reference() const { return sensors[reference_index]; }

  /// Throws std::invalid_argument on N < 4, bad reference index, or
  /// coincident sensors (pairwise distance <= 1e-6 m).
  void validate() const;
};

struct Waypoint {
  std::string label;
  Position position;
  double hover_seconds = 0.0;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;
  double sample_interval_s = 1.0;
  double speed_mps = 5.0;

  void validate() const;
};

struct TrajectorySample {
  double time_s = 0.0;
  Position position;
};

/// Constant-speed linear interpolation between waypoints, holding for
/// hover_seconds at each waypoint. First sample at the first waypoint,
/// one sample every sample_interval_s.
std::vector<TrajectorySample> sample_trajectory(const Trajectory& t);

struct Box {
  Position min;
  Position max;
};

/// Vertical cylinder with its base on the ground plane (z = 0).
struct Cylinder {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double height = 0.0;
};

using Obstacle = std::variant<Box, Cylinder>;

void validate(const Obstacle& o);

struct GeodeticOrigin {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

/// Local tangent-plane (equirectangular) conversion, adequate for sites
/// up to a couple of kilometers across.
Position geodetic_to_enu(const GeodeticOrigin& origin, double lat_deg,
                         double lon_deg, double alt_m);

}  // namespace uavloc
