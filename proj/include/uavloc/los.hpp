#pragma once

#include <vector>

#include "uavloc/geometry.hpp"
#include "uavloc/tdoa.hpp"

namespace uavloc {

/// True iff the open segment (a, b) passes through the obstacle interior.
/// Endpoints or grazing contact on the surface do not block (tolerance 1e-9 m).
bool segment_blocked(const Position& a, const Position& b, const Obstacle& obs);

/// Eq-style LOS indicator: entry i true iff no obstacle blocks the
/// segment from x to sensor i.
LosVector classify(const SensorNetwork& net, const Position& x,
                   const std::vector<Obstacle>& obstacles);

}  // namespace uavloc
