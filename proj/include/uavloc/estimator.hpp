#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "uavloc/geometry.hpp"
#include "uavloc/tdoa.hpp"

namespace uavloc {

struct EstimatorOptions {
  std::optional<Position> init;
  double step_tolerance_m = 1e-6;
  int max_iterations = 100;
  double default_altitude_m = 40.0;  // init altitude when no init given
  int restarts = 3;
  double perturb_horizontal_m = 100.0;
  double perturb_vertical_m = 20.0;
  std::uint64_t multistart_seed = 0x75c471f0ull;
  // a converged fix farther than this many array radii from the sensor
  // centroid is reported as diverged; <= 0 disables the gate
  double max_range_factor = 10.0;
  double lambda_init = 1e-3;
};

struct EstimateResult {
  Position position;
  int iterations = 0;
  bool converged = false;
  double residual_norm_m = 0.0;  // unweighted ||m - mu(x)||
  bool flagged_outlier = false;
  std::string failure_reason;
};

/// Weighted nonlinear least squares (Levenberg-Marquardt) minimizing
/// (m - mu(x))^T Q^{-1} (m - mu(x)). Multi-start from the sensor centroid
/// plus seeded perturbations; the lowest-cost converged start wins.
EstimateResult estimate(const SensorNetwork& net, const TdoaMeasurement& meas,
                        const EstimatorOptions& opts = {});

/// Strict threshold: true iff distance(est, truth) > threshold_m.
bool flag_outlier(const Position& est, const Position& truth,
                  double threshold_m = 200.0);

}  // namespace uavloc
