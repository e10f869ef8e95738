#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavloc/channel.hpp"
#include "uavloc/crlb.hpp"
#include "uavloc/estimator.hpp"
#include "uavloc/geometry.hpp"
#include "uavloc/los.hpp"
#include "uavloc/tdoa.hpp"

namespace uavloc {

struct Scenario {
  std::string name;
  SensorNetwork net;
  Trajectory trajectory;
  RadioConfig cfg;
  std::vector<Obstacle> obstacles;
  NlosBiasModel bias;
  int trials_per_epoch = 1;
  std::uint64_t seed = 0;
  double noise_scale = 1.0;
  double outlier_threshold_m = 200.0;
  EstimatorOptions estimator;

  void validate() const;
};

struct EpochRecord {
  double time_s = 0.0;
  int trial = 0;
  Position truth;
  Position estimate;
  double error_m = 0.0;
  std::vector<bool> los;
  double rmse_bound_m = 0.0;  // LOS CRLB at the truth point; inf if degenerate
  bool converged = false;
  bool outlier = false;
};

struct RunReport {
  std::string scenario_name;
  double outlier_threshold_m = 200.0;
  std::vector<EpochRecord> epochs;

  // aggregates over epochs, filled by finalize()
  std::size_t valid_count = 0;
  std::size_t total_count = 0;
  double valid_pct = 0.0;
  double mean_error_m = 0.0;
  double mean_error_outliers_removed_m = 0.0;
  double median_error_m = 0.0;
  double mean_los_fraction = 0.0;
  std::vector<double> error_cdf;  // sorted errors of valid epochs
  std::vector<double> bound_cdf;  // sorted finite CRLB bounds
};

/// Deterministic per-epoch seed derived from the scenario seed.
std::uint64_t epoch_seed(std::uint64_t seed, std::uint64_t epoch,
                         std::uint64_t trial);

/// Recomputes all aggregate fields from the epoch records.
void finalize(RunReport& report);

/// Table-II-style count string, e.g. "186 out of 255 (72.9%)".
std::string format_valid_counts(std::size_t valid, std::size_t total);

/// Replays the trajectory: per epoch and trial, classify LOS, synthesize
/// a measurement, estimate, and record the error against the LOS CRLB
/// bound at the truth point. Deterministic given the scenario seed.
RunReport run(const Scenario& scn);

/// Aligned comparison of aggregates plus a 10th..90th percentile table.
std::string compare(const std::vector<RunReport>& reports);

double percentile(const std::vector<double>& sorted, double p);

}  // namespace uavloc
