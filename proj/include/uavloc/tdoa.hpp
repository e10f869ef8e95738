#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "uavloc/channel.hpp"
#include "uavloc/geometry.hpp"

namespace uavloc {

/// Positive range bias applied to links without a direct path.
/// Gaussian draws are truncated at zero.
struct NlosBiasModel {
  enum class Kind { none, gaussian, exponential, uniform };

  Kind kind = Kind::none;
  double mean_m = 0.0;
  double std_m = 0.0;
  double low_m = 0.0;
  double high_m = 0.0;

  static NlosBiasModel make_none() { return {}; }
  static NlosBiasModel make_gaussian(double mean_m, double std_m);
  static NlosBiasModel make_exponential(double mean_m);
  static NlosBiasModel make_uniform(double low_m, double high_m);

  void validate() const;
  double draw(std::mt19937_64& rng) const;
};

/// Per-sensor direct-path indicator; true = LOS.
struct LosVector {
  std::vector<bool> s;

  static LosVector all_los(std::size_t n) { return {std::vector<bool>(n, true)}; }
  std::size_t los_count() const;
};

/// One epoch of range-difference measurements: rdiff[j] = c*dt between the
/// reference sensor and the j-th non-reference sensor, plus the shared-
/// reference covariance.
struct TdoaMeasurement {
  std::size_t reference_index = 0;
  Eigen::VectorXd rdiff_m;
  Eigen::MatrixXd covariance;
  LosVector los;
  double epoch_s = 0.0;
};

/// Range-difference mean: entry j = d_ref(x) - d_i(x) over non-reference
/// sensors in network order. Throws when x coincides with a sensor.
Eigen::VectorXd mean_vector(const SensorNetwork& net, const Position& x);

/// Shared-reference covariance: diagonal sigma_r^2 + sigma_i^2,
/// off-diagonal sigma_r^2.
Eigen::MatrixXd covariance_matrix(const std::vector<double>& sigmas_m,
                                  std::size_t reference_index);

/// Per-sensor range noise std at the query point.
std::vector<double> range_sigmas(const SensorNetwork& net, const Position& x,
                                 const RadioConfig& cfg);

/// Draws per-sensor range noise and NLOS bias and forms the range-difference
/// vector. The reported covariance is always the noise-only LOS matrix.
/// Deterministic given seed; noise_scale = 0 gives the noiseless limit.
TdoaMeasurement synthesize(const SensorNetwork& net, const Position& x,
                           const RadioConfig& cfg, const NlosBiasModel& bias,
                           const LosVector& los, std::uint64_t seed,
                           double noise_scale = 1.0);

}  // namespace uavloc
