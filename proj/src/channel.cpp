#include "uavloc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace uavloc {

void RadioConfig::validate() const {
  if (carrier_hz <= 0.0 || bandwidth_hz <= 0.0 || effective_bandwidth_hz <= 0.0) {
    throw std::invalid_argument("frequencies must be positive");
  }
  if (effective_bandwidth_hz > bandwidth_hz) {
    throw std::invalid_argument("effective bandwidth exceeds occupied bandwidth");
  }
  if (tx_gain_linear <= 0.0 || rx_gain_linear <= 0.0) {
    throw std::invalid_argument("gains must be positive");
  }
  if (temperature_k < 0.0) {
    throw std::invalid_argument("temperature must be nonnegative");
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

double received_power(const RadioConfig& cfg, double distance_m,
                      std::size_t sensor) {
  if (distance_m <= 0.0) {
    throw std::domain_error("received_power: distance must be positive");
  }
  const double lambda = kSpeedOfLight / cfg.carrier_hz;
  const double pt_w = dbm_to_watts(cfg.tx_power_dbm);
  const double denom = 4.0 * M_PI * distance_m;
  return pt_w * cfg.tx_gain_linear * cfg.rx_gain(sensor) * lambda * lambda /
         (denom * denom);
}

double noise_power(const RadioConfig& cfg) {
  return kBoltzmann * cfg.temperature_k * cfg.bandwidth_hz;
}

double snr_linear(const RadioConfig& cfg, double distance_m,
                  std::size_t sensor) {
  return received_power(cfg, distance_m, sensor) / noise_power(cfg);
}

double toa_sigma(const RadioConfig& cfg, double snr) {
  if (snr <= 0.0) {
    throw std::domain_error("toa_sigma: SNR must be positive");
  }
  if (cfg.effective_bandwidth_hz <= 0.0) {
    throw std::domain_error("toa_sigma: effective bandwidth must be positive");
  }
  return 1.0 / (2.0 * std::sqrt(2.0) * M_PI * std::sqrt(snr) *
                cfg.effective_bandwidth_hz);
}

double range_sigma(const RadioConfig& cfg, double distance_m,
                   std::size_t sensor) {
  return kSpeedOfLight * toa_sigma(cfg, snr_linear(cfg, distance_m, sensor));
}

}  // namespace uavloc
