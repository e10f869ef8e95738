#pragma once

#include <cstddef>
#include <vector>

namespace uavloc {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kBoltzmann = 1.38e-23;             // J/K

/// Transmitter and receiver chain parameters of the link budget.
/// Linear gains; tx power in dBm. Per-sensor receive gains are optional,
/// falling back to rx_gain_linear when absent.
struct RadioConfig {
  double carrier_hz = 3.32e9;
  double bandwidth_hz = 5e6;
  double effective_bandwidth_hz = 5e6;
  double tx_power_dbm = 30.67;
  double tx_gain_linear = 1.0;
  double rx_gain_linear = 1.0;
  std::vector<double> rx_gains_linear;  // optional, per sensor
  double temperature_k = 304.3;

  double rx_gain(std::size_t sensor) const {
    return rx_gains_linear.empty() ? rx_gain_linear
                                   : rx_gains_linear.at(sensor);
  }

  void validate() const;
};

struct LinkBudget {
  std::vector<double> received_power_w;
  double noise_power_w = 0.0;
  std::vector<double> snr_linear;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Free-space path loss received power, watts. Throws on d <= 0.
double received_power(const RadioConfig& cfg, double distance_m,
                      std::size_t sensor = 0);

/// Thermal noise floor kTB, watts.
double noise_power(const RadioConfig& cfg);

double snr_linear(const RadioConfig& cfg, double distance_m,
                  std::size_t sensor = 0);

/// TOA estimation standard deviation, seconds: 1 / (2*sqrt(2)*pi*sqrt(SNR)*beta).
double toa_sigma(const RadioConfig& cfg, double snr_linear);

/// Range-domain noise std, meters: c * toa_sigma at the SNR of distance d.
double range_sigma(const RadioConfig& cfg, double distance_m,
                   std::size_t sensor = 0);

}  // namespace uavloc
