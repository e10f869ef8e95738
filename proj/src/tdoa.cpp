#include "uavloc/tdoa.hpp"

#include <cmath>
#include <stdexcept>

namespace uavloc {

NlosBiasModel NlosBiasModel::make_gaussian(double mean_m, double std_m) {
  NlosBiasModel m;
  m.kind = Kind::gaussian;
  m.mean_m = mean_m;
  m.std_m = std_m;
  m.validate();
  return m;
}

NlosBiasModel NlosBiasModel::make_exponential(double mean_m) {
  NlosBiasModel m;
  m.kind = Kind::exponential;
  m.mean_m = mean_m;
  m.validate();
  return m;
}

NlosBiasModel NlosBiasModel::make_uniform(double low_m, double high_m) {
  NlosBiasModel m;
  m.kind = Kind::uniform;
  m.low_m = low_m;
  m.high_m = high_m;
  m.validate();
  return m;
}

void NlosBiasModel::validate() const {
  switch (kind) {
    case Kind::none:
      break;
    case Kind::gaussian:
      if (!std::isfinite(mean_m) || !std::isfinite(std_m) || std_m < 0.0) {
        throw std::invalid_argument("gaussian bias: bad parameters");
      }
      break;
    case Kind::exponential:
      if (!(mean_m > 0.0) || !std::isfinite(mean_m)) {
        throw std::invalid_argument("exponential bias: mean must be positive");
      }
      break;
    case Kind::uniform:
      if (!(0.0 <= low_m && low_m < high_m) || !std::isfinite(high_m)) {
        throw std::invalid_argument("uniform bias: need 0 <= low < high");
      }
      break;
  }
}

double NlosBiasModel::draw(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::none:
      return 0.0;
    case Kind::gaussian: {
      std::normal_distribution<double> d(mean_m, std_m);
      double b;
      do {
        b = d(rng);
      } while (b < 0.0);
      return b;
    }
    case Kind::exponential: {
      std::exponential_distribution<double> d(1.0 / mean_m);
      return d(rng);
    }
    case Kind::uniform: {
      std::uniform_real_distribution<double> d(low_m, high_m);
      return d(rng);
    }
  }
  return 0.0;
}

std::size_t LosVector::los_count() const {
  std::size_t n = 0;
  for (bool v : s) n += v ? 1 : 0;
  return n;
}

Eigen::VectorXd mean_vector(const SensorNetwork& net, const Position& x) {
  const std::size_t n = net.size();
  const double dr = distance(x, net.reference());
  if (dr <= 1e-9) {
    throw std::domain_error("query point coincides with reference sensor");
  }
  Eigen::VectorXd mu(static_cast<Eigen::Index>(n) - 1);
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == net.reference_index) continue;
    const double di = distance(x, net.sensors[i]);
    if (di <= 1e-9) {
      throw std::domain_error("query point coincides with a sensor");
    }
    mu(j++) = dr - di;
  }
  return mu;
}

Eigen::MatrixXd covariance_matrix(const std::vector<double>& sigmas_m,
                                  std::size_t reference_index) {
  const std::size_t n = sigmas_m.size();
  if (reference_index >= n) {
    throw std::invalid_argument("reference index out of range");
  }
  for (double s : sigmas_m) {
    if (!(s > 0.0)) {
      throw std::domain_error("range sigmas must be positive");
    }
  }
  const double var_r = sigmas_m[reference_index] * sigmas_m[reference_index];
  Eigen::MatrixXd q = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(n) - 1, static_cast<Eigen::Index>(n) - 1, var_r);
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == reference_index) continue;
    q(j, j) += sigmas_m[i] * sigmas_m[i];
    ++j;
  }
  return q;
}

std::vector<double> range_sigmas(const SensorNetwork& net, const Position& x,
                                 const RadioConfig& cfg) {
  std::vector<double> sigmas(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    sigmas[i] = range_sigma(cfg, distance(x, net.sensors[i]), i);
  }
  return sigmas;
}

TdoaMeasurement synthesize(const SensorNetwork& net, const Position& x,
                           const RadioConfig& cfg, const NlosBiasModel& bias,
                           const LosVector& los, std::uint64_t seed,
                           double noise_scale) {
  const std::size_t n = net.size();
  if (los.s.size() != n) {
    throw std::invalid_argument("LOS vector length mismatch");
  }
  const std::vector<double> sigmas = range_sigmas(net, x, cfg);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> pseudo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double noise = noise_scale * sigmas[i] * unit(rng);
    const double b = los.s[i] ? 0.0 : bias.draw(rng);
    pseudo[i] = distance(x, net.sensors[i]) + b + noise;
  }

  TdoaMeasurement m;
  m.reference_index = net.reference_index;
  m.los = los;
  m.rdiff_m.resize(static_cast<Eigen::Index>(n) - 1);
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == net.reference_index) continue;
    m.rdiff_m(j++) = pseudo[net.reference_index] - pseudo[i];
  }
  m.covariance = covariance_matrix(sigmas, net.reference_index);
  return m;
}

}  // namespace uavloc
