#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavloc/channel.hpp"
#include "uavloc/geometry.hpp"

namespace uavloc {

struct CrlbResult {
  Eigen::Matrix3d fim = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d fim_inverse = Eigen::Matrix3d::Zero();
  double crlb_trace_m2 = 0.0;
  double rmse_bound_m = 0.0;
  double condition_number = 0.0;
};

/// Raised when the sensor geometry carries no information along some
/// direction at the query point; the deficient direction is the
/// eigenvector of the smallest FIM eigenvalue.
class GeometryDegenerateError : public std::runtime_error {
 public:
  GeometryDegenerateError(const std::string& what, Eigen::Vector3d direction)
      : std::runtime_error(what), deficient_direction(std::move(direction)) {}

  Eigen::Vector3d deficient_direction;
};

/// Range-difference Jacobian, rows over non-reference sensors:
/// row j = (x - x_r)/l_r - (x - x_i)/l_i.
Eigen::MatrixXd jacobian(const SensorNetwork& net, const Position& x);

/// Fisher information J^T Q^{-1} J with Q evaluated at the query point.
Eigen::Matrix3d fim(const SensorNetwork& net, const Position& x,
                    const RadioConfig& cfg);

/// Inverts the FIM via symmetric factorization; throws
/// GeometryDegenerateError when the condition number exceeds the cap.
CrlbResult crlb(const SensorNetwork& net, const Position& x,
                const RadioConfig& cfg, double condition_cap = 1e12);

struct GridRegion {
  Position min;
  Position max;
};

/// Row-major grid with x varying fastest, then y, then z. Degenerate
/// points hold +inf.
struct CrlbGrid {
  GridRegion region;
  double resolution_m = 0.0;
  std::size_t nx = 0, ny = 0, nz = 0;
  std::vector<double> rmse_bound_m;

  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (iz * ny + iy) * nx + ix;
  }
  Position point(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return {region.min.x + static_cast<double>(ix) * resolution_m,
            region.min.y + static_cast<double>(iy) * resolution_m,
            region.min.z + static_cast<double>(iz) * resolution_m};
  }
};

CrlbGrid crlb_grid(const SensorNetwork& net, const RadioConfig& cfg,
                   const GridRegion& region, double resolution_m,
                   double condition_cap = 1e12);

}  // namespace uavloc
