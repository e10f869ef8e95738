#include "uavloc/crlb.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "uavloc/tdoa.hpp"

namespace uavloc {

Eigen::MatrixXd jacobian(const SensorNetwork& net, const Position& x) {
  const std::size_t n = net.size();
  const Position& ref = net.reference();
  const double lr = distance(x, ref);
  if (lr <= 1e-9) {
    throw std::domain_error("jacobian: query point coincides with reference sensor");
  }
  const Eigen::RowVector3d ur((x.x - ref.x) / lr, (x.y - ref.y) / lr,
                              (x.z - ref.z) / lr);
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n) - 1, 3);
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == net.reference_index) continue;
    const Position& si = net.sensors[i];
    const double li = distance(x, si);
    if (li <= 1e-9) {
      throw std::domain_error("jacobian: query point coincides with a sensor");
    }
    jac.row(j++) = ur - Eigen::RowVector3d((x.x - si.x) / li, (x.y - si.y) / li,
                                           (x.z - si.z) / li);
  }
  return jac;
}

Eigen::Matrix3d fim(const SensorNetwork& net, const Position& x,
                    const RadioConfig& cfg) {
  const Eigen::MatrixXd jac = jacobian(net, x);
  const Eigen::MatrixXd q =
      covariance_matrix(range_sigmas(net, x, cfg), net.reference_index);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("fim: TDOA covariance is singular");
  }
  Eigen::Matrix3d f = jac.transpose() * ldlt.solve(jac);
  // enforce exact symmetry lost to roundoff
  return 0.5 * (f + f.transpose());
}

CrlbResult crlb(const SensorNetwork& net, const Position& x,
                const RadioConfig& cfg, double condition_cap) {
  CrlbResult res;
  res.fim = fim(net, x, cfg);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(res.fim);
  const Eigen::Vector3d evals = es.eigenvalues();
  const double lmax = evals(2);
  const double lmin = evals(0);
  res.condition_number =
      lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmin > 0.0) || res.condition_number > condition_cap) {
    const Eigen::Vector3d dir = es.eigenvectors().col(0);
    std::ostringstream msg;
    msg << "geometry-degenerate: no information along direction [" << dir(0)
        << ", " << dir(1) << ", " << dir(2) << "]";
    throw GeometryDegenerateError(msg.str(), dir);
  }

  Eigen::LDLT<Eigen::Matrix3d> ldlt(res.fim);
  Eigen::Matrix3d inv = ldlt.solve(Eigen::Matrix3d::Identity());
  res.fim_inverse = 0.5 * (inv + inv.transpose());
  res.crlb_trace_m2 = res.fim_inverse.trace();
  res.rmse_bound_m = std::sqrt(res.crlb_trace_m2);
  return res;
}

CrlbGrid crlb_grid(const SensorNetwork& net, const RadioConfig& cfg,
                   const GridRegion& region, double resolution_m,
                   double condition_cap) {
  if (resolution_m <= 0.0) {
    throw std::invalid_argument("crlb_grid: resolution must be positive");
  }
  if (region.max.x < region.min.x || region.max.y < region.min.y ||
      region.max.z < region.min.z) {
    throw std::invalid_argument("crlb_grid: empty region");
  }
  auto count = [resolution_m](double lo, double hi) {
    return static_cast<std::size_t>(std::floor((hi - lo) / resolution_m + 1e-9)) + 1;
  };
  CrlbGrid g;
  g.region = region;
  g.resolution_m = resolution_m;
  g.nx = count(region.min.x, region.max.x);
  g.ny = count(region.min.y, region.max.y);
  g.nz = count(region.min.z, region.max.z);
  g.rmse_bound_m.resize(g.nx * g.ny * g.nz);
  for (std::size_t iz = 0; iz < g.nz; ++iz) {
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        double v;
        try {
          v = crlb(net, g.point(ix, iy, iz), cfg, condition_cap).rmse_bound_m;
        } catch (const std::exception&) {
          v = std::numeric_limits<double>::infinity();
        }
        g.rmse_bound_m[g.index(ix, iy, iz)] = v;
      }
    }
  }
  return g;
}

}  // namespace uavloc
