#include "uavloc/estimator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "uavloc/crlb.hpp"

namespace uavloc {

namespace {

struct LmOutcome {
  Position position;
  int iterations = 0;
  bool converged = false;
  double cost = std::numeric_limits<double>::infinity();
  std::string failure_reason;
};

// Whitened residual r = L^{-1}(m - mu(x)); cost = r^T r.
bool whitened_residual(const SensorNetwork& net, const TdoaMeasurement& meas,
                       const Eigen::LLT<Eigen::MatrixXd>& llt,
                       const Position& x, Eigen::VectorXd& r) {
  try {
    Eigen::VectorXd e = meas.rdiff_m - mean_vector(net, x);
    r = llt.matrixL().solve(e);
  } catch (const std::domain_error&) {
    return false;
  }
  return r.allFinite();
}

LmOutcome lm_solve(const SensorNetwork& net, const TdoaMeasurement& meas,
                   const Eigen::LLT<Eigen::MatrixXd>& llt, Position x,
                   const EstimatorOptions& opts) {
  LmOutcome out;
  out.position = x;

  Eigen::VectorXd r;
  if (!whitened_residual(net, meas, llt, x, r)) {
    out.failure_reason = "residual not finite at initial point";
    return out;
  }
  double cost = r.squaredNorm();
  double lambda = opts.lambda_init;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    out.iterations = iter;
    Eigen::MatrixXd jac;
    try {
      jac = -llt.matrixL().solve(jacobian(net, x));
    } catch (const std::domain_error&) {
      out.failure_reason = "iterate coincides with a sensor";
      out.position = x;
      out.cost = cost;
      return out;
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += lambda * jtj.diagonal();
      Eigen::LDLT<Eigen::Matrix3d> ldlt(a);
      const Eigen::Vector3d step = ldlt.solve(-jtr);
      if (!step.allFinite()) {
        out.failure_reason = "rank-deficient normal equations";
        out.position = x;
        out.cost = cost;
        return out;
      }
      const Position cand{x.x + step(0), x.y + step(1), x.z + step(2)};
      Eigen::VectorXd rc;
      double cand_cost = std::numeric_limits<double>::infinity();
      if (whitened_residual(net, meas, llt, cand, rc)) {
        cand_cost = rc.squaredNorm();
      }
      if (cand_cost < cost) {
        x = cand;
        r = rc;
        cost = cand_cost;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (step.norm() < opts.step_tolerance_m) {
          out.position = x;
          out.cost = cost;
          out.converged = true;
          return out;
        }
      } else {
        lambda *= 10.0;
        if (lambda > 1e15) break;
      }
    }
    if (!accepted) {
      // stalled: no descent direction improves; treat as converged at x
      out.position = x;
      out.cost = cost;
      out.converged = true;
      return out;
    }
  }
  out.position = x;
  out.cost = cost;
  out.failure_reason = "iteration limit reached";
  return out;
}

}  // namespace

EstimateResult estimate(const SensorNetwork& net, const TdoaMeasurement& meas,
                        const EstimatorOptions& opts) {
  net.validate();
  if (meas.rdiff_m.size() != static_cast<Eigen::Index>(net.size()) - 1) {
    throw std::invalid_argument("measurement size does not match network");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(meas.covariance);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("measurement covariance is not positive definite");
  }

  Position centroid{0.0, 0.0, 0.0};
  for (const Position& s : net.sensors) {
    centroid.x += s.x;
    centroid.y += s.y;
    centroid.z += s.z;
  }
  const double inv_n = 1.0 / static_cast<double>(net.size());
  centroid.x *= inv_n;
  centroid.y *= inv_n;
  centroid.z *= inv_n;

  std::vector<Position> starts;
  if (opts.init) {
    starts.push_back(*opts.init);
  } else {
    starts.push_back({centroid.x, centroid.y, opts.default_altitude_m});
  }
  std::mt19937_64 rng(opts.multistart_seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < opts.restarts; ++k) {
    const Position& base = starts.front();
    starts.push_back({base.x + opts.perturb_horizontal_m * unit(rng),
                      base.y + opts.perturb_horizontal_m * unit(rng),
                      base.z + opts.perturb_vertical_m * unit(rng)});
  }

  // With four sensors the hyperboloid intersection generically has two exact
  // roots, both with near-zero residual, so cost alone cannot disambiguate.
  // Prefer solutions at or above the ground plane (z >= 0): the transmitter
  // is airborne and the phantom root sits far below the sensors.
  LmOutcome best;          // best converged candidate with z >= 0
  LmOutcome best_any;      // fallback across all candidates
  int total_iterations = 0;
  auto rank = [](const LmOutcome& o, const LmOutcome& cur) {
    return (o.converged && !cur.converged) ||
           (o.converged == cur.converged && o.cost < cur.cost);
  };
  auto consider = [&](const LmOutcome& o) {
    total_iterations += o.iterations;
    if (o.converged && o.position.z >= 0.0 && rank(o, best)) best = o;
    if (rank(o, best_any)) best_any = o;
  };
  for (const Position& start : starts) {
    consider(lm_solve(net, meas, llt, start, opts));
  }

  // The TDOA cost surface is bimodal across the sensors' best-fit plane when
  // the array is close to planar: polish from the mirror image of the current
  // best and keep whichever basin has the lower cost.
  if (std::isfinite(best_any.cost)) {
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const Position& s : net.sensors) {
      const Eigen::Vector3d d(s.x - centroid.x, s.y - centroid.y,
                              s.z - centroid.z);
      scatter += d * d.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(scatter);
    const Eigen::Vector3d n = es.eigenvectors().col(0);
    const Eigen::Vector3d p(best_any.position.x - centroid.x,
                            best_any.position.y - centroid.y,
                            best_any.position.z - centroid.z);
    const Eigen::Vector3d m = p - 2.0 * p.dot(n) * n;
    consider(lm_solve(net, meas, llt,
                      {centroid.x + m(0), centroid.y + m(1), centroid.z + m(2)},
                      opts));
  }
  if (!best.converged) best = best_any;

  // a fix many array radii away is a runaway along a hyperbola branch whose
  // minimum lies at (or near) infinity, not a usable solution
  if (best.converged && opts.max_range_factor > 0.0) {
    double radius = 0.0;
    for (const Position& s : net.sensors) {
      radius = std::max(radius, distance(s, centroid));
    }
    if (distance(best.position, centroid) > opts.max_range_factor * radius) {
      best.converged = false;
      best.failure_reason = "diverged";
    }
  }

  EstimateResult res;
  res.position = best.position;
  res.iterations = total_iterations;
  res.converged = best.converged;
  res.failure_reason = best.converged ? "" : best.failure_reason;
  if (std::isfinite(best.cost)) {
    try {
      res.residual_norm_m = (meas.rdiff_m - mean_vector(net, best.position)).norm();
    } catch (const std::domain_error&) {
      res.residual_norm_m = std::numeric_limits<double>::quiet_NaN();
      res.converged = false;
      res.failure_reason = "estimate coincides with a sensor";
    }
  } else {
    res.residual_norm_m = std::numeric_limits<double>::quiet_NaN();
    res.converged = false;
    if (res.failure_reason.empty()) res.failure_reason = "divergence";
  }
  return res;
}

bool flag_outlier(const Position& est, const Position& truth,
                  double threshold_m) {
  return distance(est, truth) > threshold_m;
}

}  // namespace uavloc
