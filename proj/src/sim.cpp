#include "uavloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace uavloc {

void Scenario::validate() const {
  net.validate();
  trajectory.validate();
  cfg.validate();
  bias.validate();
  for (const Obstacle& o : obstacles) uavloc::validate(o);
  if (trials_per_epoch < 1) {
    throw std::invalid_argument("trials_per_epoch must be >= 1");
  }
  if (noise_scale < 0.0) {
    throw std::invalid_argument("noise_scale must be nonnegative");
  }
  if (outlier_threshold_m <= 0.0) {
    throw std::invalid_argument("outlier_threshold_m must be positive");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t epoch_seed(std::uint64_t seed, std::uint64_t epoch,
                         std::uint64_t trial) {
  return splitmix64(splitmix64(seed ^ splitmix64(epoch)) ^ trial);
}

std::string format_valid_counts(std::size_t valid, std::size_t total) {
  const double pct =
      total == 0 ? 0.0
                 : 100.0 * static_cast<double>(valid) / static_cast<double>(total);
  std::ostringstream os;
  os << valid << " out of " << total << " (" << std::fixed
     << std::setprecision(1) << pct << "%)";
  return os.str();
}

void finalize(RunReport& report) {
  report.total_count = report.epochs.size();
  report.valid_count = 0;
  double sum = 0.0, sum_inliers = 0.0, los_frac = 0.0;
  std::size_t inliers = 0;
  report.error_cdf.clear();
  report.bound_cdf.clear();
  for (const EpochRecord& e : report.epochs) {
    if (!e.los.empty()) {
      std::size_t c = 0;
      for (bool v : e.los) c += v ? 1 : 0;
      los_frac += static_cast<double>(c) / static_cast<double>(e.los.size());
    }
    if (std::isfinite(e.rmse_bound_m)) {
      report.bound_cdf.push_back(e.rmse_bound_m);
    }
    if (!e.converged || !std::isfinite(e.error_m)) continue;
    ++report.valid_count;
    sum += e.error_m;
    report.error_cdf.push_back(e.error_m);
    if (!(e.error_m > report.outlier_threshold_m)) {
      sum_inliers += e.error_m;
      ++inliers;
    }
  }
  std::sort(report.error_cdf.begin(), report.error_cdf.end());
  std::sort(report.bound_cdf.begin(), report.bound_cdf.end());
  report.valid_pct =
      report.total_count == 0
          ? 0.0
          : 100.0 * static_cast<double>(report.valid_count) /
                static_cast<double>(report.total_count);
  report.mean_error_m = report.valid_count ? sum / static_cast<double>(report.valid_count) : 0.0;
  report.mean_error_outliers_removed_m =
      inliers ? sum_inliers / static_cast<double>(inliers) : 0.0;
  report.median_error_m = percentile(report.error_cdf, 50.0);
  report.mean_los_fraction =
      report.total_count ? los_frac / static_cast<double>(report.total_count) : 0.0;
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted.front();
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 *
                      static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

RunReport run(const Scenario& scn) {
  scn.validate();

  RunReport report;
  report.scenario_name = scn.name;
  report.outlier_threshold_m = scn.outlier_threshold_m;

  const std::vector<TrajectorySample> samples = sample_trajectory(scn.trajectory);
  report.epochs.reserve(samples.size() * static_cast<std::size_t>(scn.trials_per_epoch));

  for (std::size_t ep = 0; ep < samples.size(); ++ep) {
    const TrajectorySample& s = samples[ep];
    const LosVector los = classify(scn.net, s.position, scn.obstacles);

    double bound = std::numeric_limits<double>::infinity();
    try {
      bound = crlb(scn.net, s.position, scn.cfg).rmse_bound_m;
    } catch (const std::exception&) {
      // degenerate point; keep inf
    }

    for (int trial = 0; trial < scn.trials_per_epoch; ++trial) {
      EpochRecord rec;
      rec.time_s = s.time_s;
      rec.trial = trial;
      rec.truth = s.position;
      rec.los = los.s;
      rec.rmse_bound_m = bound;

      const TdoaMeasurement meas =
          synthesize(scn.net, s.position, scn.cfg, scn.bias, los,
                     epoch_seed(scn.seed, ep, static_cast<std::uint64_t>(trial)),
                     scn.noise_scale);
      const EstimateResult est = estimate(scn.net, meas, scn.estimator);
      rec.estimate = est.position;
      rec.converged = est.converged && std::isfinite(est.position.x) &&
                      std::isfinite(est.position.y) && std::isfinite(est.position.z);
      rec.error_m = rec.converged ? distance(est.position, s.position)
                                  : std::numeric_limits<double>::quiet_NaN();
      rec.outlier = rec.converged &&
                    flag_outlier(est.position, s.position, scn.outlier_threshold_m);
      report.epochs.push_back(std::move(rec));
    }
  }

  finalize(report);
  return report;
}

std::string compare(const std::vector<RunReport>& reports) {
  if (reports.size() < 2) {
    throw std::invalid_argument("compare needs at least two reports");
  }
  std::ostringstream os;
  os << std::left << std::setw(28) << "scenario" << std::right << std::setw(24)
     << "valid" << std::setw(16) << "mean_err_m" << std::setw(20)
     << "mean_no_outliers_m" << std::setw(14) << "los_frac" << "\n";
  for (const RunReport& r : reports) {
    os << std::left << std::setw(28) << r.scenario_name << std::right
       << std::setw(24) << format_valid_counts(r.valid_count, r.total_count)
       << std::setw(16) << std::fixed << std::setprecision(2) << r.mean_error_m
       << std::setw(20) << r.mean_error_outliers_removed_m << std::setw(14)
       << std::setprecision(3) << r.mean_los_fraction << "\n";
  }
  os << "\npercentiles of localization error (m):\n";
  os << std::left << std::setw(28) << "scenario";
  for (int p = 10; p <= 90; p += 10) {
    os << std::right << std::setw(10) << ("p" + std::to_string(p));
  }
  os << "\n";
  for (const RunReport& r : reports) {
    os << std::left << std::setw(28) << r.scenario_name;
    for (int p = 10; p <= 90; p += 10) {
      os << std::right << std::setw(10) << std::fixed << std::setprecision(2)
         << percentile(r.error_cdf, static_cast<double>(p));
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace uavloc
