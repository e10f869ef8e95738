#include "uavloc/report_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "uavloc/csv.hpp"
#include "uavloc/version.hpp"

namespace uavloc {

using nlohmann::json;

namespace {

std::string fmt(double v, int significant = 9) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(significant);
  os << v;
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
  return os;
}

}  // namespace

std::string file_header(const std::string& scenario_hash) {
  return "# uavloc " + std::string(kVersion) + " scenario=" + scenario_hash + "\n";
}

void write_run_report(const RunReport& report,
                      const std::filesystem::path& out_dir,
                      const std::string& scenario_hash) {
  std::filesystem::create_directories(out_dir);

  json j;
  j["scenario"] = report.scenario_name;
  j["outlier_threshold_m"] = report.outlier_threshold_m;
  j["valid_count"] = report.valid_count;
  j["total_count"] = report.total_count;
  j["valid_pct"] = report.valid_pct;
  j["valid"] = format_valid_counts(report.valid_count, report.total_count);
  j["mean_error_m"] = report.mean_error_m;
  j["mean_error_outliers_removed_m"] = report.mean_error_outliers_removed_m;
  j["median_error_m"] = report.median_error_m;
  j["mean_los_fraction"] = report.mean_los_fraction;
  json pct = json::object();
  for (int p = 10; p <= 90; p += 10) {
    pct["p" + std::to_string(p)] = percentile(report.error_cdf, p);
  }
  j["error_percentiles_m"] = pct;
  {
    auto os = open_out(out_dir / "report.json");
    os << file_header(scenario_hash) << j.dump(2) << "\n";
  }
  {
    auto os = open_out(out_dir / "epochs.csv");
    os << file_header(scenario_hash);
    csv::write_row(os, {"time_s", "trial", "truth_x", "truth_y", "truth_z",
                        "est_x", "est_y", "est_z", "error_m", "rmse_bound_m",
                        "converged", "outlier", "los"});
    for (const EpochRecord& e : report.epochs) {
      std::string los;
      for (bool v : e.los) los += v ? '1' : '0';
      csv::write_row(os, {fmt(e.time_s), std::to_string(e.trial), fmt(e.truth.x),
                          fmt(e.truth.y), fmt(e.truth.z), fmt(e.estimate.x),
                          fmt(e.estimate.y), fmt(e.estimate.z), fmt(e.error_m),
                          fmt(e.rmse_bound_m), e.converged ? "1" : "0",
                          e.outlier ? "1" : "0", los});
    }
  }
  {
    auto os = open_out(out_dir / "cdf.csv");
    os << file_header(scenario_hash);
    csv::write_row(os, {"quantile", "error_m", "rmse_bound_m"});
    const std::size_t n = std::max(report.error_cdf.size(), report.bound_cdf.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double q = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
      const std::string err =
          i < report.error_cdf.size() ? fmt(report.error_cdf[i]) : "";
      const std::string bound =
          i < report.bound_cdf.size() ? fmt(report.bound_cdf[i]) : "";
      csv::write_row(os, {fmt(q), err, bound});
    }
  }
}

void write_crlb_grid_csv(const CrlbGrid& grid, const std::filesystem::path& path,
                         const std::string& scenario_hash) {
  auto os = open_out(path);
  os << file_header(scenario_hash);
  csv::write_row(os, {"x", "y", "z", "rmse_bound_m"});
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const Position p = grid.point(ix, iy, iz);
        csv::write_row(os, {fmt(p.x), fmt(p.y), fmt(p.z),
                            fmt(grid.rmse_bound_m[grid.index(ix, iy, iz)])});
      }
    }
  }
}

}  // namespace uavloc
