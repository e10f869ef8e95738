#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavloc/geometry.hpp"

namespace uavloc {

struct IngestOptions {
  /// canonical -> actual header name, for adapting foreign datasets
  std::map<std::string, std::string> column_map;
  double outlier_threshold_m = 200.0;
};

struct IngestRow {
  double timestamp_s = 0.0;
  Position truth;
  std::optional<Position> estimate;  // absent = missed estimate
  double error_m = 0.0;              // NaN when estimate absent
  std::vector<int> los;              // per-sensor 0/1; empty when not provided
};

struct IngestReport {
  std::vector<IngestRow> rows;
  std::size_t valid_count = 0;
  std::size_t total_count = 0;
  double valid_pct = 0.0;
  double mean_error_m = 0.0;
  double mean_error_outliers_removed_m = 0.0;
  std::vector<double> error_cdf;
  /// LOS-link count -> (row count, mean error) over valid rows with LOS data
  std::map<int, std::pair<std::size_t, double>> los_buckets;
};

/// Reads a dataset CSV (header row required; columns timestamp_s,
/// truth_lat, truth_lon, truth_alt_m, est_lat, est_lon, est_alt_m,
/// optional s1..sN), converts geodetic rows to ENU about the origin, and
/// aggregates errors. Throws std::invalid_argument naming any missing
/// required column.
IngestReport ingest_dataset(std::istream& csv_stream,
                            const GeodeticOrigin& origin,
                            const IngestOptions& opts = {});

}  // namespace uavloc
