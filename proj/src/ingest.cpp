#include "uavloc/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <stdexcept>

#include "uavloc/csv.hpp"

namespace uavloc {

namespace {

int find_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

IngestReport ingest_dataset(std::istream& csv_stream,
                            const GeodeticOrigin& origin,
                            const IngestOptions& opts) {
  std::vector<std::string> header;
  if (!csv::read_row(csv_stream, header)) {
    throw std::invalid_argument("dataset is empty (header row required)");
  }
  // skip a leading tool-comment line if present
  if (!header.empty() && !header[0].empty() && header[0][0] == '#') {
    if (!csv::read_row(csv_stream, header)) {
      throw std::invalid_argument("dataset is empty (header row required)");
    }
  }

  auto actual = [&opts](const std::string& canonical) {
    const auto it = opts.column_map.find(canonical);
    return it == opts.column_map.end() ? canonical : it->second;
  };
  auto require = [&](const std::string& canonical) {
    const int idx = find_column(header, actual(canonical));
    if (idx < 0) {
      throw std::invalid_argument("missing column: " + actual(canonical));
    }
    return idx;
  };

  const int c_ts = require("timestamp_s");
  const int c_tlat = require("truth_lat");
  const int c_tlon = require("truth_lon");
  const int c_talt = require("truth_alt_m");
  const int c_elat = require("est_lat");
  const int c_elon = require("est_lon");
  const int c_ealt = require("est_alt_m");

  std::vector<int> los_cols;
  for (int i = 1;; ++i) {
    const int idx = find_column(header, actual("s" + std::to_string(i)));
    if (idx < 0) break;
    los_cols.push_back(idx);
  }

  IngestReport report;
  std::vector<std::string> row;
  double sum = 0.0, sum_inliers = 0.0;
  std::size_t inliers = 0;
  std::map<int, std::pair<std::size_t, double>> bucket_sums;

  while (csv::read_row(csv_stream, row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (!row.empty() && !row[0].empty() && row[0][0] == '#') continue;
    auto get = [&row](int idx) -> std::string {
      return idx >= 0 && idx < static_cast<int>(row.size()) ? row[idx] : "";
    };

    IngestRow r;
    double ts, tlat, tlon, talt;
    if (!parse_double(get(c_ts), ts) || !parse_double(get(c_tlat), tlat) ||
        !parse_double(get(c_tlon), tlon) || !parse_double(get(c_talt), talt)) {
      throw std::invalid_argument("malformed ground-truth row in dataset");
    }
    r.timestamp_s = ts;
    r.truth = geodetic_to_enu(origin, tlat, tlon, talt);

    double elat, elon, ealt;
    if (parse_double(get(c_elat), elat) && parse_double(get(c_elon), elon) &&
        parse_double(get(c_ealt), ealt)) {
      r.estimate = geodetic_to_enu(origin, elat, elon, ealt);
      r.error_m = distance(*r.estimate, r.truth);
    } else {
      r.error_m = std::numeric_limits<double>::quiet_NaN();
    }

    for (int idx : los_cols) {
      double flag;
      r.los.push_back(parse_double(get(idx), flag) ? (flag != 0.0 ? 1 : 0) : -1);
    }

    ++report.total_count;
    if (r.estimate) {
      ++report.valid_count;
      sum += r.error_m;
      report.error_cdf.push_back(r.error_m);
      if (!(r.error_m > opts.outlier_threshold_m)) {
        sum_inliers += r.error_m;
        ++inliers;
      }
      if (!r.los.empty() &&
          std::none_of(r.los.begin(), r.los.end(), [](int v) { return v < 0; })) {
        const int count = static_cast<int>(
            std::count(r.los.begin(), r.los.end(), 1));
        auto& [n, s] = bucket_sums[count];
        ++n;
        s += r.error_m;
      }
    }
    report.rows.push_back(std::move(r));
  }

  std::sort(report.error_cdf.begin(), report.error_cdf.end());
  report.valid_pct = report.total_count == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(report.valid_count) /
                               static_cast<double>(report.total_count);
  report.mean_error_m =
      report.valid_count ? sum / static_cast<double>(report.valid_count) : 0.0;
  report.mean_error_outliers_removed_m =
      inliers ? sum_inliers / static_cast<double>(inliers) : 0.0;
  for (const auto& [count, ns] : bucket_sums) {
    report.los_buckets[count] = {ns.first, ns.second / static_cast<double>(ns.first)};
  }
  return report;
}

}  // namespace uavloc
