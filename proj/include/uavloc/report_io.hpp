#pragma once

#include <filesystem>
#include <string>

#include "uavloc/crlb.hpp"
#include "uavloc/sim.hpp"

namespace uavloc {

/// "# uavloc <version> scenario=<hash>" — the first line of every output file.
std::string file_header(const std::string& scenario_hash);

/// Writes report.json, epochs.csv, and cdf.csv into out_dir.
void write_run_report(const RunReport& report,
                      const std::filesystem::path& out_dir,
                      const std::string& scenario_hash);

/// x,y,z,rmse_bound_m rows, x varying fastest; degenerate cells emit "inf".
/// Values carry 9 significant digits.
void write_crlb_grid_csv(const CrlbGrid& grid, const std::filesystem::path& path,
                         const std::string& scenario_hash);

}  // namespace uavloc
