#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "uavloc/csv.hpp"
#include "uavloc/ingest.hpp"
#include "uavloc/report_io.hpp"
#include "uavloc/scenario_io.hpp"
#include "uavloc/sim.hpp"
#include "uavloc/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ScenarioArgs {
  std::string scenario_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("scenario", args.scenario_path, "Scenario JSON file")
      ->required();
  cmd->add_option("--override", args.overrides,
                  "key=value applied to the scenario before parsing "
                  "(e.g. bandwidth_hz=2.5e6, radio.tx_power_dbm=27)");
  cmd->add_option("--seed", args.seed, "Replace the scenario RNG seed");
}

uavloc::Scenario load(const ScenarioArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (args.seed) {
    overrides.push_back("seed=" + std::to_string(*args.seed));
  }
  return uavloc::load_scenario(args.scenario_path, overrides);
}

json position_json(const uavloc::Position& p) {
  return json{{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

int run_simulate(const ScenarioArgs& args, const std::string& out_dir) {
  const uavloc::Scenario scn = load(args);
  const uavloc::RunReport report = uavloc::run(scn);
  uavloc::write_run_report(report, out_dir, uavloc::scenario_hash(scn));
  std::cout << report.scenario_name << ": "
            << uavloc::format_valid_counts(report.valid_count, report.total_count)
            << " valid, mean error " << report.mean_error_m
            << " m, outlier-removed " << report.mean_error_outliers_removed_m
            << " m\n";
  return 0;
}

int run_crlb_map(const ScenarioArgs& args, const std::vector<double>& region,
                 double resolution, const std::string& out_csv) {
  const uavloc::Scenario scn = load(args);
  const uavloc::GridRegion box{{region[0], region[2], region[4]},
                               {region[1], region[3], region[5]}};
  const uavloc::CrlbGrid grid =
      uavloc::crlb_grid(scn.net, scn.cfg, box, resolution);
  uavloc::write_crlb_grid_csv(grid, out_csv, uavloc::scenario_hash(scn));
  std::cout << "wrote " << grid.nx * grid.ny * grid.nz << " grid points to "
            << out_csv << "\n";
  return 0;
}

int run_estimate(const ScenarioArgs& args, const std::vector<double>& at) {
  const uavloc::Scenario scn = load(args);
  const uavloc::Position truth{at[0], at[1], at[2]};
  const uavloc::LosVector los =
      uavloc::classify(scn.net, truth, scn.obstacles);
  const uavloc::TdoaMeasurement meas =
      uavloc::synthesize(scn.net, truth, scn.cfg, scn.bias, los,
                         uavloc::epoch_seed(scn.seed, 0, 0), scn.noise_scale);
  const uavloc::EstimateResult est =
      uavloc::estimate(scn.net, meas, scn.estimator);

  json j;
  j["truth"] = position_json(truth);
  j["estimate"] = position_json(est.position);
  j["error_m"] = est.converged ? uavloc::distance(est.position, truth)
                               : std::numeric_limits<double>::quiet_NaN();
  j["converged"] = est.converged;
  j["iterations"] = est.iterations;
  j["residual_norm_m"] = est.residual_norm_m;
  j["flagged_outlier"] =
      est.converged &&
      uavloc::flag_outlier(est.position, truth, scn.outlier_threshold_m);
  if (!est.failure_reason.empty()) j["failure_reason"] = est.failure_reason;
  std::string los_bits;
  for (bool v : los.s) los_bits += v ? '1' : '0';
  j["los"] = los_bits;
  std::cout << j.dump(2) << "\n";
  return est.converged ? 0 : kExitRuntime;
}

int run_los_classify(const ScenarioArgs& args, const std::string& out_csv) {
  const uavloc::Scenario scn = load(args);
  std::ofstream os(out_csv, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out_csv);
  os << uavloc::file_header(uavloc::scenario_hash(scn));
  std::vector<std::string> header{"time_s", "x", "y", "z"};
  for (std::size_t i = 1; i <= scn.net.size(); ++i) {
    header.push_back("s" + std::to_string(i));
  }
  uavloc::csv::write_row(os, header);
  for (const uavloc::TrajectorySample& s :
       uavloc::sample_trajectory(scn.trajectory)) {
    const uavloc::LosVector los =
        uavloc::classify(scn.net, s.position, scn.obstacles);
    std::vector<std::string> row{std::to_string(s.time_s),
                                 std::to_string(s.position.x),
                                 std::to_string(s.position.y),
                                 std::to_string(s.position.z)};
    for (bool v : los.s) row.push_back(v ? "1" : "0");
    uavloc::csv::write_row(os, row);
  }
  return 0;
}

uavloc::GeodeticOrigin origin_from_net_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open network config: " + path);
  json doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  if (doc.contains("origin")) {
    return {doc["origin"].at("lat_deg").get<double>(),
            doc["origin"].at("lon_deg").get<double>(),
            doc["origin"].value("alt_m", 0.0)};
  }
  if (doc.contains("sensors")) {
    double lat = 0.0, lon = 0.0;
    std::size_t n = 0;
    for (const json& s : doc["sensors"]) {
      if (!s.contains("lat_deg")) continue;
      lat += s.at("lat_deg").get<double>();
      lon += s.at("lon_deg").get<double>();
      ++n;
    }
    if (n > 0) {
      return {lat / static_cast<double>(n), lon / static_cast<double>(n), 0.0};
    }
  }
  throw std::invalid_argument(
      "network config needs an 'origin' block or geodetic 'sensors'");
}

int run_ingest(const std::string& dataset, const std::string& net_config,
               const std::vector<double>& origin_arg,
               const std::vector<std::string>& maps, double threshold,
               const std::string& out_dir) {
  uavloc::GeodeticOrigin origin;
  if (!origin_arg.empty()) {
    origin = {origin_arg[0], origin_arg[1],
              origin_arg.size() > 2 ? origin_arg[2] : 0.0};
  } else if (!net_config.empty()) {
    origin = origin_from_net_config(net_config);
  } else {
    throw std::invalid_argument("ingest needs --net or --origin");
  }

  uavloc::IngestOptions opts;
  opts.outlier_threshold_m = threshold;
  for (const std::string& m : maps) {
    const auto eq = m.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--map must have the form canonical=actual");
    }
    opts.column_map[m.substr(0, eq)] = m.substr(eq + 1);
  }

  std::ifstream in(dataset, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open dataset: " + dataset);
  const uavloc::IngestReport rep = uavloc::ingest_dataset(in, origin, opts);

  std::filesystem::create_directories(out_dir);
  const std::string tag = "ingest";
  json j;
  j["dataset"] = dataset;
  j["valid"] = uavloc::format_valid_counts(rep.valid_count, rep.total_count);
  j["valid_count"] = rep.valid_count;
  j["total_count"] = rep.total_count;
  j["valid_pct"] = rep.valid_pct;
  j["mean_error_m"] = rep.mean_error_m;
  j["mean_error_outliers_removed_m"] = rep.mean_error_outliers_removed_m;
  json buckets = json::object();
  for (const auto& [count, ns] : rep.los_buckets) {
    buckets[std::to_string(count)] =
        json{{"rows", ns.first}, {"mean_error_m", ns.second}};
  }
  j["los_buckets"] = buckets;
  {
    std::ofstream os(std::filesystem::path(out_dir) / "report.json",
                     std::ios::binary);
    os << uavloc::file_header(tag) << j.dump(2) << "\n";
  }
  {
    std::ofstream os(std::filesystem::path(out_dir) / "cdf.csv",
                     std::ios::binary);
    os << uavloc::file_header(tag);
    uavloc::csv::write_row(os, {"quantile", "error_m"});
    const std::size_t n = rep.error_cdf.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double q =
          n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
      uavloc::csv::write_row(
          os, {std::to_string(q), std::to_string(rep.error_cdf[i])});
    }
  }
  std::cout << j["valid"].get<std::string>() << " valid, mean error "
            << rep.mean_error_m << " m, outlier-removed "
            << rep.mean_error_outliers_removed_m << " m\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TDOA-based 3D airborne transmitter localization toolkit"};
  app.set_version_flag("--version", std::string("uavloc ") + uavloc::kVersion);
  app.require_subcommand(1);

  ScenarioArgs sim_args;
  std::string sim_out = "out";
  CLI::App* sim = app.add_subcommand(
      "simulate", "Run the Monte Carlo trajectory simulation");
  add_scenario_options(sim, sim_args);
  sim->add_option("--out", sim_out, "Output directory");

  ScenarioArgs map_args;
  std::vector<double> map_region;
  double map_resolution = 50.0;
  std::string map_out = "crlb_map.csv";
  CLI::App* cmap = app.add_subcommand(
      "crlb-map", "Evaluate the position-error bound over a grid");
  add_scenario_options(cmap, map_args);
  cmap->add_option("--region", map_region,
                   "xmin xmax ymin ymax zmin zmax (meters, ENU)")
      ->expected(6)
      ->required();
  cmap->add_option("--resolution", map_resolution, "Grid spacing, meters");
  cmap->add_option("--out", map_out, "Output CSV path");

  ScenarioArgs est_args;
  std::vector<double> est_at;
  CLI::App* est = app.add_subcommand(
      "estimate", "Synthesize one measurement at a point and estimate");
  add_scenario_options(est, est_args);
  est->add_option("--at", est_at, "Transmitter position x y z (meters, ENU)")
      ->expected(3)
      ->required();

  ScenarioArgs los_args;
  std::string los_out = "los.csv";
  CLI::App* los = app.add_subcommand(
      "los-classify", "Classify LOS/NLOS along the scenario trajectory");
  add_scenario_options(los, los_args);
  los->add_option("--out", los_out, "Output CSV path");

  std::string ing_dataset, ing_net, ing_out = "out";
  std::vector<double> ing_origin;
  std::vector<std::string> ing_maps;
  double ing_threshold = 200.0;
  CLI::App* ing = app.add_subcommand(
      "ingest", "Aggregate a recorded flight dataset CSV");
  ing->add_option("dataset", ing_dataset, "Dataset CSV")->required();
  ing->add_option("--net", ing_net, "Network config JSON (origin source)");
  ing->add_option("--origin", ing_origin, "lat_deg lon_deg [alt_m]")
      ->expected(2, 3);
  ing->add_option("--map", ing_maps, "canonical=actual column mapping");
  ing->add_option("--threshold", ing_threshold, "Outlier threshold, meters");
  ing->add_option("--out", ing_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_args, sim_out);
    if (cmap->parsed())
      return run_crlb_map(map_args, map_region, map_resolution, map_out);
    if (est->parsed()) return run_estimate(est_args, est_at);
    if (los->parsed()) return run_los_classify(los_args, los_out);
    if (ing->parsed())
      return run_ingest(ing_dataset, ing_net, ing_origin, ing_maps,
                        ing_threshold, ing_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
