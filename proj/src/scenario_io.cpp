#include "uavloc/scenario_io.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <utility>

namespace uavloc {

using nlohmann::json;

namespace {

Position position_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(),
          j.at("z").get<double>()};
}

json position_to_json(const Position& p) {
  return json{{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

NlosBiasModel bias_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return NlosBiasModel::make_none();
  if (kind == "gaussian") {
    return NlosBiasModel::make_gaussian(j.at("mean_m").get<double>(),
                                        j.at("std_m").get<double>());
  }
  if (kind == "exponential") {
    return NlosBiasModel::make_exponential(j.at("mean_m").get<double>());
  }
  if (kind == "uniform") {
    return NlosBiasModel::make_uniform(j.at("low_m").get<double>(),
                                       j.at("high_m").get<double>());
  }
  throw std::invalid_argument("bias.kind must be one of none/gaussian/exponential/uniform");
}

json bias_to_json(const NlosBiasModel& b) {
  switch (b.kind) {
    case NlosBiasModel::Kind::none:
      return json{{"kind", "none"}};
    case NlosBiasModel::Kind::gaussian:
      return json{{"kind", "gaussian"}, {"mean_m", b.mean_m}, {"std_m", b.std_m}};
    case NlosBiasModel::Kind::exponential:
      return json{{"kind", "exponential"}, {"mean_m", b.mean_m}};
    case NlosBiasModel::Kind::uniform:
      return json{{"kind", "uniform"}, {"low_m", b.low_m}, {"high_m", b.high_m}};
  }
  return json{{"kind", "none"}};
}

Obstacle obstacle_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "box") {
    Box b{position_from_json(j.at("min")), position_from_json(j.at("max"))};
    Obstacle o = b;
    validate(o);
    return o;
  }
  if (type == "cylinder") {
    Cylinder c{j.at("center_x").get<double>(), j.at("center_y").get<double>(),
               j.at("radius").get<double>(), j.at("height").get<double>()};
    Obstacle o = c;
    validate(o);
    return o;
  }
  throw std::invalid_argument("obstacle.type must be box or cylinder");
}

json obstacle_to_json(const Obstacle& o) {
  if (const Box* b = std::get_if<Box>(&o)) {
    return json{{"type", "box"},
                {"min", position_to_json(b->min)},
                {"max", position_to_json(b->max)}};
  }
  const Cylinder& c = std::get<Cylinder>(o);
  return json{{"type", "cylinder"},
              {"center_x", c.center_x},
              {"center_y", c.center_y},
              {"radius", c.radius},
              {"height", c.height}};
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario scn;
  scn.name = j.value("name", std::string("unnamed"));

  std::optional<GeodeticOrigin> origin;
  if (j.contains("origin")) {
    origin = GeodeticOrigin{j.at("origin").at("lat_deg").get<double>(),
                            j.at("origin").at("lon_deg").get<double>(),
                            j.at("origin").value("alt_m", 0.0)};
  }
  auto parse_point = [&](const json& p) -> Position {
    if (p.contains("lat_deg")) {
      if (!origin) {
        throw std::invalid_argument("geodetic coordinates require an 'origin' block");
      }
      return geodetic_to_enu(*origin, p.at("lat_deg").get<double>(),
                             p.at("lon_deg").get<double>(),
                             p.value("alt_m", 0.0));
    }
    return position_from_json(p);
  };

  if (!j.contains("sensors")) {
    throw std::invalid_argument("scenario: missing 'sensors'");
  }
  for (const json& s : j.at("sensors")) {
    scn.net.sensors.push_back(parse_point(s));
  }
  scn.net.reference_index = j.value("reference_index", std::size_t{0});

  if (j.contains("radio")) {
    const json& r = j.at("radio");
    read_if(r, "carrier_hz", scn.cfg.carrier_hz);
    read_if(r, "bandwidth_hz", scn.cfg.bandwidth_hz);
    if (r.contains("effective_bandwidth_hz")) {
      scn.cfg.effective_bandwidth_hz = r.at("effective_bandwidth_hz").get<double>();
    } else {
      scn.cfg.effective_bandwidth_hz = scn.cfg.bandwidth_hz;
    }
    read_if(r, "tx_power_dbm", scn.cfg.tx_power_dbm);
    read_if(r, "tx_gain_linear", scn.cfg.tx_gain_linear);
    read_if(r, "rx_gain_linear", scn.cfg.rx_gain_linear);
    read_if(r, "rx_gains_linear", scn.cfg.rx_gains_linear);
    read_if(r, "temperature_k", scn.cfg.temperature_k);
  }

  if (j.contains("trajectory")) {
    const json& t = j.at("trajectory");
    scn.trajectory.sample_interval_s = t.value("sample_interval_s", 1.0);
    scn.trajectory.speed_mps = t.value("speed_mps", 5.0);
    for (const json& w : t.at("waypoints")) {
      Waypoint wp;
      wp.label = w.value("label", std::string());
      wp.position = parse_point(w);
      wp.hover_seconds = w.value("hover_seconds", 0.0);
      scn.trajectory.waypoints.push_back(std::move(wp));
    }
  }

  if (j.contains("obstacles")) {
    for (const json& o : j.at("obstacles")) {
      scn.obstacles.push_back(obstacle_from_json(o));
    }
  }
  if (j.contains("bias")) scn.bias = bias_from_json(j.at("bias"));
  scn.trials_per_epoch = j.value("trials_per_epoch", 1);
  scn.seed = j.value("seed", std::uint64_t{0});
  scn.noise_scale = j.value("noise_scale", 1.0);
  scn.outlier_threshold_m = j.value("outlier_threshold_m", 200.0);
  if (j.contains("estimator")) {
    const json& e = j.at("estimator");
    read_if(e, "default_altitude_m", scn.estimator.default_altitude_m);
    read_if(e, "restarts", scn.estimator.restarts);
    read_if(e, "max_iterations", scn.estimator.max_iterations);
  }

  scn.validate();
  return scn;
}

json scenario_to_json(const Scenario& scn) {
  json j;
  j["name"] = scn.name;
  j["sensors"] = json::array();
  for (const Position& s : scn.net.sensors) j["sensors"].push_back(position_to_json(s));
  j["reference_index"] = scn.net.reference_index;
  j["radio"] = json{{"carrier_hz", scn.cfg.carrier_hz},
                    {"bandwidth_hz", scn.cfg.bandwidth_hz},
                    {"effective_bandwidth_hz", scn.cfg.effective_bandwidth_hz},
                    {"tx_power_dbm", scn.cfg.tx_power_dbm},
                    {"tx_gain_linear", scn.cfg.tx_gain_linear},
                    {"rx_gain_linear", scn.cfg.rx_gain_linear},
                    {"temperature_k", scn.cfg.temperature_k}};
  if (!scn.cfg.rx_gains_linear.empty()) {
    j["radio"]["rx_gains_linear"] = scn.cfg.rx_gains_linear;
  }
  j["trajectory"] = json{{"sample_interval_s", scn.trajectory.sample_interval_s},
                         {"speed_mps", scn.trajectory.speed_mps},
                         {"waypoints", json::array()}};
  for (const Waypoint& w : scn.trajectory.waypoints) {
    json wj = position_to_json(w.position);
    wj["label"] = w.label;
    wj["hover_seconds"] = w.hover_seconds;
    j["trajectory"]["waypoints"].push_back(std::move(wj));
  }
  j["obstacles"] = json::array();
  for (const Obstacle& o : scn.obstacles) j["obstacles"].push_back(obstacle_to_json(o));
  j["bias"] = bias_to_json(scn.bias);
  j["trials_per_epoch"] = scn.trials_per_epoch;
  j["seed"] = scn.seed;
  j["noise_scale"] = scn.noise_scale;
  j["outlier_threshold_m"] = scn.outlier_threshold_m;
  return j;
}

namespace {

// bare-key shorthands mapped to JSON pointer paths; bandwidth_hz fans out
// to the effective bandwidth as well since beta defaults to B
const std::vector<std::pair<std::string, std::vector<std::string>>> kShorthands = {
    {"bandwidth_hz", {"/radio/bandwidth_hz", "/radio/effective_bandwidth_hz"}},
    {"effective_bandwidth_hz", {"/radio/effective_bandwidth_hz"}},
    {"carrier_hz", {"/radio/carrier_hz"}},
    {"tx_power_dbm", {"/radio/tx_power_dbm"}},
    {"temperature_k", {"/radio/temperature_k"}},
    {"seed", {"/seed"}},
    {"noise_scale", {"/noise_scale"}},
    {"trials_per_epoch", {"/trials_per_epoch"}},
    {"outlier_threshold_m", {"/outlier_threshold_m"}},
};

void apply_override(json& doc, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must have the form key=value: " + expr);
  }
  const std::string key = expr.substr(0, eq);
  const std::string raw = expr.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // not valid JSON: keep as string
  }

  std::vector<std::string> pointers;
  for (const auto& [name, paths] : kShorthands) {
    if (key == name) {
      pointers = paths;
      break;
    }
  }
  if (pointers.empty()) {
    std::string p = "/" + key;
    for (char& c : p) {
      if (c == '.') c = '/';
    }
    pointers.push_back(p);
  }
  for (const std::string& p : pointers) {
    doc[json::json_pointer(p)] = value;
  }
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open scenario file: " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scenario parse error in " + path.string() +
                                ": " + e.what());
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return scenario_from_json(doc);
}

std::string scenario_hash(const Scenario& scn) {
  const std::string dump = scenario_to_json(scn).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace uavloc
