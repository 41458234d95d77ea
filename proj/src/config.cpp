#include "rotornav/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rotornav/errors.hpp"

namespace rotornav {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(key, trim(item)));
  }
  if (out.empty()) {
    throw ConfigError("key '" + key + "': expected a comma-separated list");
  }
  return out;
}

// Registry of every accepted key; unknown keys are configuration errors so
// typos fail loudly.
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "seed",
      "jobs",
      "plant.preset",
      "model.x.gain", "model.x.tau",
      "model.y.gain", "model.y.tau",
      "model.z.gain", "model.z.tau",
      "limits.xy", "limits.z",
      "wind.enabled", "wind.mean", "wind.gust_std", "wind.bandwidth", "wind.seed",
      "mass.nominal", "mass.payload",
      "controller.preset",
      "smc.xy.lambda", "smc.xy.k_reach", "smc.xy.q", "smc.xy.boundary_layer",
      "smc.z.lambda", "smc.z.k_reach", "smc.z.q", "smc.z.boundary_layer",
      "pd.xy.k_p", "pd.xy.k_d",
      "pd.z.k_p", "pd.z.k_d",
      "mission.target", "mission.band_half_width", "mission.hold_duration",
      "mission.min_op_height", "mission.timeout", "mission.dt",
      "sweep.omega_min", "sweep.omega_max", "sweep.points", "sweep.amplitude",
      "sweep.cycles_per_point", "sweep.settle_cycles",
      "sysid.axis",
      "validate.axis", "validate.amplitudes", "validate.model",
      "navigate.controller",
  };
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_double(key, it->second);
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, static_cast<double>(fallback));
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9) {
    throw ConfigError("key '" + key + "': expected an integer");
  }
  return i;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    return fallback;
  }
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an unsigned integer");
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    return fallback;
  }
  if (it->second == "true" || it->second == "1" || it->second == "on") {
    return true;
  }
  if (it->second == "false" || it->second == "0" || it->second == "off") {
    return false;
  }
  throw ConfigError("key '" + key + "': expected true/false");
}

Vec3 KeyValueConfig::get_vec3(const std::string& key, const Vec3& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    return fallback;
  }
  const auto list = parse_list(key, it->second);
  if (list.size() != 3) {
    throw ConfigError("key '" + key + "': expected three comma-separated values");
  }
  return {list[0], list[1], list[2]};
}

std::vector<double> KeyValueConfig::get_list(const std::string& key,
                                             const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_list(key, it->second);
}

UavPlant plant_preset(const std::string& name) {
  if (name != kPaperNominalPreset) {
    throw ConfigError("unknown plant preset: " + name);
  }
  UavPlant plant;
  plant.model_x = {1.16, 0.75};
  plant.model_y = {1.16, 0.75};  // X and Y share one model
  plant.model_z = {0.98, 0.30};
  plant.limits = {5.0, 3.0};
  plant.mass_nominal = 8.0;
  plant.payload = 0.0;
  return plant;
}

ControllerSet controller_preset(const std::string& name) {
  ControllerSet set;
  set.smc_xy = {2.0, 1.25, 12.0, 0.05};
  set.smc_z = {2.5, 1.25, 12.0, 0.05};
  // PD gains are the tune_pd heuristic output on the paper-nominal models.
  set.pd_xy = {0.597, 0.18};
  set.pd_z = {1.783, 0.22};
  if (name == "smc-nominal") {
    return set;
  }
  if (name == "smc-laden") {
    set.smc_xy.q = 6.0;
    set.smc_z.q = 6.0;
    return set;
  }
  if (name == "smc-unladen") {
    set.smc_xy.q = 24.0;
    set.smc_z.q = 24.0;
    return set;
  }
  throw ConfigError("unknown controller preset: " + name);
}

ExperimentConfig resolve_config(const KeyValueConfig& cfg, const ResolveOverrides& overrides) {
  for (const auto& [key, value] : cfg.entries()) {
    if (known_keys().count(key) == 0) {
      throw ConfigError("unknown config key: " + key);
    }
  }

  ExperimentConfig exp;
  exp.seed = overrides.seed ? *overrides.seed : cfg.get_u64("seed", 0);
  exp.jobs = overrides.jobs ? *overrides.jobs : cfg.get_int("jobs", 1);
  if (exp.jobs < 1) {
    throw ConfigError("jobs must be >= 1");
  }

  exp.plant = plant_preset(cfg.get_string("plant.preset", kPaperNominalPreset));
  exp.plant.model_x.gain_k = cfg.get_double("model.x.gain", exp.plant.model_x.gain_k);
  exp.plant.model_x.tau = cfg.get_double("model.x.tau", exp.plant.model_x.tau);
  exp.plant.model_y.gain_k = cfg.get_double("model.y.gain", exp.plant.model_y.gain_k);
  exp.plant.model_y.tau = cfg.get_double("model.y.tau", exp.plant.model_y.tau);
  exp.plant.model_z.gain_k = cfg.get_double("model.z.gain", exp.plant.model_z.gain_k);
  exp.plant.model_z.tau = cfg.get_double("model.z.tau", exp.plant.model_z.tau);
  exp.plant.limits.max_xy_cmd = cfg.get_double("limits.xy", exp.plant.limits.max_xy_cmd);
  exp.plant.limits.max_z_cmd = cfg.get_double("limits.z", exp.plant.limits.max_z_cmd);
  exp.plant.mass_nominal = cfg.get_double("mass.nominal", exp.plant.mass_nominal);
  exp.plant.payload = cfg.get_double("mass.payload", exp.plant.payload);
  if (cfg.get_bool("wind.enabled", false)) {
    WindModel wind;
    wind.mean_velocity = cfg.get_vec3("wind.mean", {0.0, 0.0, 0.0});
    wind.gust_std = cfg.get_double("wind.gust_std", 0.3);
    wind.gust_bandwidth = cfg.get_double("wind.bandwidth", 1.0);
    wind.seed = cfg.get_u64("wind.seed", exp.seed);
    exp.plant.wind = wind;
  }
  exp.plant.validate();

  const std::string preset = cfg.get_string("controller.preset", "smc-nominal");
  exp.smc = controller_preset(preset);
  exp.smc.kind = ControllerSet::Kind::kSmc;
  auto load_smc = [&](SmcParams& p, const std::string& group) {
    p.lambda = cfg.get_double("smc." + group + ".lambda", p.lambda);
    p.k_reach = cfg.get_double("smc." + group + ".k_reach", p.k_reach);
    p.q = cfg.get_double("smc." + group + ".q", p.q);
    p.boundary_layer = cfg.get_double("smc." + group + ".boundary_layer", p.boundary_layer);
    p.validate();
  };
  load_smc(exp.smc.smc_xy, "xy");
  load_smc(exp.smc.smc_z, "z");
  exp.pd = exp.smc;
  exp.pd.kind = ControllerSet::Kind::kPd;
  auto load_pd = [&](PdParams& p, const std::string& group) {
    p.k_p = cfg.get_double("pd." + group + ".k_p", p.k_p);
    p.k_d = cfg.get_double("pd." + group + ".k_d", p.k_d);
    p.validate();
  };
  load_pd(exp.pd.pd_xy, "xy");
  load_pd(exp.pd.pd_z, "z");
  exp.smc.pd_xy = exp.pd.pd_xy;
  exp.smc.pd_z = exp.pd.pd_z;

  exp.mission.target = cfg.get_vec3("mission.target", {5.0, 5.0, 2.0});
  exp.mission.band_half_width =
      cfg.get_double("mission.band_half_width", exp.mission.band_half_width);
  exp.mission.hold_duration =
      cfg.get_double("mission.hold_duration", exp.mission.hold_duration);
  exp.mission.min_op_height =
      cfg.get_double("mission.min_op_height", exp.mission.min_op_height);
  exp.mission.timeout = cfg.get_double("mission.timeout", exp.mission.timeout);
  exp.mission.dt = cfg.get_double("mission.dt", exp.mission.dt);
  exp.mission.validate();

  exp.sweep = SweepSpec::log_grid(
      cfg.get_double("sweep.omega_min", 0.4), cfg.get_double("sweep.omega_max", 15.0),
      cfg.get_int("sweep.points", 25), cfg.get_double("sweep.amplitude", 1.0),
      cfg.get_int("sweep.cycles_per_point", 5), cfg.get_int("sweep.settle_cycles", 3));

  exp.sysid_axis = cfg.get_string("sysid.axis", "x");
  exp.validate_axis = cfg.get_string("validate.axis", "x");
  for (const std::string* axis : {&exp.sysid_axis, &exp.validate_axis}) {
    if (*axis != "x" && *axis != "y" && *axis != "z") {
      throw ConfigError("axis must be one of x, y, z");
    }
  }
  exp.validate_amplitudes = cfg.get_list("validate.amplitudes", exp.validate_amplitudes);
  if (cfg.has("validate.model")) {
    exp.validate_model_path = cfg.get_string("validate.model", "");
  }
  exp.navigate_controller = cfg.get_string("navigate.controller", "smc");
  if (exp.navigate_controller != "smc" && exp.navigate_controller != "pd") {
    throw ConfigError("navigate.controller must be 'smc' or 'pd'");
  }
  return exp;
}

}  // namespace rotornav
