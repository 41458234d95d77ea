#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rotornav/nav.hpp"
#include "rotornav/plant.hpp"
#include "rotornav/sysid.hpp"

namespace rotornav {

// Flat dotted-key configuration: "section.key = value" lines, '#' comments.
// One file fully determines a run.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::filesystem::path& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// Everything a command needs, resolved from presets, file keys and CLI
// overrides (in that precedence order).
struct ExperimentConfig {
  UavPlant plant;                       // wind attached iff wind.enabled
  ControllerSet smc, pd;
  Mission mission;
  SweepSpec sweep;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string sysid_axis = "x";
  std::string validate_axis = "x";
  std::vector<double> validate_amplitudes{1.0, 2.0, 3.0, 4.0, 5.0};
  std::optional<std::string> validate_model_path;
  std::string navigate_controller = "smc";
};

// Named plant preset with the fitted X/Y and Z transfer-function values.
inline constexpr const char* kPaperNominalPreset = "paper-nominal";

UavPlant plant_preset(const std::string& name);

// SMC presets: nominal, plus laden (lower q, gentle with a brick attached)
// and unladen (higher q, aggressive).
ControllerSet controller_preset(const std::string& name);

struct ResolveOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

// Validate keys against the registry (unknown keys are configuration errors)
// and assemble the experiment.
ExperimentConfig resolve_config(const KeyValueConfig& cfg, const ResolveOverrides& overrides = {});

}  // namespace rotornav
