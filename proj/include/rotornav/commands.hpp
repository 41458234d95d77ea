#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rotornav/config.hpp"

namespace rotornav {

// Exit-code contract shared by the CLI and the command functions:
// 0 ok, 2 configuration error, 3 identification failure, 4 undefined metric,
// 5 mission failure (timeout).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIdentification = 3;
inline constexpr int kExitUndefinedMetric = 4;
inline constexpr int kExitMissionFailed = 5;

struct CommandOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

// Sweep the configured axis, emit bode.csv, spectral.csv, sysid_report.txt
// and identified.cfg (reloadable model file).
int cmd_sysid(const KeyValueConfig& cfg, const CommandOptions& opt);

// Step-response validation at the configured amplitudes: mapd.csv plus
// validate_report.txt.
int cmd_validate(const KeyValueConfig& cfg, const CommandOptions& opt);

// One mission: trajectory.csv plus mission_report.txt.
int cmd_navigate(const KeyValueConfig& cfg, const CommandOptions& opt);

// Same mission under SMC and PD with a shared wind realization:
// trajectory_smc.csv, trajectory_pd.csv, comparison.csv, comparison_report.txt.
int cmd_compare(const KeyValueConfig& cfg, const CommandOptions& opt);

// Dispatch by name with the exit-code mapping applied to thrown errors.
int run_command(const std::string& name, const KeyValueConfig& cfg, const CommandOptions& opt);

}  // namespace rotornav
