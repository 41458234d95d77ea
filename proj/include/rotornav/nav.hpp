#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "rotornav/control.hpp"
#include "rotornav/plant.hpp"

namespace rotornav {

// Point-to-point task: reach the target, stay within the accuracy band on
// every axis for the hold duration, then land.
struct Mission {
  Vec3 target{0.0, 0.0, 1.0};     // m
  double band_half_width = 0.08;  // m
  double hold_duration = 5.0;     // s
  double min_op_height = 1.0;     // m
  double timeout = 60.0;          // s
  double dt = 0.02;               // s
  void validate() const;
};

enum class Phase : int { kTakeoff = 1, kNavigate = 2, kLand = 3 };

// Per-axis controller selection; xy axes share one parameter set, z has its
// own, mirroring the shared X/Y model.
struct ControllerSet {
  enum class Kind { kSmc, kPd };
  Kind kind = Kind::kSmc;
  SmcParams smc_xy, smc_z;
  PdParams pd_xy, pd_z;
};

struct AxisTrace {
  std::vector<double> position;  // m
  std::vector<double> velocity;  // m/s, command response (wind logged apart)
  std::vector<double> command;   // m/s, pre-saturation controller output
  std::vector<double> wind;      // m/s
};

struct MissionResult {
  bool success = false;
  std::optional<double> settle_time;  // band entry [s]
  std::optional<double> land_time;    // hold completion / landing trigger [s]
  std::optional<Vec3> max_dev_after_settle;  // per axis over the hold window [m]
  double dt = 0.0;
  double end_time = 0.0;
  std::array<AxisTrace, 3> axes;
  std::vector<int> phase;  // per sample
  // Sample indices of band entry / hold completion when settled.
  std::optional<std::size_t> settle_index, land_index;
};

// Fly the mission: take off to the minimum operational height on the Z
// controller alone, then navigate all three axes to the target, then land
// once the band has been held. Timeout yields success=false, not an error.
MissionResult run_mission(UavPlant plant, const ControllerSet& controllers,
                          const Mission& mission);

// Earliest time t0 such that every axis stays within band_half_width of its
// target over [t0, t0 + hold_duration] (closed band, consecutive samples).
std::optional<double> band_hold_monitor(std::array<std::span<const double>, 3> positions,
                                        const Vec3& target, double band_half_width,
                                        double hold_duration, double dt,
                                        double start_time = 0.0);

struct ControllerMetrics {
  bool success = false;
  std::optional<double> settle_time, land_time;
  // Max |position - target| per axis over the hold window when settled,
  // otherwise over the trailing hold-duration window of the navigate phase.
  Vec3 steady_max_dev{0.0, 0.0, 0.0};
  Vec3 effort_rms{0.0, 0.0, 0.0};  // RMS command over the navigate phase
};

struct ComparisonReport {
  MissionResult smc_result, pd_result;
  ControllerMetrics smc_metrics, pd_metrics;
};

ControllerMetrics mission_metrics(const MissionResult& result, const Mission& mission);

// Fly the same mission under both controllers with the identical wind
// realization (same seed, same sample sequence). jobs > 1 runs the two
// missions on separate threads, each with its own plant and sampler.
ComparisonReport compare_controllers(const UavPlant& plant_template, const ControllerSet& smc,
                                     const ControllerSet& pd, const Mission& mission,
                                     const std::optional<WindModel>& wind, int jobs = 1);

}  // namespace rotornav
