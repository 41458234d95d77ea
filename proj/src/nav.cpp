#include "rotornav/nav.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "rotornav/errors.hpp"

namespace rotornav {

namespace {

constexpr double kGroundEps = 0.02;  // m, landing considered complete below this

int hold_steps(double hold_duration, double dt) {
  return static_cast<int>(std::ceil(hold_duration / dt - 1e-9));
}

double axis_command(const ControllerSet& ctl, int axis, const AxisFeedback& fb,
                    const UavPlant& plant) {
  if (ctl.kind == ControllerSet::Kind::kSmc) {
    const SmcParams& p = axis == 2 ? ctl.smc_z : ctl.smc_xy;
    return smc_control(p, fb, plant.effective_model(axis));
  }
  const PdParams& p = axis == 2 ? ctl.pd_z : ctl.pd_xy;
  return pd_control(p, fb);
}

}  // namespace

void Mission::validate() const {
  if (!(band_half_width > 0.0)) {
    throw ConfigError("mission band half-width must be positive");
  }
  if (!(hold_duration > 0.0)) {
    throw ConfigError("mission hold duration must be positive");
  }
  if (!(timeout > hold_duration)) {
    throw ConfigError("mission timeout must exceed the hold duration");
  }
  if (!(min_op_height >= 0.0)) {
    throw ConfigError("minimum operational height must be non-negative");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("mission dt must be positive");
  }
  for (double t : target) {
    if (!std::isfinite(t)) {
      throw NumericError("mission target is not finite");
    }
  }
}

MissionResult run_mission(UavPlant plant, const ControllerSet& controllers,
                          const Mission& mission) {
  mission.validate();
  plant.validate();
  if (controllers.kind == ControllerSet::Kind::kSmc) {
    controllers.smc_xy.validate();
    controllers.smc_z.validate();
  } else {
    controllers.pd_xy.validate();
    controllers.pd_z.validate();
  }

  const double dt = mission.dt;
  const int n_hold = hold_steps(mission.hold_duration, dt);
  const int max_steps = static_cast<int>(std::floor(mission.timeout / dt + 1e-9));

  std::optional<WindSampler> sampler;
  if (plant.wind) {
    sampler.emplace(*plant.wind);
  }

  MissionResult result;
  result.dt = dt;
  for (auto& axis : result.axes) {
    axis.position.reserve(max_steps + 1);
    axis.velocity.reserve(max_steps + 1);
    axis.command.reserve(max_steps + 1);
    axis.wind.reserve(max_steps + 1);
  }
  result.phase.reserve(max_steps + 1);

  Phase phase = Phase::kTakeoff;
  int streak_entry = -1;
  int streak = 0;

  for (int k = 0; k <= max_steps; ++k) {
    const double t = k * dt;
    const Vec3 wind = sampler ? sampler->sample(dt) : Vec3{0.0, 0.0, 0.0};

    if (phase == Phase::kTakeoff &&
        plant.state_z.position >= mission.min_op_height - mission.band_half_width) {
      phase = Phase::kNavigate;
    }

    Vec3 u{0.0, 0.0, 0.0};
    for (int axis = 0; axis < 3; ++axis) {
      const AxisState& st = plant.state(axis);
      if (!std::isfinite(st.position) || !std::isfinite(st.velocity)) {
        throw NumericError("mission state became non-finite");
      }
      double target;
      switch (phase) {
        case Phase::kTakeoff:
          if (axis != 2) {
            u[axis] = 0.0;
            continue;
          }
          target = mission.min_op_height;
          break;
        case Phase::kNavigate:
          target = mission.target[axis];
          break;
        case Phase::kLand:
        default:
          target = axis == 2 ? 0.0 : mission.target[axis];
          break;
      }
      // Feedback velocity is the position derivative: command response plus
      // wind drift.
      const AxisFeedback fb{st.position, st.velocity + wind[axis], target};
      const double limit = axis == 2 ? plant.limits.max_z_cmd : plant.limits.max_xy_cmd;
      // Log the command actually sent to the stabilizer.
      u[axis] = apply_saturation(axis_command(controllers, axis, fb, plant), limit);
    }

    for (int axis = 0; axis < 3; ++axis) {
      const AxisState& st = plant.state(axis);
      result.axes[axis].position.push_back(st.position);
      result.axes[axis].velocity.push_back(st.velocity);
      result.axes[axis].command.push_back(u[axis]);
      result.axes[axis].wind.push_back(wind[axis]);
    }
    result.phase.push_back(static_cast<int>(phase));
    result.end_time = t;

    if (phase == Phase::kNavigate) {
      bool in_band = true;
      for (int axis = 0; axis < 3; ++axis) {
        if (std::abs(plant.state(axis).position - mission.target[axis]) >
            mission.band_half_width) {
          in_band = false;
          break;
        }
      }
      if (in_band) {
        if (streak == 0) {
          streak_entry = k;
        }
        ++streak;
        if (k - streak_entry >= n_hold) {
          result.success = true;
          result.settle_index = static_cast<std::size_t>(streak_entry);
          result.land_index = static_cast<std::size_t>(k);
          result.settle_time = streak_entry * dt;
          result.land_time = t;
          phase = Phase::kLand;
        }
      } else {
        streak = 0;
      }
    } else if (phase == Phase::kLand) {
      if (plant.state_z.position <= kGroundEps) {
        break;
      }
    }

    if (k == max_steps) {
      break;
    }
    plant.step(u, wind, dt);
  }

  if (result.success) {
    Vec3 dev{0.0, 0.0, 0.0};
    for (std::size_t k = *result.settle_index; k <= *result.land_index; ++k) {
      for (int axis = 0; axis < 3; ++axis) {
        dev[axis] = std::max(
            dev[axis], std::abs(result.axes[axis].position[k] - mission.target[axis]));
      }
    }
    result.max_dev_after_settle = dev;
  }
  return result;
}

std::optional<double> band_hold_monitor(std::array<std::span<const double>, 3> positions,
                                        const Vec3& target, double band_half_width,
                                        double hold_duration, double dt, double start_time) {
  if (!(band_half_width > 0.0) || !(hold_duration > 0.0) || !(dt > 0.0)) {
    throw ConfigError("band monitor needs positive band, hold duration and dt");
  }
  const std::size_t n = positions[0].size();
  if (positions[1].size() != n || positions[2].size() != n) {
    throw FormatError("axis trajectories must have equal length");
  }
  const int n_hold = hold_steps(hold_duration, dt);
  int streak = 0;
  int entry = -1;
  for (std::size_t k = 0; k < n; ++k) {
    bool in_band = true;
    for (int axis = 0; axis < 3; ++axis) {
      if (std::abs(positions[axis][k] - target[axis]) > band_half_width) {
        in_band = false;
        break;
      }
    }
    if (!in_band) {
      streak = 0;
      continue;
    }
    if (streak == 0) {
      entry = static_cast<int>(k);
    }
    ++streak;
    if (static_cast<int>(k) - entry >= n_hold) {
      return start_time + entry * dt;
    }
  }
  return std::nullopt;
}

ControllerMetrics mission_metrics(const MissionResult& result, const Mission& mission) {
  ControllerMetrics metrics;
  metrics.success = result.success;
  metrics.settle_time = result.settle_time;
  metrics.land_time = result.land_time;

  std::size_t window_last = 0, window_first = 0;
  bool have_window = false;
  if (result.success) {
    window_first = *result.settle_index;
    window_last = *result.land_index;
    have_window = true;
  } else {
    // Trailing hold-duration window of the navigate phase.
    std::size_t last = result.phase.size();
    while (last > 0 && result.phase[last - 1] != static_cast<int>(Phase::kNavigate)) {
      --last;
    }
    if (last > 0) {
      window_last = last - 1;
      std::size_t first_nav = 0;
      while (first_nav < window_last &&
             result.phase[first_nav] != static_cast<int>(Phase::kNavigate)) {
        ++first_nav;
      }
      const auto span = static_cast<std::size_t>(hold_steps(mission.hold_duration, result.dt));
      window_first = window_last > span ? window_last - span : 0;
      window_first = std::max(window_first, first_nav);
      have_window = true;
    }
  }
  for (int axis = 0; axis < 3; ++axis) {
    double dev = std::numeric_limits<double>::quiet_NaN();
    if (have_window) {
      dev = 0.0;
      for (std::size_t k = window_first; k <= window_last; ++k) {
        dev = std::max(dev,
                       std::abs(result.axes[axis].position[k] - mission.target[axis]));
      }
    }
    metrics.steady_max_dev[axis] = dev;
  }

  for (int axis = 0; axis < 3; ++axis) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < result.phase.size(); ++k) {
      if (result.phase[k] == static_cast<int>(Phase::kNavigate)) {
        sum += result.axes[axis].command[k] * result.axes[axis].command[k];
        ++n;
      }
    }
    metrics.effort_rms[axis] = n > 0 ? std::sqrt(sum / static_cast<double>(n)) : 0.0;
  }
  return metrics;
}

ComparisonReport compare_controllers(const UavPlant& plant_template, const ControllerSet& smc,
                                     const ControllerSet& pd, const Mission& mission,
                                     const std::optional<WindModel>& wind, int jobs) {
  ComparisonReport report;
  UavPlant plant_smc = plant_template;
  plant_smc.wind = wind;
  UavPlant plant_pd = plant_template;
  plant_pd.wind = wind;
  if (jobs > 1) {
    auto pd_future = std::async(std::launch::async,
                                [&] { return run_mission(plant_pd, pd, mission); });
    report.smc_result = run_mission(plant_smc, smc, mission);
    report.pd_result = pd_future.get();
  } else {
    report.smc_result = run_mission(plant_smc, smc, mission);
    report.pd_result = run_mission(plant_pd, pd, mission);
  }
  report.smc_metrics = mission_metrics(report.smc_result, mission);
  report.pd_metrics = mission_metrics(report.pd_result, mission);
  return report;
}

}  // namespace rotornav
