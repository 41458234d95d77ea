#include "rotornav/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rotornav/errors.hpp"
#include "rotornav/nav.hpp"
#include "rotornav/sysid.hpp"

namespace rotornav {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : "nan";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot open for writing: " + path.string());
  }
  return out;
}

FirstOrderModel axis_model(const UavPlant& plant, const std::string& axis) {
  if (axis == "x") {
    return plant.model_x;
  }
  if (axis == "y") {
    return plant.model_y;
  }
  return plant.model_z;
}

void write_trajectory_csv(const MissionResult& result, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,x,y,z,vx,vy,vz,ux,uy,uz,wind_x,wind_y,wind_z,phase\n";
  for (std::size_t k = 0; k < result.phase.size(); ++k) {
    out << fmt(static_cast<double>(k) * result.dt);
    for (int axis = 0; axis < 3; ++axis) {
      out << ',' << fmt(result.axes[axis].position[k]);
    }
    for (int axis = 0; axis < 3; ++axis) {
      out << ',' << fmt(result.axes[axis].velocity[k]);
    }
    for (int axis = 0; axis < 3; ++axis) {
      out << ',' << fmt(result.axes[axis].command[k]);
    }
    for (int axis = 0; axis < 3; ++axis) {
      out << ',' << fmt(result.axes[axis].wind[k]);
    }
    out << ',' << result.phase[k] << '\n';
  }
}

void write_mission_report(const MissionResult& result, const Mission& mission,
                          const std::string& controller, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "controller: " << controller << '\n';
  out << "target: " << fmt(mission.target[0]) << ' ' << fmt(mission.target[1]) << ' '
      << fmt(mission.target[2]) << " m\n";
  out << "band_half_width: " << fmt(mission.band_half_width) << " m\n";
  out << "hold_duration: " << fmt(mission.hold_duration) << " s\n";
  out << "success: " << (result.success ? "true" : "false") << '\n';
  out << "settle_time: " << fmt_opt(result.settle_time) << " s\n";
  out << "land_time: " << fmt_opt(result.land_time) << " s\n";
  if (result.max_dev_after_settle) {
    const auto& dev = *result.max_dev_after_settle;
    out << "max_dev_after_settle: " << fmt(dev[0]) << ' ' << fmt(dev[1]) << ' ' << fmt(dev[2])
        << " m\n";
  } else {
    out << "max_dev_after_settle: nan nan nan m\n";
  }
  out << "end_time: " << fmt(result.end_time) << " s\n";
}

int sysid_impl(const ExperimentConfig& exp, const CommandOptions& opt) {
  const FirstOrderModel model = axis_model(exp.plant, exp.sysid_axis);
  const double dt = exp.mission.dt;
  const auto records = run_sweep(model, exp.sweep, dt, exp.jobs);
  const auto bode = build_bode(records, exp.sweep.settle_cycles);

  {
    auto out = open_out(opt.out_dir / "bode.csv");
    out << "omega,mag_db\n";
    for (const auto& p : bode) {
      out << fmt(p.omega) << ',' << fmt(p.mag_db) << '\n';
    }
  }
  {
    auto out = open_out(opt.out_dir / "spectral.csv");
    out << "omega_in,omega_out\n";
    for (const auto& rec : records) {
      out << fmt(rec.omega) << ',' << fmt(peak_frequency(rec.output)) << '\n';
    }
  }

  const IdentifiedModel identified = identify_model(records, exp.sweep.settle_cycles);
  {
    auto out = open_out(opt.out_dir / "sysid_report.txt");
    out << "axis: " << exp.sysid_axis << '\n';
    out << "gain_k: " << fmt(identified.model.gain_k) << '\n';
    out << "tau_refined: " << fmt(identified.model.tau) << " s\n";
    out << "tau_range: [" << fmt(identified.tau_range[0]) << ", "
        << fmt(identified.tau_range[1]) << "] s\n";
    out << "high_freq_slope: " << fmt(identified.slope_high_db_per_decade) << " dB/decade\n";
    out << "lti_mean_freq_deviation: " << fmt(identified.lti_freq_deviation) << " rad/s\n";
    out << "fit_sse: " << fmt(identified.fit_sse) << '\n';
  }
  {
    auto out = open_out(opt.out_dir / "identified.cfg");
    out << "# identified first-order velocity model\n";
    out << "model." << exp.sysid_axis << ".gain = " << fmt(identified.model.gain_k) << '\n';
    out << "model." << exp.sysid_axis << ".tau = " << fmt(identified.model.tau) << '\n';
  }
  return kExitOk;
}

int validate_impl(const ExperimentConfig& exp, const CommandOptions& opt) {
  const FirstOrderModel plant_model = axis_model(exp.plant, exp.validate_axis);
  FirstOrderModel model = plant_model;
  if (exp.validate_model_path) {
    const std::filesystem::path path = *exp.validate_model_path;
    if (!std::filesystem::exists(path)) {
      throw ConfigError("model file not found: " + path.string());
    }
    const auto model_cfg = KeyValueConfig::parse_file(path);
    const std::string prefix = "model." + exp.validate_axis + ".";
    if (!model_cfg.has(prefix + "gain") || !model_cfg.has(prefix + "tau")) {
      throw ConfigError("model file lacks " + prefix + "gain/tau: " + path.string());
    }
    model.gain_k = model_cfg.get_double(prefix + "gain", model.gain_k);
    model.tau = model_cfg.get_double(prefix + "tau", model.tau);
    model.validate();
  }

  const double dt = exp.mission.dt;
  const double duration = 7.0 * std::max(plant_model.tau, model.tau);
  std::vector<std::pair<double, TimeSeries>> records;
  records.reserve(exp.validate_amplitudes.size());
  for (double amplitude : exp.validate_amplitudes) {
    const TimeSeries input = constant_series(amplitude, duration, dt);
    records.emplace_back(amplitude, simulate_open_loop(plant_model, input, dt));
  }

  bool any_undefined = false;
  ValidationReport report;
  try {
    report = validate_step(model, records);
  } catch (const UndefinedResultError&) {
    // All records undefined; still emit the artifacts before failing.
    for (double amplitude : exp.validate_amplitudes) {
      report.entries.push_back({amplitude, 0.0, false});
    }
    report.mean_mapd = std::numeric_limits<double>::quiet_NaN();
    report.max_mapd = std::numeric_limits<double>::quiet_NaN();
    any_undefined = true;
  }
  for (const auto& entry : report.entries) {
    any_undefined = any_undefined || !entry.defined;
  }

  {
    auto out = open_out(opt.out_dir / "mapd.csv");
    out << "amplitude,mapd_percent\n";
    for (const auto& entry : report.entries) {
      out << fmt(entry.amplitude) << ','
          << (entry.defined ? fmt(entry.mapd_percent) : "nan") << '\n';
    }
  }
  {
    auto out = open_out(opt.out_dir / "validate_report.txt");
    out << "axis: " << exp.validate_axis << '\n';
    out << "model gain_k: " << fmt(model.gain_k) << '\n';
    out << "model tau: " << fmt(model.tau) << " s\n";
    for (const auto& entry : report.entries) {
      out << "amplitude " << fmt(entry.amplitude) << " m/s: mapd "
          << (entry.defined ? fmt(entry.mapd_percent) + " %" : "undefined") << '\n';
    }
    out << "mean_mapd: " << fmt(report.mean_mapd) << " %\n";
    out << "max_mapd: " << fmt(report.max_mapd) << " %\n";
  }
  return any_undefined ? kExitUndefinedMetric : kExitOk;
}

int navigate_impl(const ExperimentConfig& exp, const CommandOptions& opt) {
  const ControllerSet& controllers = exp.navigate_controller == "pd" ? exp.pd : exp.smc;
  const MissionResult result = run_mission(exp.plant, controllers, exp.mission);
  write_trajectory_csv(result, opt.out_dir / "trajectory.csv");
  write_mission_report(result, exp.mission, exp.navigate_controller,
                       opt.out_dir / "mission_report.txt");
  return result.success ? kExitOk : kExitMissionFailed;
}

int compare_impl(const ExperimentConfig& exp, const CommandOptions& opt) {
  UavPlant plant_template = exp.plant;
  const std::optional<WindModel> wind = exp.plant.wind;
  plant_template.wind.reset();
  const ComparisonReport report =
      compare_controllers(plant_template, exp.smc, exp.pd, exp.mission, wind, exp.jobs);

  write_trajectory_csv(report.smc_result, opt.out_dir / "trajectory_smc.csv");
  write_trajectory_csv(report.pd_result, opt.out_dir / "trajectory_pd.csv");
  {
    auto out = open_out(opt.out_dir / "comparison.csv");
    out << "controller,success,settle_time,land_time,steady_max_dev_x,steady_max_dev_y,"
           "steady_max_dev_z,effort_rms_x,effort_rms_y,effort_rms_z\n";
    const std::pair<const char*, const ControllerMetrics*> rows[] = {
        {"smc", &report.smc_metrics}, {"pd", &report.pd_metrics}};
    for (const auto& [name, metrics] : rows) {
      out << name << ',' << (metrics->success ? 1 : 0) << ','
          << fmt_opt(metrics->settle_time) << ',' << fmt_opt(metrics->land_time);
      for (int axis = 0; axis < 3; ++axis) {
        out << ',' << fmt(metrics->steady_max_dev[axis]);
      }
      for (int axis = 0; axis < 3; ++axis) {
        out << ',' << fmt(metrics->effort_rms[axis]);
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(opt.out_dir / "comparison_report.txt");
    auto describe = [&](const char* name, const ControllerMetrics& m) {
      out << name << ": " << (m.success ? "reached and held the band" : "failed to hold the band")
          << ", settle_time " << fmt_opt(m.settle_time) << " s, steady max deviation ("
          << fmt(m.steady_max_dev[0]) << ", " << fmt(m.steady_max_dev[1]) << ", "
          << fmt(m.steady_max_dev[2]) << ") m\n";
    };
    describe("smc", report.smc_metrics);
    describe("pd", report.pd_metrics);
    if (report.smc_metrics.success && !report.pd_metrics.success) {
      out << "verdict: smc held the accuracy band; pd did not\n";
    } else if (report.smc_metrics.success && report.pd_metrics.success) {
      out << "verdict: both controllers held the accuracy band\n";
    } else if (!report.smc_metrics.success && report.pd_metrics.success) {
      out << "verdict: pd held the accuracy band; smc did not\n";
    } else {
      out << "verdict: neither controller held the accuracy band\n";
    }
  }
  return kExitOk;
}

}  // namespace

int cmd_sysid(const KeyValueConfig& cfg, const CommandOptions& opt) {
  const auto exp = resolve_config(cfg, {opt.seed, opt.jobs});
  std::filesystem::create_directories(opt.out_dir);
  return sysid_impl(exp, opt);
}

int cmd_validate(const KeyValueConfig& cfg, const CommandOptions& opt) {
  const auto exp = resolve_config(cfg, {opt.seed, opt.jobs});
  std::filesystem::create_directories(opt.out_dir);
  return validate_impl(exp, opt);
}

int cmd_navigate(const KeyValueConfig& cfg, const CommandOptions& opt) {
  const auto exp = resolve_config(cfg, {opt.seed, opt.jobs});
  std::filesystem::create_directories(opt.out_dir);
  return navigate_impl(exp, opt);
}

int cmd_compare(const KeyValueConfig& cfg, const CommandOptions& opt) {
  const auto exp = resolve_config(cfg, {opt.seed, opt.jobs});
  std::filesystem::create_directories(opt.out_dir);
  return compare_impl(exp, opt);
}

int run_command(const std::string& name, const KeyValueConfig& cfg, const CommandOptions& opt) {
  try {
    if (name == "sysid") {
      return cmd_sysid(cfg, opt);
    }
    if (name == "validate") {
      return cmd_validate(cfg, opt);
    }
    if (name == "navigate") {
      return cmd_navigate(cfg, opt);
    }
    if (name == "compare") {
      return cmd_compare(cfg, opt);
    }
    std::cerr << "unknown command: " << name << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IdentificationError& e) {
    std::cerr << "identification failed: " << e.what() << '\n';
    return kExitIdentification;
  } catch (const UndefinedResultError& e) {
    std::cerr << "undefined metric: " << e.what() << '\n';
    return kExitUndefinedMetric;
  } catch (const NumericError& e) {
    std::cerr << "numeric fault: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rotornav
