#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rotornav/commands.hpp"
#include "rotornav/config.hpp"
#include "rotornav/control.hpp"
#include "rotornav/errors.hpp"
#include "rotornav/nav.hpp"
#include "rotornav/plant.hpp"
#include "rotornav/sysid.hpp"
#include "rotornav/timeseries.hpp"

namespace py = pybind11;
using namespace rotornav;

namespace {

std::optional<double> monitor_wrapper(const std::array<std::vector<double>, 3>& positions,
                                      const Vec3& target, double band, double hold, double dt,
                                      double start_time) {
  return band_hold_monitor(
      {std::span<const double>(positions[0]), std::span<const double>(positions[1]),
       std::span<const double>(positions[2])},
      target, band, hold, dt, start_time);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Velocity-model identification and sliding-mode navigation toolkit";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<FormatError>(m, "FormatError");
  py::register_exception<NumericError>(m, "NumericError");
  py::register_exception<IdentificationError>(m, "IdentificationError");
  py::register_exception<UndefinedResultError>(m, "UndefinedResultError");

  py::class_<TimeSeries>(m, "TimeSeries")
      .def(py::init<>())
      .def(py::init([](double dt, std::vector<double> values, double start_time) {
             return TimeSeries{dt, start_time, std::move(values)};
           }),
           py::arg("dt"), py::arg("values"), py::arg("start_time") = 0.0)
      .def_readwrite("dt", &TimeSeries::dt)
      .def_readwrite("start_time", &TimeSeries::start_time)
      .def_readwrite("values", &TimeSeries::values)
      .def("time_at", &TimeSeries::time_at)
      .def("duration", &TimeSeries::duration)
      .def("__len__", [](const TimeSeries& ts) { return ts.size(); });

  py::class_<FirstOrderModel>(m, "FirstOrderModel")
      .def(py::init<double, double>(), py::arg("gain_k") = 1.0, py::arg("tau") = 1.0)
      .def_readwrite("gain_k", &FirstOrderModel::gain_k)
      .def_readwrite("tau", &FirstOrderModel::tau)
      .def("state_a", &FirstOrderModel::state_a)
      .def("state_b", &FirstOrderModel::state_b);

  py::class_<AxisState>(m, "AxisState")
      .def(py::init<double, double>(), py::arg("velocity") = 0.0, py::arg("position") = 0.0)
      .def_readwrite("velocity", &AxisState::velocity)
      .def_readwrite("position", &AxisState::position);

  py::class_<SaturationLimits>(m, "SaturationLimits")
      .def(py::init<double, double>(), py::arg("max_xy_cmd") = 5.0, py::arg("max_z_cmd") = 3.0)
      .def_readwrite("max_xy_cmd", &SaturationLimits::max_xy_cmd)
      .def_readwrite("max_z_cmd", &SaturationLimits::max_z_cmd);

  py::class_<WindModel>(m, "WindModel")
      .def(py::init<>())
      .def_readwrite("mean_velocity", &WindModel::mean_velocity)
      .def_readwrite("gust_std", &WindModel::gust_std)
      .def_readwrite("gust_bandwidth", &WindModel::gust_bandwidth)
      .def_readwrite("seed", &WindModel::seed);

  py::class_<WindSampler>(m, "WindSampler")
      .def(py::init<const WindModel&>())
      .def("sample", &WindSampler::sample, py::arg("dt"));

  py::class_<UavPlant>(m, "UavPlant")
      .def(py::init<>())
      .def_readwrite("model_x", &UavPlant::model_x)
      .def_readwrite("model_y", &UavPlant::model_y)
      .def_readwrite("model_z", &UavPlant::model_z)
      .def_readwrite("state_x", &UavPlant::state_x)
      .def_readwrite("state_y", &UavPlant::state_y)
      .def_readwrite("state_z", &UavPlant::state_z)
      .def_readwrite("limits", &UavPlant::limits)
      .def_readwrite("wind", &UavPlant::wind)
      .def_readwrite("mass_nominal", &UavPlant::mass_nominal)
      .def_readwrite("payload", &UavPlant::payload)
      .def("effective_model", &UavPlant::effective_model)
      .def("step", &UavPlant::step, py::arg("u_cmd"), py::arg("wind_vel"), py::arg("dt"));

  m.def("apply_saturation", &apply_saturation, py::arg("u_cmd"), py::arg("limit"));
  m.def("step_axis", &step_axis, py::arg("model"), py::arg("state"), py::arg("u_cmd"),
        py::arg("wind_vel"), py::arg("dt"),
        py::arg("sat_limit") = std::numeric_limits<double>::infinity());
  m.def("simulate_open_loop", &simulate_open_loop, py::arg("model"), py::arg("input"),
        py::arg("dt"));
  m.def("perturb_for_mass", &perturb_for_mass, py::arg("model"), py::arg("mass_nominal"),
        py::arg("payload"));

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("omegas", &SweepSpec::omegas)
      .def_readwrite("amplitude", &SweepSpec::amplitude)
      .def_readwrite("cycles_per_point", &SweepSpec::cycles_per_point)
      .def_readwrite("settle_cycles", &SweepSpec::settle_cycles)
      .def_static("log_grid", &SweepSpec::log_grid, py::arg("omega_min"), py::arg("omega_max"),
                  py::arg("points"), py::arg("amplitude") = 1.0,
                  py::arg("cycles_per_point") = 5, py::arg("settle_cycles") = 3);

  py::class_<MagnitudePoint>(m, "MagnitudePoint")
      .def(py::init<double, double>(), py::arg("omega") = 0.0, py::arg("mag_db") = 0.0)
      .def_readwrite("omega", &MagnitudePoint::omega)
      .def_readwrite("mag_db", &MagnitudePoint::mag_db);

  py::class_<CutoffEstimate>(m, "CutoffEstimate")
      .def_readonly("tau", &CutoffEstimate::tau)
      .def_readonly("tau_range", &CutoffEstimate::tau_range);

  py::class_<IdentifiedModel>(m, "IdentifiedModel")
      .def_readonly("model", &IdentifiedModel::model)
      .def_readonly("tau_range", &IdentifiedModel::tau_range)
      .def_readonly("slope_high_db_per_decade", &IdentifiedModel::slope_high_db_per_decade)
      .def_readonly("fit_sse", &IdentifiedModel::fit_sse)
      .def_readonly("lti_freq_deviation", &IdentifiedModel::lti_freq_deviation);

  py::class_<SweepRecord>(m, "SweepRecord")
      .def(py::init<>())
      .def_readwrite("omega", &SweepRecord::omega)
      .def_readwrite("input", &SweepRecord::input)
      .def_readwrite("output", &SweepRecord::output);

  m.def("generate_sine", &generate_sine, py::arg("amplitude"), py::arg("omega"),
        py::arg("duration"), py::arg("dt"));
  m.def("run_sweep", &run_sweep, py::arg("model"), py::arg("spec"), py::arg("dt"),
        py::arg("jobs") = 1);
  m.def("peak_frequency", &peak_frequency, py::arg("series"));
  m.def("magnitude_at", &magnitude_at, py::arg("input"), py::arg("output"), py::arg("omega"),
        py::arg("settle_cycles") = 3);
  m.def("build_bode",
        py::overload_cast<const std::vector<SweepRecord>&, int>(&build_bode),
        py::arg("records"), py::arg("settle_cycles") = 3);
  m.def("build_bode",
        py::overload_cast<const FirstOrderModel&, const SweepSpec&, double>(&build_bode),
        py::arg("model"), py::arg("spec"), py::arg("dt"));
  m.def("estimate_gain", &estimate_gain, py::arg("bode"));
  m.def("estimate_tau_cutoff", &estimate_tau_cutoff, py::arg("bode"), py::arg("gain_k"));
  m.def("refine_tau_ls", &refine_tau_ls, py::arg("structure_gain"), py::arg("tau_range"),
        py::arg("records"));
  m.def("mapd", &mapd, py::arg("exp_series"), py::arg("sim_series"));
  m.def("validate_step", &validate_step, py::arg("model"), py::arg("step_records"));
  m.def("high_freq_slope", &high_freq_slope, py::arg("bode"));
  m.def("identify_model", &identify_model, py::arg("records"), py::arg("settle_cycles") = 3);

  py::class_<MapdEntry>(m, "MapdEntry")
      .def_readonly("amplitude", &MapdEntry::amplitude)
      .def_readonly("mapd_percent", &MapdEntry::mapd_percent)
      .def_readonly("defined", &MapdEntry::defined);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("entries", &ValidationReport::entries)
      .def_readonly("mean_mapd", &ValidationReport::mean_mapd)
      .def_readonly("max_mapd", &ValidationReport::max_mapd);

  py::class_<SmcParams>(m, "SmcParams")
      .def(py::init<double, double, double, double>(), py::arg("lambda_") = 2.0,
           py::arg("k_reach") = 1.25, py::arg("q") = 12.0, py::arg("boundary_layer") = 0.05)
      .def_readwrite("lambda_", &SmcParams::lambda)
      .def_readwrite("k_reach", &SmcParams::k_reach)
      .def_readwrite("q", &SmcParams::q)
      .def_readwrite("boundary_layer", &SmcParams::boundary_layer);

  py::class_<PdParams>(m, "PdParams")
      .def(py::init<double, double>(), py::arg("k_p") = 0.7, py::arg("k_d") = 0.3)
      .def_readwrite("k_p", &PdParams::k_p)
      .def_readwrite("k_d", &PdParams::k_d);

  py::class_<AxisFeedback>(m, "AxisFeedback")
      .def(py::init<double, double, double>(), py::arg("position") = 0.0,
           py::arg("velocity") = 0.0, py::arg("target") = 0.0)
      .def_readwrite("position", &AxisFeedback::position)
      .def_readwrite("velocity", &AxisFeedback::velocity)
      .def_readwrite("target", &AxisFeedback::target);

  m.def("sliding_surface", &sliding_surface, py::arg("feedback"), py::arg("lambda_"));
  m.def("smoothed_sign", &smoothed_sign, py::arg("s"), py::arg("boundary_layer"));
  m.def("reaching_rate", &reaching_rate, py::arg("s"), py::arg("params"));
  m.def("smc_control", &smc_control, py::arg("params"), py::arg("feedback"), py::arg("model"));
  m.def("pd_control", &pd_control, py::arg("params"), py::arg("feedback"));
  m.def("tune_pd", &tune_pd, py::arg("model"), py::arg("sat_limit"), py::arg("step_size") = 1.0,
        py::arg("dt") = 0.02);

  py::class_<Mission>(m, "Mission")
      .def(py::init<>())
      .def_readwrite("target", &Mission::target)
      .def_readwrite("band_half_width", &Mission::band_half_width)
      .def_readwrite("hold_duration", &Mission::hold_duration)
      .def_readwrite("min_op_height", &Mission::min_op_height)
      .def_readwrite("timeout", &Mission::timeout)
      .def_readwrite("dt", &Mission::dt);

  py::enum_<ControllerSet::Kind>(m, "ControllerKind")
      .value("SMC", ControllerSet::Kind::kSmc)
      .value("PD", ControllerSet::Kind::kPd);

  py::class_<ControllerSet>(m, "ControllerSet")
      .def(py::init<>())
      .def_readwrite("kind", &ControllerSet::kind)
      .def_readwrite("smc_xy", &ControllerSet::smc_xy)
      .def_readwrite("smc_z", &ControllerSet::smc_z)
      .def_readwrite("pd_xy", &ControllerSet::pd_xy)
      .def_readwrite("pd_z", &ControllerSet::pd_z);

  py::class_<AxisTrace>(m, "AxisTrace")
      .def_readonly("position", &AxisTrace::position)
      .def_readonly("velocity", &AxisTrace::velocity)
      .def_readonly("command", &AxisTrace::command)
      .def_readonly("wind", &AxisTrace::wind);

  py::class_<MissionResult>(m, "MissionResult")
      .def_readonly("success", &MissionResult::success)
      .def_readonly("settle_time", &MissionResult::settle_time)
      .def_readonly("land_time", &MissionResult::land_time)
      .def_readonly("max_dev_after_settle", &MissionResult::max_dev_after_settle)
      .def_readonly("dt", &MissionResult::dt)
      .def_readonly("end_time", &MissionResult::end_time)
      .def_readonly("axes", &MissionResult::axes)
      .def_readonly("phase", &MissionResult::phase);

  py::class_<ControllerMetrics>(m, "ControllerMetrics")
      .def_readonly("success", &ControllerMetrics::success)
      .def_readonly("settle_time", &ControllerMetrics::settle_time)
      .def_readonly("land_time", &ControllerMetrics::land_time)
      .def_readonly("steady_max_dev", &ControllerMetrics::steady_max_dev)
      .def_readonly("effort_rms", &ControllerMetrics::effort_rms);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("smc_result", &ComparisonReport::smc_result)
      .def_readonly("pd_result", &ComparisonReport::pd_result)
      .def_readonly("smc_metrics", &ComparisonReport::smc_metrics)
      .def_readonly("pd_metrics", &ComparisonReport::pd_metrics);

  m.def("run_mission", &run_mission, py::arg("plant"), py::arg("controllers"),
        py::arg("mission"));
  m.def("band_hold_monitor", &monitor_wrapper, py::arg("positions"), py::arg("target"),
        py::arg("band_half_width"), py::arg("hold_duration"), py::arg("dt"),
        py::arg("start_time") = 0.0);
  m.def("mission_metrics", &mission_metrics, py::arg("result"), py::arg("mission"));
  m.def("compare_controllers", &compare_controllers, py::arg("plant"), py::arg("smc"),
        py::arg("pd"), py::arg("mission"), py::arg("wind"), py::arg("jobs") = 1);

  m.def("plant_preset", &plant_preset, py::arg("name"));
  m.def("controller_preset", &controller_preset, py::arg("name"));

  py::class_<KeyValueConfig>(m, "KeyValueConfig")
      .def(py::init<>())
      .def_static("parse_file", &KeyValueConfig::parse_file)
      .def_static("parse_string", &KeyValueConfig::parse_string)
      .def("has", &KeyValueConfig::has)
      .def("set", &KeyValueConfig::set)
      .def("get_string", &KeyValueConfig::get_string)
      .def("get_double", &KeyValueConfig::get_double);

  py::class_<CommandOptions>(m, "CommandOptions")
      .def(py::init<>())
      .def_readwrite("out_dir", &CommandOptions::out_dir)
      .def_readwrite("seed", &CommandOptions::seed)
      .def_readwrite("jobs", &CommandOptions::jobs);

  m.def("run_command", &run_command, py::arg("name"), py::arg("config"), py::arg("options"));
}
