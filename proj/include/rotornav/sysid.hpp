#pragma once

#include <array>
#include <utility>
#include <vector>

#include "rotornav/model.hpp"
#include "rotornav/plant.hpp"
#include "rotornav/timeseries.hpp"

namespace rotornav {

// Sine-sweep plan: excitation frequencies, amplitude, and how many cycles are
// simulated vs discarded as transient per point.
struct SweepSpec {
  std::vector<double> omegas;  // rad/s, strictly increasing, within [0.4, 15]
  double amplitude = 1.0;      // m/s
  int cycles_per_point = 5;
  int settle_cycles = 3;

  void validate() const;

  static SweepSpec log_grid(double omega_min, double omega_max, int points,
                            double amplitude = 1.0, int cycles_per_point = 5,
                            int settle_cycles = 3);
};

struct MagnitudePoint {
  double omega = 0.0;   // rad/s
  double mag_db = 0.0;  // 20*log10(|output|/|input|)
};

// Half-power crossing result: interpolated time constant plus the bracket
// given by the sweep grid points around the crossing.
struct CutoffEstimate {
  double tau = 0.0;
  std::array<double, 2> tau_range{0.0, 0.0};
};

struct IdentifiedModel {
  FirstOrderModel model;
  std::array<double, 2> tau_range{0.0, 0.0};
  double slope_high_db_per_decade = 0.0;
  double fit_sse = 0.0;             // (m/s)^2, summed over refinement records
  double lti_freq_deviation = 0.0;  // mean |peak output freq - input freq| [rad/s]
};

// One sweep point: excitation frequency with the recorded input/output pair.
struct SweepRecord {
  double omega = 0.0;
  TimeSeries input;
  TimeSeries output;
};

// amplitude * sin(omega * t) sampled at dt. Requires at least two periods.
TimeSeries generate_sine(double amplitude, double omega, double duration, double dt);

// Seconds discarded before steady-state measurement: the configured settle
// cycles, floored at kSettleFloorSeconds (five times the slowest plausible
// time constant).
inline constexpr double kSettleFloorSeconds = 4.5;
double settle_seconds(double omega, int settle_cycles);

// Record length for one sweep point: settle window plus the measurement
// cycles.
double sweep_duration(double omega, const SweepSpec& spec);

// Excite the model at every sweep frequency. Points are independent; jobs > 1
// computes them in parallel (identical output regardless of jobs).
std::vector<SweepRecord> run_sweep(const FirstOrderModel& model, const SweepSpec& spec,
                                   double dt, int jobs = 1);

// Frequency of the largest non-DC spectral component, refined by quadratic
// interpolation over adjacent bins of a windowed, zero-padded transform.
double peak_frequency(const TimeSeries& ts);

// Steady-state output/input amplitude ratio at omega in dB. Discards the
// settle window, then projects both series onto sin/cos at omega over an
// integer number of periods.
double magnitude_at(const TimeSeries& input, const TimeSeries& output, double omega,
                    int settle_cycles = 3);

std::vector<MagnitudePoint> build_bode(const std::vector<SweepRecord>& records,
                                       int settle_cycles = 3);
std::vector<MagnitudePoint> build_bode(const FirstOrderModel& model, const SweepSpec& spec,
                                       double dt);

// Steady-state gain from the lowest-frequency magnitude point.
double estimate_gain(const std::vector<MagnitudePoint>& bode);

// Locate the frequency where the magnitude drops 3 dB below the gain, by
// linear interpolation in (log omega, dB); tau = 1/omega_c. The range comes
// from the grid points bracketing the crossing.
CutoffEstimate estimate_tau_cutoff(const std::vector<MagnitudePoint>& bode, double gain_k);

// Least-squares refinement of tau over the cutoff range with the gain held
// fixed: golden-section search of the summed squared simulation error, to
// 1e-4 s. A flat objective returns the range midpoint.
double refine_tau_ls(double structure_gain, const std::array<double, 2>& tau_range,
                     const std::vector<SweepRecord>& records);

// Mean absolute percentage deviation between experimental and simulated
// series. Samples with |experimental| < 1e-3 m/s are excluded; if every
// sample is excluded the result is undefined.
double mapd(const TimeSeries& exp_series, const TimeSeries& sim_series);

struct MapdEntry {
  double amplitude = 0.0;
  double mapd_percent = 0.0;
  bool defined = false;
};

struct ValidationReport {
  std::vector<MapdEntry> entries;
  double mean_mapd = 0.0;  // over defined entries
  double max_mapd = 0.0;
};

// Compare recorded step responses against the model's simulated responses.
// Per-record undefined MAPD is surfaced in the entry; at least one record
// must be defined.
ValidationReport validate_step(const FirstOrderModel& model,
                               const std::vector<std::pair<double, TimeSeries>>& step_records);

// Least-squares slope of mag_db vs log10(omega) over the top portion of the
// sweep (omega >= omega_max / 3), in dB/decade.
double high_freq_slope(const std::vector<MagnitudePoint>& bode);

// Full identification pipeline on sweep records: magnitude plot, gain from
// the lowest frequency corrected for the first-order roll-off at that
// frequency (fixed-point iteration with the cutoff estimate), tau range from
// the half-power crossing, tau refined by least squares, plus the spectral
// LTI check and the high-frequency slope.
IdentifiedModel identify_model(const std::vector<SweepRecord>& records, int settle_cycles = 3);

}  // namespace rotornav
