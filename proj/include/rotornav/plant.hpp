#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>

#include "rotornav/model.hpp"
#include "rotornav/timeseries.hpp"

namespace rotornav {

using Vec3 = std::array<double, 3>;

struct AxisState {
  double velocity = 0.0;  // m/s, command response (wind drift kept separate)
  double position = 0.0;  // m
};

struct SaturationLimits {
  double max_xy_cmd = 5.0;  // m/s
  double max_z_cmd = 3.0;   // m/s
  void validate() const;
};

// Mean wind plus a first-order Gauss-Markov gust process per axis.
struct WindModel {
  Vec3 mean_velocity{0.0, 0.0, 0.0};  // m/s
  double gust_std = 0.0;              // stationary gust std [m/s]
  double gust_bandwidth = 1.0;        // gust decorrelation rate [rad/s]
  std::uint64_t seed = 0;
  void validate() const;
};

// Stateful gust generator. Bit-reproducible: the same seed and call sequence
// yields the same samples, so paired experiment runs can share one wind
// realization.
class WindSampler {
 public:
  explicit WindSampler(const WindModel& model);

  Vec3 sample(double dt);

 private:
  double next_normal();

  WindModel model_;
  std::mt19937_64 rng_;
  Vec3 gust_{0.0, 0.0, 0.0};
};

// Clamp a command to the actuation envelope.
double apply_saturation(double u_cmd, double limit);

// Advance one axis by dt under a held command. Velocity follows the exact
// zero-order-hold discretization of the first-order model; wind enters as an
// airmass drift added to the velocity that the position integrates
// (trapezoidal rule). Requires dt in (0, tau/5].
AxisState step_axis(const FirstOrderModel& model, const AxisState& state, double u_cmd,
                    double wind_vel, double dt,
                    double sat_limit = std::numeric_limits<double>::infinity());

// Velocity response of the model to a sampled input, starting from rest.
// Output has the same length as the input; sample k is the state after k
// hold intervals, so output[0] is the initial velocity. No saturation: this
// is the linear data-acquisition path.
TimeSeries simulate_open_loop(const FirstOrderModel& model, const TimeSeries& input, double dt);

// Map a payload mass onto model parameters: a heavier craft responds slower
// (tau scaled up) and under-delivers commanded velocity (gain scaled down),
// both by the mass ratio.
FirstOrderModel perturb_for_mass(const FirstOrderModel& model, double mass_nominal,
                                 double payload);

// Three decoupled first-order axes with saturation, optional wind, and
// payload-dependent parameter perturbation. Plain value; step from one
// logical thread at a time.
struct UavPlant {
  FirstOrderModel model_x, model_y, model_z;
  AxisState state_x, state_y, state_z;
  SaturationLimits limits;
  std::optional<WindModel> wind;
  double mass_nominal = 8.0;  // kg
  double payload = 0.0;       // kg

  void validate() const;

  // Model of axis 0/1/2 with the payload perturbation applied.
  FirstOrderModel effective_model(int axis) const;
  const AxisState& state(int axis) const;

  // Advance all three axes by dt: commands are saturated per axis group,
  // wind is the held drift velocity over the interval.
  void step(const Vec3& u_cmd, const Vec3& wind_vel, double dt);
};

}  // namespace rotornav
