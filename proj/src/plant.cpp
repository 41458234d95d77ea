#include "rotornav/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rotornav/errors.hpp"

namespace rotornav {

void FirstOrderModel::validate() const {
  if (!(gain_k > 0.0) || !std::isfinite(gain_k)) {
    throw ConfigError("model gain must be positive and finite");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError("model time constant must be positive and finite");
  }
}

void SaturationLimits::validate() const {
  if (!(max_xy_cmd > 0.0) || !(max_z_cmd > 0.0)) {
    throw ConfigError("saturation limits must be strictly positive");
  }
}

void WindModel::validate() const {
  for (double m : mean_velocity) {
    if (!std::isfinite(m)) {
      throw NumericError("wind mean velocity is not finite");
    }
  }
  if (!(gust_std >= 0.0) || !std::isfinite(gust_std)) {
    throw ConfigError("gust std must be non-negative");
  }
  if (!(gust_bandwidth > 0.0) || !std::isfinite(gust_bandwidth)) {
    throw ConfigError("gust bandwidth must be positive");
  }
}

WindSampler::WindSampler(const WindModel& model) : model_(model), rng_(model.seed) {
  model_.validate();
}

double WindSampler::next_normal() {
  // Box-Muller, cosine branch only, built on the raw engine output so the
  // sequence is identical across standard library implementations.
  const double u1 =
      (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec3 WindSampler::sample(double dt) {
  if (!(dt > 0.0)) {
    throw ConfigError("wind sample requires dt > 0");
  }
  const double rho = std::exp(-model_.gust_bandwidth * dt);
  const double drive = model_.gust_std * std::sqrt(1.0 - rho * rho);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    gust_[i] = rho * gust_[i] + drive * next_normal();
    out[i] = model_.mean_velocity[i] + gust_[i];
  }
  return out;
}

double apply_saturation(double u_cmd, double limit) {
  if (!(limit > 0.0)) {
    throw ConfigError("saturation limit must be positive");
  }
  return std::clamp(u_cmd, -limit, limit);
}

AxisState step_axis(const FirstOrderModel& model, const AxisState& state, double u_cmd,
                    double wind_vel, double dt, double sat_limit) {
  model.validate();
  if (!std::isfinite(u_cmd) || !std::isfinite(wind_vel) || !std::isfinite(state.velocity) ||
      !std::isfinite(state.position)) {
    throw NumericError("step_axis received a non-finite input");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("step_axis requires dt > 0");
  }
  if (dt > model.tau / 5.0 * (1.0 + 1e-9)) {
    throw ConfigError("step_axis requires dt <= tau/5");
  }
  const double u = apply_saturation(u_cmd, sat_limit);
  const double a = std::exp(-dt / model.tau);
  AxisState next;
  next.velocity = a * state.velocity + (1.0 - a) * model.gain_k * u;
  next.position = state.position +
                  0.5 * dt * ((state.velocity + wind_vel) + (next.velocity + wind_vel));
  return next;
}

TimeSeries simulate_open_loop(const FirstOrderModel& model, const TimeSeries& input, double dt) {
  model.validate();
  input.validate();
  if (std::abs(input.dt - dt) > 1e-12 * std::max(1.0, dt)) {
    throw FormatError("input is not sampled at the requested dt");
  }
  const double a = std::exp(-dt / model.tau);
  const double b = (1.0 - a) * model.gain_k;
  TimeSeries out;
  out.dt = input.dt;
  out.start_time = input.start_time;
  out.values.resize(input.size());
  double v = 0.0;
  out.values[0] = v;
  for (std::size_t k = 1; k < input.size(); ++k) {
    v = a * v + b * input.values[k - 1];
    out.values[k] = v;
  }
  return out;
}

FirstOrderModel perturb_for_mass(const FirstOrderModel& model, double mass_nominal,
                                 double payload) {
  model.validate();
  if (!(mass_nominal > 0.0)) {
    throw ConfigError("nominal mass must be positive");
  }
  if (payload < 0.0) {
    throw ConfigError("payload must be non-negative");
  }
  const double ratio = (mass_nominal + payload) / mass_nominal;
  return FirstOrderModel{model.gain_k / ratio, model.tau * ratio};
}

void UavPlant::validate() const {
  model_x.validate();
  model_y.validate();
  model_z.validate();
  limits.validate();
  if (wind) {
    wind->validate();
  }
  if (!(mass_nominal > 0.0)) {
    throw ConfigError("nominal mass must be positive");
  }
  if (payload < 0.0) {
    throw ConfigError("payload must be non-negative");
  }
}

FirstOrderModel UavPlant::effective_model(int axis) const {
  const FirstOrderModel& base = axis == 0 ? model_x : axis == 1 ? model_y : model_z;
  return perturb_for_mass(base, mass_nominal, payload);
}

const AxisState& UavPlant::state(int axis) const {
  return axis == 0 ? state_x : axis == 1 ? state_y : state_z;
}

void UavPlant::step(const Vec3& u_cmd, const Vec3& wind_vel, double dt) {
  const Vec3 limit{limits.max_xy_cmd, limits.max_xy_cmd, limits.max_z_cmd};
  AxisState* states[3] = {&state_x, &state_y, &state_z};
  for (int i = 0; i < 3; ++i) {
    *states[i] = step_axis(effective_model(i), *states[i], u_cmd[i], wind_vel[i], dt, limit[i]);
  }
}

}  // namespace rotornav
