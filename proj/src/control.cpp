#include "rotornav/control.hpp"

#include <algorithm>
#include <cmath>

#include "rotornav/errors.hpp"
#include "rotornav/plant.hpp"

namespace rotornav {

void SmcParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("smc lambda must be positive");
  }
  if (!(k_reach >= 0.0) || !(q >= 0.0)) {
    throw ConfigError("smc gains must be non-negative");
  }
  if (!(k_reach + q > 0.0)) {
    throw ConfigError("smc needs k_reach + q > 0");
  }
  if (!(boundary_layer > 0.0)) {
    throw ConfigError("smc boundary layer must be positive");
  }
}

void PdParams::validate() const {
  if (!(k_p > 0.0) || !(k_d >= 0.0)) {
    throw ConfigError("pd needs k_p > 0 and k_d >= 0");
  }
}

double sliding_surface(const AxisFeedback& fb, double lambda) {
  return lambda * (fb.position - fb.target) + fb.velocity;
}

double smoothed_sign(double s, double boundary_layer) {
  return std::clamp(s / boundary_layer, -1.0, 1.0);
}

double reaching_rate(double s, const SmcParams& params) {
  params.validate();
  return -params.k_reach * smoothed_sign(s, params.boundary_layer) - params.q * s;
}

double smc_control(const SmcParams& params, const AxisFeedback& fb,
                   const FirstOrderModel& model) {
  params.validate();
  model.validate();
  const double s = sliding_surface(fb, params.lambda);
  const double a = model.state_a();
  const double b = model.state_b();
  return (-params.k_reach * smoothed_sign(s, params.boundary_layer) - params.q * s -
          a * fb.velocity - params.lambda * fb.velocity) /
         b;
}

double pd_control(const PdParams& params, const AxisFeedback& fb) {
  params.validate();
  return -params.k_p * (fb.position - fb.target) - params.k_d * fb.velocity;
}

namespace {

// Closed-loop position step on one axis; returns the peak overshoot as a
// fraction of the step size.
double pd_overshoot(const FirstOrderModel& model, const PdParams& params, double sat_limit,
                    double step_size, double dt) {
  AxisState state;
  double peak = 0.0;
  const int steps = static_cast<int>(std::llround(30.0 / dt));
  for (int k = 0; k < steps; ++k) {
    const AxisFeedback fb{state.position, state.velocity, step_size};
    const double u = pd_control(params, fb);
    state = step_axis(model, state, u, 0.0, dt, sat_limit);
    peak = std::max(peak, state.position - step_size);
  }
  return peak / step_size;
}

}  // namespace

PdParams tune_pd(const FirstOrderModel& model, double sat_limit, double step_size, double dt) {
  model.validate();
  PdParams params{0.2, 0.0};
  while (pd_overshoot(model, params, sat_limit, step_size, dt) < 0.05) {
    params.k_p *= 1.2;
    if (params.k_p > 100.0) {
      throw ConfigError("pd tuning failed to provoke an overshoot");
    }
  }
  while (pd_overshoot(model, params, sat_limit, step_size, dt) >= 0.01) {
    params.k_d += 0.02;
    if (params.k_d > 10.0) {
      throw ConfigError("pd tuning failed to damp the overshoot");
    }
  }
  return params;
}

}  // namespace rotornav
