#pragma once

#include "rotornav/model.hpp"

namespace rotornav {

// Sliding-mode position controller gains for one axis.
struct SmcParams {
  double lambda = 2.0;          // surface slope [1/s]
  double k_reach = 1.25;        // constant-rate reaching gain [m/s^2]
  double q = 12.0;              // proportional reaching gain [1/s]
  double boundary_layer = 0.05; // sign-smoothing half-width [m/s]
  void validate() const;
};

struct PdParams {
  double k_p = 0.7;  // [1/s]
  double k_d = 0.3;  // dimensionless (acts on measured velocity)
  void validate() const;
};

// Measured axis state. velocity is the position derivative (so it includes
// wind drift when the craft is drifting).
struct AxisFeedback {
  double position = 0.0;  // m
  double velocity = 0.0;  // m/s
  double target = 0.0;    // m
};

// s = lambda * (position - target) + velocity; a stationary target is assumed.
double sliding_surface(const AxisFeedback& fb, double lambda);

// Boundary-layer-smoothed sign: linear ramp inside |s| <= boundary_layer.
double smoothed_sign(double s, double boundary_layer);

// Desired surface rate: -k_reach * sgn(s) - q * s (diagnostic form of the
// reaching law).
double reaching_rate(double s, const SmcParams& params);

// Command velocity that cancels the measured-velocity terms of the surface
// dynamics and imposes the reaching law. Not saturated here; actuation
// limits belong to the plant.
double smc_control(const SmcParams& params, const AxisFeedback& fb, const FirstOrderModel& model);

// Heuristic linear baseline: u = -k_p * error - k_d * velocity.
double pd_control(const PdParams& params, const AxisFeedback& fb);

// Scripted gain heuristic for the PD baseline: raise k_p until the closed
// loop first overshoots by at least 5% of the step, then raise k_d until the
// overshoot falls below 1%. Deterministic; the shipped presets are its
// output on the nominal axis models.
PdParams tune_pd(const FirstOrderModel& model, double sat_limit, double step_size = 1.0,
                 double dt = 0.02);

}  // namespace rotornav
