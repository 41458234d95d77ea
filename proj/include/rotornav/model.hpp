#pragma once

namespace rotornav {

// First-order velocity model of one translational axis: commanded velocity in,
// actual velocity out, with steady-state gain and time constant.
struct FirstOrderModel {
  double gain_k = 1.0;  // settled output per unit commanded velocity
  double tau = 1.0;     // time constant [s]

  // State-space form of the velocity dynamics: v' = A v + B u.
  double state_a() const { return -1.0 / tau; }
  double state_b() const { return gain_k / tau; }

  void validate() const;
};

}  // namespace rotornav
