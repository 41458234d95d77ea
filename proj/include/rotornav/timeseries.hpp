#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace rotornav {

// Uniformly sampled signal. Used for sweep inputs, responses and telemetry.
struct TimeSeries {
  double dt = 0.0;
  double start_time = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t k) const { return start_time + dt * static_cast<double>(k); }
  double duration() const {
    return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1);
  }

  // Throws ConfigError/NumericError if dt <= 0, fewer than 2 samples, or
  // any sample is non-finite.
  void validate() const;
};

TimeSeries constant_series(double value, double duration, double dt, double start_time = 0.0);

// CSV persistence, header "t,value", fixed six-decimal format.
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);
TimeSeries read_timeseries_csv(const std::filesystem::path& path);

}  // namespace rotornav
