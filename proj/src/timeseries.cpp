#include "rotornav/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rotornav/errors.hpp"

namespace rotornav {

void TimeSeries::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("time series requires dt > 0");
  }
  if (values.size() < 2) {
    throw ConfigError("time series requires at least 2 samples");
  }
  if (!std::isfinite(start_time)) {
    throw NumericError("time series start_time is not finite");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericError("time series contains a non-finite sample");
    }
  }
}

TimeSeries constant_series(double value, double duration, double dt, double start_time) {
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw ConfigError("constant_series requires dt > 0 and duration > 0");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  TimeSeries ts;
  ts.dt = dt;
  ts.start_time = start_time;
  ts.values.assign(n, value);
  ts.validate();
  return ts;
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  ts.validate();
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot open for writing: " + path.string());
  }
  out << "t,value\n";
  char line[80];
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::snprintf(line, sizeof line, "%.6f,%.6f\n", ts.time_at(k), ts.values[k]);
    out << line;
  }
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open for reading: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != "t,value") {
    throw FormatError("expected 't,value' header in " + path.string());
  }
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError("malformed row in " + path.string() + ": " + line);
    }
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw FormatError("malformed number in " + path.string() + ": " + line);
    }
  }
  if (times.size() < 2) {
    throw FormatError("time series needs at least 2 rows: " + path.string());
  }
  TimeSeries ts;
  ts.start_time = times.front();
  ts.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  ts.values = std::move(values);
  // Uniform sampling check against the reconstructed rate.
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - ts.time_at(k)) > 1e-4) {
      throw FormatError("non-uniform sampling in " + path.string());
    }
  }
  ts.validate();
  return ts;
}

}  // namespace rotornav
