#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rotornav/errors.hpp"
#include "rotornav/timeseries.hpp"

using namespace rotornav;

namespace fs = std::filesystem;

TEST_CASE("time series validation") {
  TimeSeries ts;
  ts.dt = 0.02;
  ts.values = {0.0};
  CHECK_THROWS_AS(ts.validate(), ConfigError);  // too short
  ts.values = {0.0, 1.0};
  CHECK_NOTHROW(ts.validate());
  ts.dt = 0.0;
  CHECK_THROWS_AS(ts.validate(), ConfigError);
  ts.dt = 0.02;
  ts.values[1] = std::nan("");
  CHECK_THROWS_AS(ts.validate(), NumericError);
}

TEST_CASE("csv persistence round-trips and re-writes identically") {
  const fs::path path = fs::temp_directory_path() / "rotornav_ts_roundtrip.csv";
  TimeSeries ts;
  ts.dt = 0.02;
  ts.start_time = 1.5;
  for (int k = 0; k < 100; ++k) {
    ts.values.push_back(0.731 * std::sin(0.37 * k));
  }
  write_csv(ts, path);
  const TimeSeries back = read_timeseries_csv(path);
  CHECK(back.size() == ts.size());
  CHECK(back.dt == doctest::Approx(ts.dt).epsilon(1e-9));
  CHECK(back.start_time == doctest::Approx(ts.start_time).epsilon(1e-9));
  for (std::size_t k = 0; k < ts.size(); ++k) {
    // Six-decimal fixed format quantizes.
    CHECK(back.values[k] == doctest::Approx(ts.values[k]).epsilon(1e-6));
  }
  // The written representation is a fixed point of the round trip.
  const fs::path again = fs::temp_directory_path() / "rotornav_ts_roundtrip2.csv";
  write_csv(back, again);
  std::ifstream a(path), b(again);
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  fs::remove(path);
  fs::remove(again);
}

TEST_CASE("csv reading rejects malformed files") {
  const fs::path path = fs::temp_directory_path() / "rotornav_ts_bad.csv";
  {
    std::ofstream out(path);
    out << "wrong,header\n0.0,1.0\n";
  }
  CHECK_THROWS_AS(read_timeseries_csv(path), FormatError);
  {
    std::ofstream out(path);
    out << "t,value\n0.000000,1.0\n0.020000,1.0\n0.100000,1.0\n";
  }
  CHECK_THROWS_AS(read_timeseries_csv(path), FormatError);  // non-uniform sampling
  fs::remove(path);
}
