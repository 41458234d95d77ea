#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rotornav/errors.hpp"
#include "rotornav/sysid.hpp"

using namespace rotornav;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: |G(jw)| in dB for K/(1 + tau s).
double mag_db_oracle(double gain, double tau, double omega) {
  return 20.0 * std::log10(gain) - 10.0 * std::log10(1.0 + tau * tau * omega * omega);
}

SweepSpec default_spec() { return SweepSpec::log_grid(0.4, 15.0, 25); }

}  // namespace

TEST_CASE("generate_sine samples the requested waveform") {
  SUBCASE("quarter period of a 1 Hz sine is 1") {
    const TimeSeries ts = generate_sine(1.0, 2.0 * kPi, 2.0, 0.05);
    CHECK(ts.values[5] == doctest::Approx(1.0).epsilon(1e-12));  // t = 0.25
  }
  SUBCASE("zero amplitude gives an all-zero series") {
    const TimeSeries ts = generate_sine(0.0, 1.0, 20.0, 0.02);
    for (double v : ts.values) {
      CHECK(v == 0.0);
    }
  }
  SUBCASE("sample count and peak") {
    const TimeSeries ts = generate_sine(2.0, 1.0, 20.0, 0.02);
    CHECK(ts.size() == 1001);
    double peak = 0.0;
    for (double v : ts.values) {
      peak = std::max(peak, v);
    }
    CHECK(peak == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("too short a record is rejected") {
    CHECK_THROWS_AS(generate_sine(1.0, 1.0, 5.0, 0.02), ConfigError);
  }
}

TEST_CASE("peak_frequency recovers a pure tone") {
  const TimeSeries ts = generate_sine(1.0, 3.0, 60.0, 0.02);
  CHECK(peak_frequency(ts) == doctest::Approx(3.0).epsilon(0.01 / 3.0));
}

TEST_CASE("peak_frequency on plant output matches the drive frequency") {
  const FirstOrderModel model{1.16, 0.75};
  const TimeSeries input = generate_sine(1.0, 2.0, 40.0, 0.02);
  const TimeSeries output = simulate_open_loop(model, input, 0.02);
  CHECK(std::abs(peak_frequency(output) - 2.0) < 0.02);
}

TEST_CASE("peak_frequency picks the dominant of two tones") {
  TimeSeries ts = generate_sine(1.0, 1.0, 60.0, 0.02);
  const TimeSeries weak = generate_sine(0.2, 5.0, 60.0, 0.02);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    ts.values[k] += weak.values[k];
  }
  CHECK(peak_frequency(ts) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("peak_frequency error paths") {
  CHECK_THROWS_AS(peak_frequency(constant_series(2.5, 10.0, 0.02)), IdentificationError);
  CHECK_THROWS_AS(peak_frequency(constant_series(0.0, 10.0, 0.02)), IdentificationError);
  TimeSeries tiny = generate_sine(1.0, 2.0, 40.0, 1.0);  // 41 samples
  CHECK_THROWS_AS(peak_frequency(tiny), ConfigError);
}

TEST_CASE("peak_frequency across the sweep grid stays within 1e-2 rad/s") {
  const FirstOrderModel model{1.16, 0.75};
  const auto records = run_sweep(model, default_spec(), 0.02);
  for (const auto& rec : records) {
    CHECK(std::abs(peak_frequency(rec.output) - rec.omega) < 0.01);
  }
}

TEST_CASE("magnitude_at of identical series is 0 dB") {
  const double omega = 1.5;
  const TimeSeries ts = generate_sine(1.0, omega, 20.0, 0.02);
  CHECK(std::abs(magnitude_at(ts, ts, omega)) < 1e-9);
}

TEST_CASE("magnitude_at matches the closed-form response") {
  const FirstOrderModel model{1.16, 0.75};
  auto measure = [&](double omega) {
    const double period = 2.0 * kPi / omega;
    const double duration = std::max(4.5, 3.0 * period) + 2.0 * period;
    const TimeSeries input = generate_sine(1.0, omega, duration, 0.02);
    const TimeSeries output = simulate_open_loop(model, input, 0.02);
    return magnitude_at(input, output, omega);
  };
  CHECK(measure(0.4) == doctest::Approx(mag_db_oracle(1.16, 0.75, 0.4)).epsilon(0.01));
  const double omega_c = 1.0 / 0.75;
  CHECK(measure(omega_c) ==
        doctest::Approx(20.0 * std::log10(1.16) - 10.0 * std::log10(2.0)).epsilon(0.01));
}

TEST_CASE("magnitude_at rejects frequencies beyond Nyquist") {
  const TimeSeries ts = generate_sine(1.0, 1.0, 20.0, 0.02);
  CHECK_THROWS_AS(magnitude_at(ts, ts, 200.0), ConfigError);
}

TEST_CASE("bode magnitude of a first-order plant is monotone non-increasing") {
  const FirstOrderModel model{1.16, 0.75};
  const auto bode = build_bode(model, default_spec(), 0.02);
  CHECK(bode.size() == 25);
  for (std::size_t i = 1; i < bode.size(); ++i) {
    CHECK(bode[i].mag_db <= bode[i - 1].mag_db + 1e-6);
  }
}

TEST_CASE("bode from records where output equals input is 0 dB everywhere") {
  std::vector<SweepRecord> records;
  for (double omega : {0.5, 1.0, 2.0}) {
    SweepRecord rec;
    rec.omega = omega;
    rec.input = generate_sine(1.0, omega, std::max(4.5, 3.0 * 2.0 * kPi / omega) +
                                              2.0 * 2.0 * kPi / omega,
                              0.02);
    rec.output = rec.input;
    records.push_back(rec);
  }
  for (const auto& p : build_bode(records)) {
    CHECK(std::abs(p.mag_db) < 1e-9);
  }
}

TEST_CASE("bode of the z-axis model at the top of the sweep") {
  const FirstOrderModel model{0.98, 0.30};
  const auto bode = build_bode(model, default_spec(), 0.02);
  CHECK(bode.back().omega == doctest::Approx(15.0));
  CHECK(bode.back().mag_db == doctest::Approx(mag_db_oracle(0.98, 0.30, 15.0)).epsilon(0.005));
}

TEST_CASE("estimate_gain inverts the low-frequency magnitude") {
  CHECK(estimate_gain({{0.4, 0.0}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estimate_gain({{0.4, 1.2892}}) == doctest::Approx(1.16).epsilon(1e-3));
  CHECK_THROWS_AS(estimate_gain({}), ConfigError);
}

TEST_CASE("estimate_gain on the z-axis sweep is within 2% of the true gain") {
  const FirstOrderModel model{0.98, 0.30};
  const auto bode = build_bode(model, default_spec(), 0.02);
  CHECK(estimate_gain(bode) == doctest::Approx(0.98).epsilon(0.02));
}

TEST_CASE("estimate_gain is invariant to the sweep amplitude on a linear plant") {
  const FirstOrderModel model{1.16, 0.75};
  auto spec_small = SweepSpec::log_grid(0.4, 15.0, 25, 0.5);
  auto spec_large = SweepSpec::log_grid(0.4, 15.0, 25, 5.0);
  const double g_small = estimate_gain(build_bode(model, spec_small, 0.02));
  const double g_large = estimate_gain(build_bode(model, spec_large, 0.02));
  CHECK(g_small == doctest::Approx(g_large).epsilon(0.005));
}

TEST_CASE("estimate_tau_cutoff brackets the true time constant") {
  SUBCASE("x/y model with the true gain") {
    const auto bode = build_bode(FirstOrderModel{1.16, 0.75}, default_spec(), 0.02);
    const CutoffEstimate cut = estimate_tau_cutoff(bode, 1.16);
    CHECK(cut.tau_range[0] <= 0.75);
    CHECK(cut.tau_range[1] >= 0.75);
    CHECK(cut.tau_range[0] >= 0.5);
    CHECK(cut.tau_range[1] <= 0.9);
    CHECK(cut.tau == doctest::Approx(0.75).epsilon(0.01));
  }
  SUBCASE("z model with the true gain") {
    const auto bode = build_bode(FirstOrderModel{0.98, 0.30}, default_spec(), 0.02);
    const CutoffEstimate cut = estimate_tau_cutoff(bode, 0.98);
    CHECK(cut.tau_range[0] <= 0.30);
    CHECK(cut.tau_range[1] >= 0.30);
    CHECK(cut.tau_range[0] >= 0.2);
    CHECK(cut.tau_range[1] <= 0.4);
  }
  SUBCASE("dense analytic plot recovers tau within 1%") {
    std::vector<MagnitudePoint> bode;
    for (int i = 0; i < 200; ++i) {
      const double omega = 0.5 * std::pow(10.0 / 0.5, i / 199.0);
      bode.push_back({omega, mag_db_oracle(1.3, 0.42, omega)});
    }
    const CutoffEstimate cut = estimate_tau_cutoff(bode, 1.3);
    CHECK(cut.tau == doctest::Approx(0.42).epsilon(0.01));
  }
  SUBCASE("no crossing inside the sweep") {
    const auto bode = build_bode(FirstOrderModel{1.16, 0.75},
                                 SweepSpec::log_grid(0.4, 0.6, 5), 0.02);
    CHECK_THROWS_AS(estimate_tau_cutoff(bode, 1.16), IdentificationError);
  }
}

TEST_CASE("refine_tau_ls recovers tau from its own records") {
  const FirstOrderModel model{1.16, 0.75};
  const auto records = run_sweep(model, default_spec(), 0.02);
  const double tau = refine_tau_ls(1.16, {0.5, 0.9}, records);
  CHECK(tau == doctest::Approx(0.75).epsilon(0.005 / 0.75));
}

TEST_CASE("refine_tau_ls tie-breaks a flat objective at the range midpoint") {
  SweepRecord rec;
  rec.omega = 1.0;
  rec.input = constant_series(0.0, 5.0, 0.02);
  rec.output = rec.input;
  const double tau = refine_tau_ls(1.0, {0.5, 0.9}, {rec});
  CHECK(tau == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(refine_tau_ls(1.0, {0.5, 0.9}, {}), ConfigError);
}

TEST_CASE("refine_tau_ls tolerates measurement noise") {
  const FirstOrderModel model{0.98, 0.30};
  auto records = run_sweep(model, default_spec(), 0.02);
  std::mt19937 rng(5);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (auto& rec : records) {
    for (auto& v : rec.output.values) {
      v += noise(rng);
    }
  }
  const double tau = refine_tau_ls(0.98, {0.2, 0.4}, records);
  CHECK(std::abs(tau - 0.30) < 0.02);
}

TEST_CASE("mapd basics") {
  const TimeSeries a = constant_series(2.0, 5.0, 0.02);
  SUBCASE("identical series give zero") {
    CHECK(mapd(a, a) == 0.0);
  }
  SUBCASE("constant offset") {
    const TimeSeries b = constant_series(1.8, 5.0, 0.02);
    CHECK(mapd(a, b) == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("length mismatch is a format error") {
    const TimeSeries b = constant_series(1.8, 4.0, 0.02);
    CHECK_THROWS_AS(mapd(a, b), FormatError);
  }
  SUBCASE("all samples under the guard are undefined") {
    const TimeSeries zeros = constant_series(0.0, 5.0, 0.02);
    CHECK_THROWS_AS(mapd(zeros, a), UndefinedResultError);
  }
}

TEST_CASE("mapd is invariant under common positive scaling") {
  // Values kept well above the division guard so scaling does not change the
  // excluded set.
  TimeSeries a, b;
  a.dt = b.dt = 0.02;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> val(0.5, 2.0);
  for (int k = 0; k < 300; ++k) {
    const double v = val(rng);
    a.values.push_back(v);
    b.values.push_back(v * (1.0 + 0.1 * std::sin(k)));
  }
  const double base = mapd(a, b);
  CHECK(base > 0.0);
  for (double alpha : {0.5, 2.0}) {
    TimeSeries as = a, bs = b;
    for (auto& v : as.values) {
      v *= alpha;
    }
    for (auto& v : bs.values) {
      v *= alpha;
    }
    CHECK(mapd(as, bs) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("validate_step of a model against its own plant is exact") {
  const FirstOrderModel model{1.16, 0.75};
  std::vector<std::pair<double, TimeSeries>> records;
  for (double amp : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const TimeSeries input = constant_series(amp, 7.0 * model.tau, 0.02);
    records.emplace_back(amp, simulate_open_loop(model, input, 0.02));
  }
  const ValidationReport report = validate_step(model, records);
  CHECK(report.mean_mapd == 0.0);
  CHECK(report.max_mapd == 0.0);
  CHECK(report.entries.size() == 5);
}

TEST_CASE("validate_step surfaces undefined records individually") {
  const FirstOrderModel model{1.16, 0.75};
  std::vector<std::pair<double, TimeSeries>> records;
  records.emplace_back(0.0, constant_series(0.0, 7.0 * model.tau, 0.02));
  const TimeSeries input = constant_series(1.0, 7.0 * model.tau, 0.02);
  records.emplace_back(1.0, simulate_open_loop(model, input, 0.02));
  const ValidationReport report = validate_step(model, records);
  CHECK_FALSE(report.entries[0].defined);
  CHECK(report.entries[1].defined);

  std::vector<std::pair<double, TimeSeries>> all_zero{records[0]};
  CHECK_THROWS_AS(validate_step(model, all_zero), UndefinedResultError);
}

TEST_CASE("validate_step rejects records shorter than five time constants") {
  const FirstOrderModel model{1.16, 0.75};
  std::vector<std::pair<double, TimeSeries>> records;
  records.emplace_back(1.0, constant_series(1.0, 2.0, 0.02));
  CHECK_THROWS_AS(validate_step(model, records), ConfigError);
}

TEST_CASE("high_freq_slope distinguishes relative order") {
  std::vector<MagnitudePoint> first_order, second_order, flat;
  const auto spec = default_spec();
  for (double omega : spec.omegas) {
    first_order.push_back({omega, mag_db_oracle(1.16, 0.75, omega)});
    second_order.push_back({omega, 2.0 * mag_db_oracle(1.0, 0.75, omega)});
    flat.push_back({omega, 0.0});
  }
  CHECK(high_freq_slope(first_order) == doctest::Approx(-20.0).epsilon(1.5 / 20.0));
  CHECK(high_freq_slope(second_order) == doctest::Approx(-40.0).epsilon(4.0 / 40.0));
  CHECK(std::abs(high_freq_slope(flat)) < 1e-9);

  std::vector<MagnitudePoint> sparse{{1.0, 0.0}, {3.1, -1.0}};
  CHECK_THROWS_AS(high_freq_slope(sparse), ConfigError);
}

TEST_CASE("identification pipeline recovers gain within 2% and tau within 5%") {
  std::vector<std::pair<double, double>> cases = {{0.5, 0.1},  {2.0, 1.0},  {0.8, 0.35},
                                                  {1.5, 0.6},  {1.0, 1.0},  {0.6, 0.9},
                                                  {1.9, 0.15}, {1.3, 0.45}};
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> gain_dist(0.5, 2.0);
  std::uniform_real_distribution<double> tau_dist(0.1, 1.0);
  for (int k = 0; k < 4; ++k) {
    cases.emplace_back(gain_dist(rng), tau_dist(rng));
  }
  for (const auto& [gain, tau] : cases) {
    CAPTURE(gain);
    CAPTURE(tau);
    const auto records = run_sweep(FirstOrderModel{gain, tau}, default_spec(), 0.02);
    const IdentifiedModel fit = identify_model(records);
    CHECK(std::abs(fit.model.gain_k - gain) <= 0.02 * gain);
    CHECK(std::abs(fit.model.tau - tau) <= 0.05 * tau);
    CHECK(fit.tau_range[0] <= fit.model.tau);
    CHECK(fit.model.tau <= fit.tau_range[1]);
  }
}

TEST_CASE("parallel sweep computation matches the sequential result") {
  const FirstOrderModel model{1.16, 0.75};
  const auto seq = run_sweep(model, default_spec(), 0.02, 1);
  const auto par = run_sweep(model, default_spec(), 0.02, 4);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].omega == par[i].omega);
    CHECK(seq[i].output.values == par[i].output.values);
  }
}

TEST_CASE("sweep spec validation") {
  CHECK_THROWS_AS(SweepSpec::log_grid(0.1, 15.0, 25), ConfigError);   // below 0.4
  CHECK_THROWS_AS(SweepSpec::log_grid(0.4, 20.0, 25), ConfigError);   // above 15
  CHECK_THROWS_AS(SweepSpec::log_grid(0.4, 15.0, 25, 1.0, 4, 3), ConfigError);
  SweepSpec spec = SweepSpec::log_grid(0.4, 15.0, 25);
  spec.omegas[3] = spec.omegas[2];
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}
