#include "rotornav/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "rotornav/errors.hpp"

namespace rotornav {

namespace {

constexpr double kPi = std::numbers::pi;

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) {
      j ^= bit;
    }
    j ^= bit;
    if (i < j) {
      std::swap(a[i], a[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) {
    p <<= 1;
  }
  return p;
}

// Projection of a window of samples onto {sin(w t), cos(w t), 1}: solves the
// 3x3 normal equations and returns the amplitude hypot(a, b).
double fitted_amplitude(const TimeSeries& ts, double omega, std::size_t first,
                        std::size_t count) {
  double sss = 0, ssc = 0, ss1 = 0, scc = 0, sc1 = 0, s11 = 0;
  double ys = 0, yc = 0, y1 = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = ts.time_at(first + k);
    const double s = std::sin(omega * t);
    const double c = std::cos(omega * t);
    const double y = ts.values[first + k];
    sss += s * s;
    ssc += s * c;
    ss1 += s;
    scc += c * c;
    sc1 += c;
    s11 += 1.0;
    ys += y * s;
    yc += y * c;
    y1 += y;
  }
  // Cramer's rule on the symmetric system [sss ssc ss1; ssc scc sc1; ss1 sc1 s11].
  const double det = sss * (scc * s11 - sc1 * sc1) - ssc * (ssc * s11 - sc1 * ss1) +
                     ss1 * (ssc * sc1 - scc * ss1);
  if (std::abs(det) < 1e-12) {
    throw IdentificationError("degenerate projection window");
  }
  const double a = (ys * (scc * s11 - sc1 * sc1) - ssc * (yc * s11 - sc1 * y1) +
                    ss1 * (yc * sc1 - scc * y1)) /
                   det;
  const double b = (sss * (yc * s11 - sc1 * y1) - ys * (ssc * s11 - sc1 * ss1) +
                    ss1 * (ssc * y1 - yc * ss1)) /
                   det;
  return std::hypot(a, b);
}

double record_sse(const FirstOrderModel& model, const std::vector<SweepRecord>& records) {
  double sse = 0.0;
  for (const auto& rec : records) {
    const TimeSeries sim = simulate_open_loop(model, rec.input, rec.input.dt);
    for (std::size_t k = 0; k < rec.output.size(); ++k) {
      const double d = rec.output.values[k] - sim.values[k];
      sse += d * d;
    }
  }
  return sse;
}

}  // namespace

void SweepSpec::validate() const {
  if (omegas.empty()) {
    throw ConfigError("sweep needs at least one frequency");
  }
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] >= 0.4 - 1e-12) || !(omegas[i] <= 15.0 + 1e-12)) {
      throw ConfigError("sweep frequencies must lie within [0.4, 15] rad/s");
    }
    if (i > 0 && !(omegas[i] > omegas[i - 1])) {
      throw ConfigError("sweep frequencies must be strictly increasing");
    }
  }
  if (!(amplitude > 0.0)) {
    throw ConfigError("sweep amplitude must be positive");
  }
  if (settle_cycles < 1 || cycles_per_point < settle_cycles + 2) {
    throw ConfigError("sweep needs cycles_per_point >= settle_cycles + 2");
  }
}

SweepSpec SweepSpec::log_grid(double omega_min, double omega_max, int points, double amplitude,
                              int cycles_per_point, int settle_cycles) {
  if (points < 2 || !(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw ConfigError("log grid needs omega_max > omega_min > 0 and >= 2 points");
  }
  SweepSpec spec;
  spec.amplitude = amplitude;
  spec.cycles_per_point = cycles_per_point;
  spec.settle_cycles = settle_cycles;
  const double l0 = std::log(omega_min);
  const double l1 = std::log(omega_max);
  spec.omegas.resize(points);
  for (int i = 0; i < points; ++i) {
    spec.omegas[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (points - 1));
  }
  spec.omegas.front() = omega_min;
  spec.omegas.back() = omega_max;
  spec.validate();
  return spec;
}

TimeSeries generate_sine(double amplitude, double omega, double duration, double dt) {
  if (!(omega > 0.0) || !(dt > 0.0) || !(amplitude >= 0.0)) {
    throw ConfigError("generate_sine requires omega > 0, dt > 0, amplitude >= 0");
  }
  const double period = 2.0 * kPi / omega;
  if (duration < 2.0 * period * (1.0 - 1e-9)) {
    throw ConfigError("sine record must cover at least two periods");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  TimeSeries ts;
  ts.dt = dt;
  ts.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ts.values[k] = amplitude * std::sin(omega * ts.time_at(k));
  }
  return ts;
}

double settle_seconds(double omega, int settle_cycles) {
  const double period = 2.0 * kPi / omega;
  return std::max(kSettleFloorSeconds, settle_cycles * period);
}

double sweep_duration(double omega, const SweepSpec& spec) {
  const double period = 2.0 * kPi / omega;
  const int measure_cycles = spec.cycles_per_point - spec.settle_cycles;
  return settle_seconds(omega, spec.settle_cycles) + measure_cycles * period;
}

std::vector<SweepRecord> run_sweep(const FirstOrderModel& model, const SweepSpec& spec,
                                   double dt, int jobs) {
  model.validate();
  spec.validate();
  if (!(dt > 0.0)) {
    throw ConfigError("run_sweep requires dt > 0");
  }
  std::vector<SweepRecord> records(spec.omegas.size());
  auto compute_point = [&](std::size_t i) {
    const double omega = spec.omegas[i];
    SweepRecord rec;
    rec.omega = omega;
    rec.input = generate_sine(spec.amplitude, omega, sweep_duration(omega, spec), dt);
    rec.output = simulate_open_loop(model, rec.input, dt);
    records[i] = std::move(rec);
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(records.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      compute_point(i);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < records.size(); i += workers) {
          compute_point(i);
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  return records;
}

double peak_frequency(const TimeSeries& ts) {
  ts.validate();
  const std::size_t n = ts.size();
  if (n < 64) {
    throw ConfigError("peak_frequency needs at least 64 samples");
  }
  double mean = 0.0;
  for (double v : ts.values) {
    mean += v;
  }
  mean /= static_cast<double>(n);

  // Hann window on the mean-removed signal, zero-padded 4x for a fine grid.
  const std::size_t padded = next_pow2(4 * n);
  std::vector<std::complex<double>> spec(padded, 0.0);
  double energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n - 1)));
    const double x = w * (ts.values[k] - mean);
    spec[k] = x;
    energy += std::abs(x);
  }
  if (energy < 1e-12) {
    throw IdentificationError("no dominant frequency: series is constant");
  }
  fft_radix2(spec);

  const double bin_width = 2.0 * kPi / (static_cast<double>(padded) * ts.dt);
  // Skip the DC leakage region: below 1.5 fundamental periods of the record.
  const double omega_min = 1.5 * 2.0 * kPi / (static_cast<double>(n) * ts.dt);
  const std::size_t b_min =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(omega_min / bin_width)));
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t b = b_min; b <= padded / 2; ++b) {
    const double mag = std::abs(spec[b]);
    if (mag > best_mag) {
      best_mag = mag;
      best = b;
    }
  }
  if (best == 0 || best_mag <= 1e-12 * energy) {
    throw IdentificationError("no dominant frequency found");
  }
  double delta = 0.0;
  if (best > b_min && best < padded / 2) {
    const double alpha = std::log(std::max(std::abs(spec[best - 1]), 1e-300));
    const double beta = std::log(best_mag);
    const double gamma = std::log(std::max(std::abs(spec[best + 1]), 1e-300));
    const double denom = alpha - 2.0 * beta + gamma;
    if (std::abs(denom) > 1e-12) {
      delta = 0.5 * (alpha - gamma) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
    }
  }
  return (static_cast<double>(best) + delta) * bin_width;
}

double magnitude_at(const TimeSeries& input, const TimeSeries& output, double omega,
                    int settle_cycles) {
  input.validate();
  output.validate();
  if (input.size() != output.size() ||
      std::abs(input.dt - output.dt) > 1e-12 * std::max(1.0, input.dt)) {
    throw FormatError("input and output series must share length and dt");
  }
  if (!(omega > 0.0) || omega >= kPi / input.dt) {
    throw ConfigError("frequency outside the representable (Nyquist) range");
  }
  const double period = 2.0 * kPi / omega;
  const double settle = settle_seconds(omega, settle_cycles);
  const auto first = static_cast<std::size_t>(std::ceil(settle / input.dt - 1e-9));
  if (first + 2 >= input.size()) {
    throw ConfigError("record too short: nothing left after the settle window");
  }
  const double remaining = static_cast<double>(input.size() - 1 - first) * input.dt;
  const int periods = static_cast<int>(std::floor(remaining / period + 1e-9));
  if (periods < 1) {
    throw ConfigError("record too short: less than one period after settling");
  }
  const auto count = static_cast<std::size_t>(
                         std::floor(periods * period / input.dt + 1e-9)) +
                     1;
  const double amp_in = fitted_amplitude(input, omega, first, count);
  const double amp_out = fitted_amplitude(output, omega, first, count);
  if (amp_in < 1e-12) {
    throw ConfigError("input has no content at the requested frequency");
  }
  return 20.0 * std::log10(amp_out / amp_in);
}

std::vector<MagnitudePoint> build_bode(const std::vector<SweepRecord>& records,
                                       int settle_cycles) {
  if (records.empty()) {
    throw ConfigError("no sweep records");
  }
  std::vector<MagnitudePoint> bode;
  bode.reserve(records.size());
  for (const auto& rec : records) {
    bode.push_back({rec.omega, magnitude_at(rec.input, rec.output, rec.omega, settle_cycles)});
  }
  return bode;
}

std::vector<MagnitudePoint> build_bode(const FirstOrderModel& model, const SweepSpec& spec,
                                       double dt) {
  return build_bode(run_sweep(model, spec, dt), spec.settle_cycles);
}

double estimate_gain(const std::vector<MagnitudePoint>& bode) {
  if (bode.empty()) {
    throw ConfigError("empty magnitude plot");
  }
  return std::pow(10.0, bode.front().mag_db / 20.0);
}

CutoffEstimate estimate_tau_cutoff(const std::vector<MagnitudePoint>& bode, double gain_k) {
  if (bode.size() < 2) {
    throw ConfigError("cutoff estimation needs at least two magnitude points");
  }
  if (!(gain_k > 0.0)) {
    throw ConfigError("gain must be positive");
  }
  const double level = 20.0 * std::log10(gain_k) - 10.0 * std::log10(2.0);
  if (bode.front().mag_db <= level) {
    throw IdentificationError("half-power crossing below the sweep range");
  }
  for (std::size_t i = 0; i + 1 < bode.size(); ++i) {
    const double m0 = bode[i].mag_db;
    const double m1 = bode[i + 1].mag_db;
    if (m0 > level && m1 <= level) {
      const double t = (level - m0) / (m1 - m0);
      const double ln_wc =
          std::log(bode[i].omega) + t * (std::log(bode[i + 1].omega) - std::log(bode[i].omega));
      const double omega_c = std::exp(ln_wc);
      CutoffEstimate est;
      est.tau = 1.0 / omega_c;
      est.tau_range = {1.0 / bode[i + 1].omega, 1.0 / bode[i].omega};
      return est;
    }
  }
  throw IdentificationError("no half-power crossing within the sweep range");
}

double refine_tau_ls(double structure_gain, const std::array<double, 2>& tau_range,
                     const std::vector<SweepRecord>& records) {
  if (!(structure_gain > 0.0)) {
    throw ConfigError("gain must be positive");
  }
  const double lo = tau_range[0];
  const double hi = tau_range[1];
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ConfigError("invalid tau range");
  }
  if (records.empty()) {
    throw ConfigError("tau refinement needs at least one record");
  }
  for (const auto& rec : records) {
    if (rec.input.size() != rec.output.size() ||
        std::abs(rec.input.dt - rec.output.dt) > 1e-12) {
      throw FormatError("record input/output must share length and dt");
    }
  }
  auto sse = [&](double tau) {
    return record_sse(FirstOrderModel{structure_gain, tau}, records);
  };
  constexpr double kTol = 1e-4;
  if (hi - lo <= kTol) {
    return 0.5 * (lo + hi);
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sse(c);
  double fd = sse(d);
  const double f_lo = sse(lo);
  const double f_hi = sse(hi);
  double f_min = std::min({f_lo, f_hi, fc, fd});
  double f_max = std::max({f_lo, f_hi, fc, fd});
  while (b - a > kTol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sse(c);
      f_min = std::min(f_min, fc);
      f_max = std::max(f_max, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sse(d);
      f_min = std::min(f_min, fd);
      f_max = std::max(f_max, fd);
    }
  }
  if (f_max - f_min <= 1e-12 * std::max(1.0, f_max)) {
    // Flat objective: deterministic tie-break on the range midpoint.
    return 0.5 * (lo + hi);
  }
  return 0.5 * (a + b);
}

double mapd(const TimeSeries& exp_series, const TimeSeries& sim_series) {
  exp_series.validate();
  sim_series.validate();
  if (exp_series.size() != sim_series.size() ||
      std::abs(exp_series.dt - sim_series.dt) > 1e-12 * std::max(1.0, exp_series.dt)) {
    throw FormatError("MAPD requires equal length and dt");
  }
  constexpr double kEps = 1e-3;  // m/s, division guard
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < exp_series.size(); ++k) {
    const double g_exp = exp_series.values[k];
    if (std::abs(g_exp) < kEps) {
      continue;
    }
    sum += std::abs((g_exp - sim_series.values[k]) / g_exp);
    ++n;
  }
  if (n == 0) {
    throw UndefinedResultError("MAPD undefined: every sample below the division guard");
  }
  return 100.0 * sum / static_cast<double>(n);
}

ValidationReport validate_step(const FirstOrderModel& model,
                               const std::vector<std::pair<double, TimeSeries>>& step_records) {
  model.validate();
  if (step_records.empty()) {
    throw ConfigError("no step records to validate");
  }
  ValidationReport report;
  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& [amplitude, record] : step_records) {
    record.validate();
    if (record.duration() < 5.0 * model.tau * (1.0 - 1e-9)) {
      throw ConfigError("step record shorter than five time constants");
    }
    TimeSeries input = record;
    std::fill(input.values.begin(), input.values.end(), amplitude);
    const TimeSeries sim = simulate_open_loop(model, input, input.dt);
    MapdEntry entry;
    entry.amplitude = amplitude;
    try {
      entry.mapd_percent = mapd(record, sim);
      entry.defined = true;
      sum += entry.mapd_percent;
      ++defined;
      report.max_mapd = std::max(report.max_mapd, entry.mapd_percent);
    } catch (const UndefinedResultError&) {
      entry.defined = false;
    }
    report.entries.push_back(entry);
  }
  if (defined == 0) {
    throw UndefinedResultError("MAPD undefined for every record");
  }
  report.mean_mapd = sum / static_cast<double>(defined);
  return report;
}

double high_freq_slope(const std::vector<MagnitudePoint>& bode) {
  if (bode.size() < 2) {
    throw ConfigError("slope estimation needs at least two magnitude points");
  }
  const double cut = bode.back().omega / 3.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : bode) {
    if (p.omega < cut * (1.0 - 1e-12)) {
      continue;
    }
    const double x = std::log10(p.omega);
    sx += x;
    sy += p.mag_db;
    sxx += x * x;
    sxy += x * p.mag_db;
    ++n;
  }
  if (n < 2) {
    throw ConfigError("not enough high-frequency points for a slope estimate");
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    throw ConfigError("degenerate frequency spacing for slope estimate");
  }
  return (n * sxy - sx * sy) / denom;
}

IdentifiedModel identify_model(const std::vector<SweepRecord>& records, int settle_cycles) {
  if (records.empty()) {
    throw ConfigError("identification needs sweep records");
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!(records[i].omega > records[i - 1].omega)) {
      throw ConfigError("sweep records must be sorted by frequency");
    }
  }
  const auto bode = build_bode(records, settle_cycles);
  const double gain_raw = estimate_gain(bode);
  const double omega_l = bode.front().omega;

  // The lowest sweep frequency already sits on the roll-off, so the raw
  // low-frequency magnitude under-reads the steady-state gain. Correct with
  // the first-order factor at omega_l and iterate with the cutoff estimate;
  // on first-order data the fixed point is the true gain.
  double gain = gain_raw;
  CutoffEstimate cutoff = estimate_tau_cutoff(bode, gain);
  for (int i = 0; i < 8; ++i) {
    const double next =
        gain_raw * std::sqrt(1.0 + (cutoff.tau * omega_l) * (cutoff.tau * omega_l));
    const bool done = std::abs(next - gain) <= 1e-10 * std::max(1.0, next);
    gain = next;
    cutoff = estimate_tau_cutoff(bode, gain);
    if (done) {
      break;
    }
  }

  IdentifiedModel out;
  out.model.gain_k = gain;
  out.model.tau = refine_tau_ls(gain, cutoff.tau_range, records);
  out.tau_range = cutoff.tau_range;
  out.fit_sse = record_sse(out.model, records);
  out.slope_high_db_per_decade = high_freq_slope(bode);
  double dev = 0.0;
  for (const auto& rec : records) {
    dev += std::abs(peak_frequency(rec.output) - rec.omega);
  }
  out.lti_freq_deviation = dev / static_cast<double>(records.size());
  return out;
}

}  // namespace rotornav
