#include "ringsim/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringsim/errors.hpp"
#include "ringsim/spectral.hpp"

namespace ringsim::estimator {

namespace {

// Mean over samples with time in [t_lo, t_hi).
double window_mean(const SignalTrace& trace, double t_lo, double t_hi) {
  const double rate = trace.rate_hz;
  const auto first = static_cast<long long>(
      std::ceil((t_lo - trace.t0_s) * rate - 1e-9));
  const auto last = static_cast<long long>(
      std::ceil((t_hi - trace.t0_s) * rate - 1e-9));
  if (last <= first) {
    throw std::invalid_argument(
        "segment_periods: an averaging window holds no samples; raise the "
        "sampling rate or lower the settle time");
  }
  double sum = 0.0;
  for (long long i = first; i < last; ++i) {
    sum += trace.samples[static_cast<std::size_t>(i)];
  }
  return sum / static_cast<double>(last - first);
}

MeasurementEstimate from_differences(const std::vector<double>& deltas,
                                     TraceUnit unit) {
  MeasurementEstimate est;
  est.unit = unit;
  est.n_periods = deltas.size();
  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= static_cast<double>(deltas.size());
  est.value = mean;
  if (deltas.size() < 2) {
    est.sigma = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  double ss = 0.0;
  for (double d : deltas) ss += (d - mean) * (d - mean);
  const auto n = static_cast<double>(deltas.size());
  est.sigma = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return est;
}

}  // namespace

std::vector<OnOffPair> segment_periods(const SignalTrace& trace,
                                       double gate_period_s, double settle_s) {
  if (!(gate_period_s > 0.0)) {
    throw std::invalid_argument("segment_periods: gate period must be positive");
  }
  if (!(settle_s >= 0.0 && settle_s < 0.5 * gate_period_s)) {
    throw std::invalid_argument(
        "segment_periods: settle time must stay below half the gate period");
  }
  const auto n_periods = static_cast<std::size_t>(
      std::floor(trace.duration_s() / gate_period_s + 1e-9));
  if (n_periods == 0) {
    throw std::invalid_argument(
        "segment_periods: trace is shorter than one gate period");
  }

  const double half = 0.5 * gate_period_s;
  std::vector<OnOffPair> pairs;
  pairs.reserve(n_periods);
  for (std::size_t p = 0; p < n_periods; ++p) {
    const double start = trace.t0_s + static_cast<double>(p) * gate_period_s;
    const double first_mean =
        window_mean(trace, start + settle_s, start + half);
    const double second_mean =
        window_mean(trace, start + half + settle_s, start + gate_period_s);
    if (trace.gate_on_first) {
      pairs.push_back({first_mean, second_mean});
    } else {
      pairs.push_back({second_mean, first_mean});
    }
  }
  return pairs;
}

MeasurementEstimate on_off_estimate(std::span<const OnOffPair> pairs,
                                    TraceUnit unit) {
  if (pairs.empty()) {
    throw std::invalid_argument("on_off_estimate: no gate periods supplied");
  }
  std::vector<double> deltas;
  deltas.reserve(pairs.size());
  for (const auto& p : pairs) deltas.push_back(p.on_mean - p.off_mean);
  return from_differences(deltas, unit);
}

MeasurementEstimate on_off_estimate_two_sided(std::span<const OnOffPair> pairs,
                                              TraceUnit unit) {
  if (pairs.size() < 2) {
    throw std::invalid_argument(
        "on_off_estimate_two_sided: needs at least two gate periods");
  }
  std::vector<double> deltas;
  deltas.reserve(pairs.size() - 1);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    deltas.push_back(pairs[i].on_mean -
                     0.5 * (pairs[i - 1].off_mean + pairs[i].off_mean));
  }
  return from_differences(deltas, unit);
}

double calibration_factor(const CalibrationRun& before,
                          const CalibrationRun& after, double t_s) {
  if (!(before.dnu_rms_hz > 0.0) || !(after.dnu_rms_hz > 0.0)) {
    throw std::invalid_argument(
        "calibration_factor: injected tone must be positive");
  }
  if (!(before.measured_level_v > 0.0) || !(after.measured_level_v > 0.0)) {
    throw std::invalid_argument(
        "calibration_factor: measured level must be positive");
  }
  if (t_s < before.time_s || t_s > after.time_s) {
    throw BracketError(
        "calibration runs do not bracket the requested time; need "
        "before.time_s <= t <= after.time_s");
  }
  const double f0 = before.measured_level_v / before.dnu_rms_hz;
  const double f1 = after.measured_level_v / after.dnu_rms_hz;
  const double span = after.time_s - before.time_s;
  if (span <= 0.0) return f0;
  return f0 + (f1 - f0) * (t_s - before.time_s) / span;
}

CalibrationInfo calibration_info(const CalibrationRun& before,
                                 const CalibrationRun& after, double t_s) {
  CalibrationInfo info;
  info.before_v_per_hz = before.measured_level_v / before.dnu_rms_hz;
  info.after_v_per_hz = after.measured_level_v / after.dnu_rms_hz;
  info.interpolated_v_per_hz = calibration_factor(before, after, t_s);
  info.time_s = t_s;
  return info;
}

MeasurementEstimate to_frequency(const MeasurementEstimate& volts,
                                 double factor_v_per_hz) {
  if (!(factor_v_per_hz > 0.0)) {
    throw std::invalid_argument("to_frequency: factor must be positive");
  }
  MeasurementEstimate hz = volts;
  hz.value = volts.value / factor_v_per_hz;
  hz.sigma = volts.sigma / factor_v_per_hz;  // NaN stays NaN
  hz.unit = TraceUnit::hertz;
  return hz;
}

double sensitivity_psd(const SignalTrace& trace, double laser_frequency_hz,
                       double factor_v_per_hz, double band_lo_hz,
                       double band_hi_hz) {
  if (!(laser_frequency_hz > 0.0)) {
    throw std::invalid_argument("sensitivity_psd: laser frequency must be positive");
  }
  if (!(factor_v_per_hz > 0.0)) {
    throw std::invalid_argument("sensitivity_psd: factor must be positive");
  }

  std::vector<double> hz(trace.samples.size());
  for (std::size_t i = 0; i < hz.size(); ++i) {
    hz[i] = trace.samples[i] / factor_v_per_hz;
  }
  const auto psd = spectral::welch_psd(hz, trace.rate_hz);

  const double f_mod = trace.mod_frequency_hz;
  double lo = band_lo_hz;
  double hi = band_hi_hz;
  if (!(hi > lo) && f_mod > 0.0) {
    lo = 0.5 * f_mod;
    hi = std::min(1.5 * f_mod, 0.9 * psd.frequency_hz.back());
  }

  double density;
  if (hi > lo && f_mod > lo && f_mod < hi) {
    // Notch out the drive bin so a live signal does not count as noise.
    const double guard = 4.0 * psd.bin_width_hz;
    const double below = band_mean(psd, lo, f_mod - guard);
    const double above = band_mean(psd, f_mod + guard, hi);
    density = 0.5 * (below + above);
  } else {
    density = band_mean(psd, lo, hi);
  }
  return std::sqrt(density) / laser_frequency_hz;
}

}  // namespace ringsim::estimator
