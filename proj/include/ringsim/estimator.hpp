#pragma once

// On/off gated estimation: per-period means, differencing, calibration to
// frequency units, and the spectral sensitivity figure.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ringsim/trace.hpp"

namespace ringsim::estimator {

struct OnOffPair {
  double on_mean = 0.0;
  double off_mean = 0.0;
};

// Slices the demodulated trace into whole gate periods and averages the on
// and off halves, skipping settle_s after each gate edge. Throws when the
// trace is shorter than one period, the settle time eats a whole half, or a
// window contains no samples.
std::vector<OnOffPair> segment_periods(const SignalTrace& demodulated,
                                       double gate_period_s, double settle_s);

struct MeasurementEstimate {
  double value = 0.0;
  double sigma = 0.0;  // standard error of the mean; NaN when n_periods == 1
  std::size_t n_periods = 0;
  TraceUnit unit = TraceUnit::volts;
};

// Mean and standard error of the per-period differences on_i - off_i.
MeasurementEstimate on_off_estimate(std::span<const OnOffPair> pairs,
                                    TraceUnit unit = TraceUnit::volts);

// Drift-insensitive variant, not part of the plain per-period differencing
// scheme: compares each on half with the average of the off halves on both
// sides, on_i - (off_{i-1} + off_i)/2, so a linear drift cancels instead of
// biasing the mean by rate * period / 2. Produces one fewer difference.
MeasurementEstimate on_off_estimate_two_sided(std::span<const OnOffPair> pairs,
                                              TraceUnit unit = TraceUnit::volts);

struct CalibrationRun {
  double dnu_rms_hz = 0.0;      // injected tone
  double measured_level_v = 0.0;  // settled demodulated response
  double time_s = 0.0;
};

// Volts-per-hertz factor linearly interpolated between the bracketing runs.
// Throws BracketError when t_s lies outside [before.time_s, after.time_s].
double calibration_factor(const CalibrationRun& before,
                          const CalibrationRun& after, double t_s);

struct CalibrationInfo {
  double before_v_per_hz = 0.0;
  double after_v_per_hz = 0.0;
  double interpolated_v_per_hz = 0.0;
  double time_s = 0.0;
};

CalibrationInfo calibration_info(const CalibrationRun& before,
                                 const CalibrationRun& after, double t_s);

MeasurementEstimate to_frequency(const MeasurementEstimate& volts,
                                 double factor_v_per_hz);

// ASD of the trace in relative frequency units, 1/sqrt(Hz): Welch PSD of the
// frequency-converted samples, averaged over a band around the drive tone
// (+/-50% of mod_frequency_hz, with a narrow notch at the tone itself so a
// present signal does not inflate the figure), square root, divided by nu.
// Traces without a drive tone average over the default Welch band. Pass
// factor 1.0 for traces already in hertz.
double sensitivity_psd(const SignalTrace& trace, double laser_frequency_hz,
                       double factor_v_per_hz, double band_lo_hz = 0.0,
                       double band_hi_hz = 0.0);

}  // namespace ringsim::estimator
