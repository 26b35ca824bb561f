#include "ringsim/pipeline.hpp"

#include <cmath>

#include "ringsim/errors.hpp"
#include "ringsim/signal.hpp"

namespace ringsim {

namespace {

double settled_mean(const SignalTrace& trace, double settle_s) {
  const auto first = static_cast<std::size_t>(
      std::ceil(settle_s * trace.rate_hz - 1e-9));
  if (first >= trace.samples.size()) {
    throw ConfigError(
        "calibration.duration_s leaves no samples after the settle time");
  }
  double sum = 0.0;
  for (std::size_t i = first; i < trace.samples.size(); ++i) {
    sum += trace.samples[i];
  }
  return sum / static_cast<double>(trace.samples.size() - first);
}

}  // namespace

estimator::CalibrationRun run_calibration(const ExperimentConfig& config,
                                          std::uint64_t seed, double time_s) {
  // Same instrument, fields off, known tone in: the settled lock-in output
  // per injected hertz is the live volts-per-hertz factor.
  ExperimentConfig quiet = config;
  quiet.assembly.drive_voltage_peak_v = 0.0;
  quiet.run.duration_s = config.calibration.duration_s;

  SignalTrace raw = signal::synthesize_run(quiet, seed);
  raw = signal::inject_calibration(raw, config.calibration.dnu_rms_hz,
                                   config.assembly.drive_frequency_hz,
                                   config.pdh.effective_slope());
  const SignalTrace demod = signal::lockin_demodulate(
      raw, config.assembly.drive_frequency_hz, config.lockin.tau_s,
      config.lockin.phase_rad, config.lockin.poles);

  estimator::CalibrationRun run;
  run.dnu_rms_hz = config.calibration.dnu_rms_hz;
  run.measured_level_v = settled_mean(demod, config.settle_s());
  run.time_s = time_s;
  return run;
}

SimulationProducts run_simulation(const ExperimentConfig& config,
                                  std::uint64_t seed) {
  SimulationProducts products;
  products.raw = signal::synthesize_run(config, seed);
  products.demodulated = signal::lockin_demodulate(
      products.raw, config.assembly.drive_frequency_hz, config.lockin.tau_s,
      config.lockin.phase_rad, config.lockin.poles);
  if (config.calibration.enabled) {
    products.calibration_before =
        run_calibration(config, signal::derive_seed(seed, 1), 0.0);
    products.calibration_after = run_calibration(
        config, signal::derive_seed(seed, 2), config.run.duration_s);
  }
  return products;
}

estimator::MeasurementEstimate estimate_run(
    const SignalTrace& demodulated, const estimator::CalibrationRun& before,
    const estimator::CalibrationRun& after, double gate_period_s,
    double settle_s, estimator::CalibrationInfo* info_out) {
  const auto pairs =
      estimator::segment_periods(demodulated, gate_period_s, settle_s);
  const auto volts = estimator::on_off_estimate(pairs, demodulated.unit);

  const double t_mid = demodulated.t0_s + 0.5 * demodulated.duration_s();
  const auto info = estimator::calibration_info(before, after, t_mid);
  if (info_out) *info_out = info;
  return estimator::to_frequency(volts, info.interpolated_v_per_hz);
}

}  // namespace ringsim
