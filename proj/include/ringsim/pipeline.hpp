#pragma once

// End-to-end wiring shared by the CLI and the tests: synthesize a run with
// its bracketing calibration runs, demodulate, and estimate.

#include <cstdint>
#include <optional>

#include "ringsim/estimator.hpp"
#include "ringsim/experiment.hpp"

namespace ringsim {

struct SimulationProducts {
  SignalTrace raw;
  SignalTrace demodulated;
  std::optional<estimator::CalibrationRun> calibration_before;
  std::optional<estimator::CalibrationRun> calibration_after;
};

// Fields-off run with the calibration tone injected; the settled demodulated
// level becomes the measured calibration response at the given timestamp.
estimator::CalibrationRun run_calibration(const ExperimentConfig& config,
                                          std::uint64_t seed, double time_s);

// Main run plus, when enabled, calibration runs stamped before (t = 0) and
// after (t = run duration). Seeds for the calibration runs derive from the
// main seed, so one seed reproduces the whole product set.
SimulationProducts run_simulation(const ExperimentConfig& config,
                                  std::uint64_t seed);

// Segment, difference, calibrate at mid-run, convert to hertz.
estimator::MeasurementEstimate estimate_run(
    const SignalTrace& demodulated, const estimator::CalibrationRun& before,
    const estimator::CalibrationRun& after, double gate_period_s,
    double settle_s, estimator::CalibrationInfo* info_out = nullptr);

}  // namespace ringsim
