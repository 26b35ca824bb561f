#pragma once

// Error-signal synthesis and software lock-in demodulation.
//
// The loop is assumed locked and linear: the error-signal voltage is
// V(t) = D * P * [delta_nu_signal(t) + nu * x_noise(t)], with D the
// discriminant slope at unit intracavity power and x_noise the relative
// frequency noise (white floor times an excess factor, plus linear drift).

#include <cstdint>
#include <optional>

#include "ringsim/trace.hpp"

namespace ringsim {
struct ExperimentConfig;
}

namespace ringsim::signal {

struct NoiseModel {
  bool enabled = true;
  double shot_floor = 1e-17;   // relative frequency ASD, 1/sqrt(Hz)
  double excess_factor = 5.0;  // noise above the floor, in [1, 10)
  double drift_rate = 0.0;     // relative frequency per second
  std::uint64_t seed = 1;
};

struct PdhConfig {
  double slope_v_per_hz = 100.0;    // discriminant at unit intracavity power
  double power_scale = 1.0;
  double mod_frequency_hz = 1.0e7;  // phase-modulation sideband frequency

  double effective_slope() const { return slope_v_per_hz * power_scale; }
};

struct LockinConfig {
  double tau_s = 1.0;
  double phase_rad = 0.0;
  int poles = 1;  // cascaded single-pole sections, 1 to 4
};

// Deterministic per-run seed stream for ensembles.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index);

// White Gaussian relative-frequency noise plus drift, one-sided ASD
// shot_floor * excess_factor. The Gaussian stream is generated by an
// explicit Box-Muller transform over mt19937_64 so traces reproduce
// bit for bit across standard libraries.
SignalTrace synthesize_noise(const NoiseModel& model, double duration_s,
                             double rate_hz);

// Full error-signal voltage trace for one run: gated drive tone mapped
// through the medium, the cavity, and the discriminant slope, plus noise.
SignalTrace synthesize_run(const ExperimentConfig& config, std::uint64_t seed);

// Adds the always-on calibration tone D * sqrt(2) * dnu_rms * sin(2 pi f t)
// to a voltage trace.
SignalTrace inject_calibration(const SignalTrace& trace, double dnu_rms_hz,
                               double mod_frequency_hz, double slope_v_per_hz);

// Homodyne lock-in: multiply by sqrt(2) * sin(2 pi f t + phase), then a
// cascade of single-pole lowpass sections. A phase-matched tone of rms
// amplitude a settles to a. Warns on stderr when the 2f ripple leaking
// through the filter exceeds 1% of the carrier response.
SignalTrace lockin_demodulate(const SignalTrace& input, double mod_frequency_hz,
                              double tau_s, double phase_rad = 0.0,
                              int poles = 1);

// Ripple amplitude relative to the carrier for a tone at 2f through the
// cascade; the warning threshold above.
double lockin_ripple_fraction(double mod_frequency_hz, double tau_s, int poles);

}  // namespace ringsim::signal
