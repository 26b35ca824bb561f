#pragma once

// Complete description of one virtual run: medium, fields, cavity, noise,
// demodulation and estimation settings. This is the document the CLI reads
// from JSON and the synthesis pipeline consumes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringsim/cavity.hpp"
#include "ringsim/effects.hpp"
#include "ringsim/fields.hpp"
#include "ringsim/signal.hpp"

namespace ringsim {

struct EstimatorSettings {
  double settle_s = -1.0;  // negative: use five lock-in time constants
};

struct RunSettings {
  double duration_s = 60.0;
  double rate_hz = 10000.0;
};

struct CalibrationSettings {
  bool enabled = true;
  double dnu_rms_hz = 6.5e-3;
  double duration_s = 20.0;
};

struct ExperimentConfig {
  std::string medium = "N2";
  effects::Conditions conditions{};
  double meda_ratio = 1.0;  // fallback for media without a MEDA coefficient
  std::optional<effects::CoefficientTable> coefficients;  // table override

  fields::RodAssembly assembly{};
  cavity::CavityConfig cavity{};
  signal::NoiseModel noise{};
  signal::PdhConfig pdh{};
  signal::LockinConfig lockin{};
  EstimatorSettings estimator{};
  RunSettings run{};
  CalibrationSettings calibration{};

  const effects::CoefficientTable& coefficient_table() const {
    return coefficients ? *coefficients : effects::CoefficientTable::builtin();
  }
  double settle_s() const {
    return estimator.settle_s >= 0.0 ? estimator.settle_s : 5.0 * lockin.tau_s;
  }
};

// Hard constraint violations throw ConfigError naming the field; soft ones
// (drive frequency off-band, sluggish lock-in) are returned as warnings.
std::vector<std::string> validate(const ExperimentConfig& config);

// Cavity settings with the filled length taken from the rod assembly; runs
// always use the geometry the assembly implies.
cavity::CavityConfig effective_cavity(const ExperimentConfig& config);

// Noiseless resonance-shift rms while the gate is on; what a perfect
// estimator should recover.
double expected_delta_nu_rms(const ExperimentConfig& config);

}  // namespace ringsim
