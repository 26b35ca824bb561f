#include "ringsim/experiment.hpp"

#include <cmath>
#include <sstream>

#include "ringsim/errors.hpp"

namespace ringsim {

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> warnings = fields::validate(config.assembly);

  config.coefficient_table().lookup(config.medium);
  if (!(config.conditions.pressure_pa >= 0.0)) {
    throw ConfigError("conditions.pressure_pa must be non-negative");
  }
  if (!(config.conditions.temperature_k > 0.0)) {
    throw ConfigError("conditions.temperature_k must be positive");
  }

  cavity::validate(effective_cavity(config));

  if (!(config.noise.shot_floor > 0.0)) {
    throw ConfigError("noise.shot_floor must be positive");
  }
  if (!(config.noise.excess_factor >= 1.0 && config.noise.excess_factor < 10.0)) {
    throw ConfigError("noise.excess_factor must lie in [1, 10)");
  }

  if (!(config.pdh.slope_v_per_hz > 0.0)) {
    throw ConfigError("pdh.slope_v_per_hz must be positive");
  }
  if (!(config.pdh.power_scale > 0.0)) {
    throw ConfigError("pdh.power_scale must be positive");
  }

  if (!(config.lockin.tau_s > 0.0)) {
    throw ConfigError("lockin.tau_s must be positive");
  }
  if (config.lockin.poles < 1 || config.lockin.poles > 4) {
    throw ConfigError("lockin.poles must lie between 1 and 4");
  }

  if (!(config.run.duration_s > 0.0)) {
    throw ConfigError("run.duration_s must be positive");
  }
  if (!(config.run.rate_hz > 2.0 * config.assembly.drive_frequency_hz)) {
    throw ConfigError(
        "run.rate_hz must exceed twice assembly.drive_frequency_hz");
  }

  if (!(config.settle_s() >= 0.0)) {
    throw ConfigError("estimator.settle_s must be non-negative");
  }
  const double half_gate = 0.5 * config.assembly.gate_period_s;
  if (!(config.settle_s() < half_gate)) {
    throw ConfigError(
        "estimator.settle_s must stay below half the gate period");
  }

  if (config.calibration.enabled) {
    if (!(config.calibration.dnu_rms_hz > 0.0)) {
      throw ConfigError("calibration.dnu_rms_hz must be positive");
    }
    if (!(config.calibration.duration_s > config.settle_s())) {
      throw ConfigError(
          "calibration.duration_s must exceed the settle time");
    }
  }

  if (config.settle_s() < 5.0 * config.lockin.tau_s) {
    std::ostringstream w;
    w << "settle time " << config.settle_s() << " s is below five lock-in "
      << "time constants; per-period means will carry filter memory";
    warnings.push_back(w.str());
  }
  return warnings;
}

cavity::CavityConfig effective_cavity(const ExperimentConfig& config) {
  cavity::CavityConfig cav = config.cavity;
  double filled = 0.0;
  for (const auto& rod : config.assembly.rods) filled += rod.length_m;
  cav.filled_length_m = filled;
  return cav;
}

double expected_delta_nu_rms(const ExperimentConfig& config) {
  const auto assembly = fields::assembly_fields(config.assembly);
  const auto record = config.coefficient_table().lookup(config.medium);
  const double dn = effects::delta_n_meda(record, assembly.b_eff_total_t,
                                          assembly.e_rms_v_per_m,
                                          config.conditions, config.meda_ratio);
  return std::abs(cavity::counterprop_split(dn, effective_cavity(config)));
}

}  // namespace ringsim
