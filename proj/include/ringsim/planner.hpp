#pragma once

// Sensitivity planning: expected signal for a field/medium combination and
// the averaging time needed to reach a target signal-to-noise ratio.

#include <optional>
#include <string>
#include <vector>

#include "ringsim/effects.hpp"

namespace ringsim::planner {

struct ExperimentPlan {
  std::string medium = "N2";
  effects::Conditions conditions{};
  std::optional<double> meda_ratio = 1.0;  // used when the medium has no
                                           // directional coefficient of its own
  double b_eff_t = 0.74;
  double e_rms_v_per_m = 3.5e5;
  double l_fields_m = 0.8;
  double perimeter_m = 1.6;
  double laser_frequency_hz = 2.8178e14;
  double sensitivity_per_sqrt_hz = 1e-16;  // relative frequency ASD
  double target_snr = 1.0;
};

void validate(const ExperimentPlan& plan);

double fill_factor(const ExperimentPlan& plan);

// |n_plus - n_minus| at the plan's fields and conditions.
double expected_delta_n(const ExperimentPlan& plan,
                        const effects::CoefficientTable& table =
                            effects::CoefficientTable::builtin());

// Resonance split magnitude in Hz.
double expected_signal(const ExperimentPlan& plan,
                       const effects::CoefficientTable& table =
                           effects::CoefficientTable::builtin());

// Averaging time for SNR = target_snr given the white-noise sensitivity:
// T = (snr * sensitivity / (delta_nu/nu))^2. Quadruples when the signal halves.
double time_to_snr(const ExperimentPlan& plan,
                   const effects::CoefficientTable& table =
                       effects::CoefficientTable::builtin());

// Smallest index anisotropy resolvable at unit SNR in one second of
// averaging, in units of the plan's expected delta_n.
double dn_unit_sensitivity(const ExperimentPlan& plan,
                           const effects::CoefficientTable& table =
                               effects::CoefficientTable::builtin());

struct SweepPoint {
  double b_t = 0.0;
  double e_v_per_m = 0.0;
  double delta_n = 0.0;
  double delta_nu_hz = 0.0;
  double t_snr1_s = 0.0;
};

std::vector<SweepPoint> sweep(const ExperimentPlan& plan,
                              const std::vector<double>& b_values,
                              const std::vector<double>& e_values,
                              const effects::CoefficientTable& table =
                                  effects::CoefficientTable::builtin());

}  // namespace ringsim::planner
