#include "ringsim/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringsim/cavity.hpp"
#include "ringsim/errors.hpp"

namespace ringsim::planner {

void validate(const ExperimentPlan& plan) {
  if (!(plan.l_fields_m > 0.0 && plan.perimeter_m > 0.0 &&
        plan.l_fields_m <= plan.perimeter_m)) {
    throw ConfigError(
        "plan: l_fields_m must be positive and at most perimeter_m");
  }
  if (!(plan.laser_frequency_hz > 0.0)) {
    throw ConfigError("plan.laser_frequency_hz must be positive");
  }
  if (!(plan.sensitivity_per_sqrt_hz > 0.0)) {
    throw ConfigError("plan.sensitivity_per_sqrt_hz must be positive");
  }
  if (!(plan.target_snr > 0.0)) {
    throw ConfigError("plan.target_snr must be positive");
  }
}

double fill_factor(const ExperimentPlan& plan) {
  validate(plan);
  return plan.l_fields_m / plan.perimeter_m;
}

double expected_delta_n(const ExperimentPlan& plan,
                        const effects::CoefficientTable& table) {
  validate(plan);
  return std::abs(effects::delta_n_meda(plan.medium, plan.b_eff_t,
                                        plan.e_rms_v_per_m, plan.conditions,
                                        plan.meda_ratio, table));
}

double expected_signal(const ExperimentPlan& plan,
                       const effects::CoefficientTable& table) {
  return plan.laser_frequency_hz * fill_factor(plan) *
         expected_delta_n(plan, table);
}

double time_to_snr(const ExperimentPlan& plan,
                   const effects::CoefficientTable& table) {
  const double relative = fill_factor(plan) * expected_delta_n(plan, table);
  if (!(relative > 0.0)) {
    throw std::invalid_argument(
        "time_to_snr: the expected signal is zero at these fields");
  }
  const double ratio = plan.target_snr * plan.sensitivity_per_sqrt_hz / relative;
  return ratio * ratio;
}

double dn_unit_sensitivity(const ExperimentPlan& plan,
                           const effects::CoefficientTable& table) {
  const double dn = expected_delta_n(plan, table);
  if (!(dn > 0.0)) {
    throw std::invalid_argument(
        "dn_unit_sensitivity: the expected signal is zero at these fields");
  }
  return (plan.sensitivity_per_sqrt_hz / fill_factor(plan)) / dn;
}

std::vector<SweepPoint> sweep(const ExperimentPlan& plan,
                              const std::vector<double>& b_values,
                              const std::vector<double>& e_values,
                              const effects::CoefficientTable& table) {
  validate(plan);
  std::vector<SweepPoint> points;
  points.reserve(b_values.size() * e_values.size());
  for (double b : b_values) {
    for (double e : e_values) {
      ExperimentPlan p = plan;
      p.b_eff_t = b;
      p.e_rms_v_per_m = e;
      p.target_snr = 1.0;
      SweepPoint point;
      point.b_t = b;
      point.e_v_per_m = e;
      point.delta_n = expected_delta_n(p, table);
      point.delta_nu_hz = expected_signal(p, table);
      point.t_snr1_s = point.delta_n > 0.0
                           ? time_to_snr(p, table)
                           : std::numeric_limits<double>::infinity();
      points.push_back(point);
    }
  }
  return points;
}

}  // namespace ringsim::planner
