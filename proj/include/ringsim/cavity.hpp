#pragma once

// Ring-cavity arithmetic. An index change delta_n over the field-filled
// length L_f pulls the resonance by delta_nu = nu * (L_f / L) * delta_n.

#include "ringsim/constants.hpp"

namespace ringsim::cavity {

struct CavityConfig {
  double perimeter_m = 1.6;
  double finesse = 30000.0;
  double laser_frequency_hz = constants::nd_yag_frequency;
  double filled_length_m = 0.8;
};

void validate(const CavityConfig& config);

double free_spectral_range(const CavityConfig& config);
double linewidth(const CavityConfig& config);
double fill_factor(const CavityConfig& config);

double frequency_shift(double delta_n, const CavityConfig& config);

// Resonance split between the two propagation directions for a directional
// anisotropy delta_n_meda = n_plus - n_minus. orientation = -1 swaps which
// direction is "plus" (fields reversed).
double counterprop_split(double meda_delta_n, const CavityConfig& config,
                         int orientation = 1);

}  // namespace ringsim::cavity
