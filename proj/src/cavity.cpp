#include "ringsim/cavity.hpp"

#include <stdexcept>

#include "ringsim/errors.hpp"

namespace ringsim::cavity {

void validate(const CavityConfig& c) {
  if (!(c.perimeter_m > 0.0)) {
    throw ConfigError("cavity.perimeter_m must be positive");
  }
  if (!(c.finesse > 1.0)) throw ConfigError("cavity.finesse must exceed 1");
  if (!(c.laser_frequency_hz > 0.0)) {
    throw ConfigError("cavity.laser_frequency_hz must be positive");
  }
  if (!(c.filled_length_m > 0.0 && c.filled_length_m <= c.perimeter_m)) {
    throw ConfigError(
        "cavity.filled_length_m must be positive and at most the perimeter");
  }
}

double free_spectral_range(const CavityConfig& c) {
  validate(c);
  return constants::speed_of_light / c.perimeter_m;
}

double linewidth(const CavityConfig& c) {
  return free_spectral_range(c) / c.finesse;
}

double fill_factor(const CavityConfig& c) {
  validate(c);
  return c.filled_length_m / c.perimeter_m;
}

double frequency_shift(double delta_n, const CavityConfig& c) {
  return c.laser_frequency_hz * fill_factor(c) * delta_n;
}

double counterprop_split(double meda_delta_n, const CavityConfig& c,
                         int orientation) {
  if (orientation != 1 && orientation != -1) {
    throw std::invalid_argument("counterprop_split: orientation must be +1 or -1");
  }
  return static_cast<double>(orientation) * frequency_shift(meda_delta_n, c);
}

}  // namespace ringsim::cavity
