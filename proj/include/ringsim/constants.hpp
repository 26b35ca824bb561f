#pragma once

namespace ringsim::constants {

inline constexpr double speed_of_light = 299792458.0;  // m/s

inline constexpr double bar = 1.0e5;  // Pa

// Reference conditions of the built-in coefficient table.
inline constexpr double reference_temperature = 293.0;    // K
inline constexpr double reference_wavelength = 632.8e-9;  // m

// Nd:YAG line near 1064 nm.
inline constexpr double nd_yag_frequency = 2.8178e14;  // Hz

}  // namespace ringsim::constants
