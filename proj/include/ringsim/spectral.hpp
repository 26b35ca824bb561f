#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ringsim::spectral {

// One-sided power spectral density, units input^2 / Hz.
struct Psd {
  std::vector<double> frequency_hz;
  std::vector<double> density;
  double bin_width_hz = 0.0;
  std::size_t segment_count = 0;
};

// Welch estimate: Hann window, 50% overlap, per-segment mean removal,
// normalized so a white input of variance v gives a flat density 2*v/rate.
// segment_length = 0 picks a power of two giving at least 8 segments; the
// call throws if the trace is too short for that.
Psd welch_psd(std::span<const double> samples, double rate_hz,
              std::size_t segment_length = 0);

// Mean density over bins with f_lo <= f <= f_hi, DC excluded. A non-positive
// band (f_hi <= f_lo) means the usable default band, bin 1 to 80% of Nyquist.
double band_mean(const Psd& psd, double f_lo_hz = 0.0, double f_hi_hz = 0.0);

}  // namespace ringsim::spectral
