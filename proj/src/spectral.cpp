#include "ringsim/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ringsim::spectral {

namespace {

// FFTW plan creation and destruction are not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::size_t default_segment_length(std::size_t n) {
  // Largest power of two that still yields at least 8 half-overlapping
  // segments: count = (n - nseg) / (nseg / 2) + 1.
  std::size_t nseg = 16;
  while (nseg * 2 <= 2 * n / 9) nseg *= 2;
  return nseg;
}

}  // namespace

Psd welch_psd(std::span<const double> samples, double rate_hz,
              std::size_t segment_length) {
  if (!(rate_hz > 0.0)) {
    throw std::invalid_argument("welch_psd: rate must be positive");
  }
  const std::size_t n = samples.size();
  if (segment_length == 0) {
    if (n < 9 * 16 / 2) {
      throw std::invalid_argument(
          "welch_psd: trace too short for 8 averaging segments");
    }
    segment_length = default_segment_length(n);
  }
  if (segment_length < 4 || segment_length > n) {
    throw std::invalid_argument("welch_psd: bad segment length");
  }

  const std::size_t hop = segment_length / 2;
  const std::size_t count = (n - segment_length) / hop + 1;

  std::vector<double> window(segment_length);
  double window_power = 0.0;
  for (std::size_t i = 0; i < segment_length; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(6.283185307179586 *
                                     static_cast<double>(i) /
                                     static_cast<double>(segment_length));
    window_power += window[i] * window[i];
  }

  const std::size_t bins = segment_length / 2 + 1;
  double* in = fftw_alloc_real(segment_length);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(segment_length), in, out,
                                FFTW_ESTIMATE);
  }

  std::vector<double> acc(bins, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const double* seg = samples.data() + s * hop;
    double mean = 0.0;
    for (std::size_t i = 0; i < segment_length; ++i) mean += seg[i];
    mean /= static_cast<double>(segment_length);
    for (std::size_t i = 0; i < segment_length; ++i) {
      in[i] = (seg[i] - mean) * window[i];
    }
    fftw_execute(plan);
    for (std::size_t k = 0; k < bins; ++k) {
      acc[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
  }

  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  Psd psd;
  psd.bin_width_hz = rate_hz / static_cast<double>(segment_length);
  psd.segment_count = count;
  psd.frequency_hz.resize(bins);
  psd.density.resize(bins);
  const double norm =
      1.0 / (rate_hz * window_power * static_cast<double>(count));
  const bool even = segment_length % 2 == 0;
  for (std::size_t k = 0; k < bins; ++k) {
    psd.frequency_hz[k] = static_cast<double>(k) * psd.bin_width_hz;
    // One-sided: double every bin except DC and (for even lengths) Nyquist.
    const bool edge = k == 0 || (even && k == bins - 1);
    psd.density[k] = (edge ? 1.0 : 2.0) * acc[k] * norm;
  }
  return psd;
}

double band_mean(const Psd& psd, double f_lo_hz, double f_hi_hz) {
  if (psd.density.size() < 2) {
    throw std::invalid_argument("band_mean: spectrum has no usable bins");
  }
  double lo = f_lo_hz;
  double hi = f_hi_hz;
  if (!(hi > lo)) {
    lo = psd.bin_width_hz;
    hi = 0.8 * psd.frequency_hz.back();
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 1; k < psd.density.size(); ++k) {
    if (psd.frequency_hz[k] >= lo && psd.frequency_hz[k] <= hi) {
      sum += psd.density[k];
      ++used;
    }
  }
  if (used == 0) {
    throw std::invalid_argument("band_mean: no bins inside the requested band");
  }
  return sum / static_cast<double>(used);
}

}  // namespace ringsim::spectral
