#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ringsim {

enum class TraceUnit { volts, hertz, dimensionless };

std::string to_string(TraceUnit unit);
TraceUnit trace_unit_from_string(const std::string& text);

// Uniformly sampled time series plus the metadata downstream processing
// needs. The gating phase travels with the trace instead of being
// edge-detected from the samples.
struct SignalTrace {
  std::vector<double> samples;
  double rate_hz = 0.0;
  double t0_s = 0.0;
  TraceUnit unit = TraceUnit::dimensionless;
  std::uint64_t seed = 0;
  std::string config_digest;

  double gate_period_s = 0.0;     // 0 when ungated
  bool gate_on_first = true;
  double mod_frequency_hz = 0.0;  // 0 when no drive tone
  double lockin_tau_s = 0.0;      // set on demodulated traces

  double time_at(std::size_t i) const {
    return t0_s + static_cast<double>(i) / rate_hz;
  }
  double duration_s() const {
    return static_cast<double>(samples.size()) / rate_hz;
  }
};

}  // namespace ringsim
