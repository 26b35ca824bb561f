#include "ringsim/signal.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "ringsim/config_json.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/experiment.hpp"

namespace ringsim::signal {

namespace {

constexpr double two_pi = 6.283185307179586;

// Explicit Box-Muller over mt19937_64. std::normal_distribution is free to
// vary between standard libraries; this stream is pinned.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void check_noise_model(const NoiseModel& m) {
  if (!(m.shot_floor > 0.0)) {
    throw ConfigError("noise.shot_floor must be positive");
  }
  if (!(m.excess_factor >= 1.0 && m.excess_factor < 10.0)) {
    throw ConfigError("noise.excess_factor must lie in [1, 10)");
  }
}

std::size_t sample_count(double duration_s, double rate_hz) {
  if (!(rate_hz > 0.0)) throw ConfigError("run.rate_hz must be positive");
  const auto n = static_cast<long long>(std::llround(duration_s * rate_hz));
  if (n < 1) {
    throw ConfigError("run.duration_s too short: the trace would be empty");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  return splitmix64(master_seed ^ splitmix64(run_index + 0x51ab61c3u));
}

SignalTrace synthesize_noise(const NoiseModel& model, double duration_s,
                             double rate_hz) {
  check_noise_model(model);
  const std::size_t n = sample_count(duration_s, rate_hz);

  SignalTrace trace;
  trace.samples.resize(n);
  trace.rate_hz = rate_hz;
  trace.unit = TraceUnit::dimensionless;
  trace.seed = model.seed;

  // One-sided ASD a = excess * floor means per-sample variance a^2 * rate/2.
  const double sigma =
      model.enabled
          ? model.excess_factor * model.shot_floor * std::sqrt(rate_hz / 2.0)
          : 0.0;
  GaussianSampler gauss(model.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate_hz;
    trace.samples[i] = sigma * gauss() + model.drift_rate * t;
  }
  return trace;
}

SignalTrace synthesize_run(const ExperimentConfig& config, std::uint64_t seed) {
  validate(config);

  const auto assembly = fields::assembly_fields(config.assembly);
  const auto cav = effective_cavity(config);

  // Bilinearity lets the per-sample signal collapse to one coefficient:
  // hertz of resonance split per volt/metre of instantaneous drive field.
  const auto record = config.coefficient_table().lookup(config.medium);
  const double dn_per_e = effects::delta_n_meda(
      record, assembly.b_eff_total_t, 1.0, config.conditions, config.meda_ratio);
  const double hz_per_e = cavity::counterprop_split(dn_per_e, cav);

  const double slope = config.pdh.effective_slope();
  const double nu = cav.laser_frequency_hz;
  const double rate = config.run.rate_hz;
  const std::size_t n = sample_count(config.run.duration_s, rate);

  NoiseModel noise = config.noise;
  noise.seed = seed;
  SignalTrace trace = synthesize_noise(noise, config.run.duration_s, rate);
  trace.unit = TraceUnit::volts;
  trace.gate_period_s = config.assembly.gate_period_s;
  trace.gate_on_first = config.assembly.gate_on_first;
  trace.mod_frequency_hz = config.assembly.drive_frequency_hz;
  trace.config_digest = config_digest(config);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double dnu = hz_per_e * fields::drive_waveform(t, config.assembly);
    trace.samples[i] = slope * (dnu + nu * trace.samples[i]);
  }
  return trace;
}

SignalTrace inject_calibration(const SignalTrace& trace, double dnu_rms_hz,
                               double mod_frequency_hz, double slope_v_per_hz) {
  if (trace.unit != TraceUnit::volts) {
    throw ConfigError("calibration injection needs a voltage trace");
  }
  if (!(dnu_rms_hz >= 0.0)) {
    throw ConfigError("calibration.dnu_rms_hz must be non-negative");
  }
  SignalTrace out = trace;
  const double amplitude = slope_v_per_hz * std::sqrt(2.0) * dnu_rms_hz;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] +=
        amplitude * std::sin(two_pi * mod_frequency_hz * out.time_at(i));
  }
  if (out.mod_frequency_hz == 0.0) out.mod_frequency_hz = mod_frequency_hz;
  return out;
}

double lockin_ripple_fraction(double mod_frequency_hz, double tau_s, int poles) {
  const double x = two_pi * 2.0 * mod_frequency_hz * tau_s;
  return std::pow(1.0 + x * x, -0.5 * poles);
}

SignalTrace lockin_demodulate(const SignalTrace& input, double mod_frequency_hz,
                              double tau_s, double phase_rad, int poles) {
  if (!(mod_frequency_hz > 0.0)) {
    throw ConfigError("lockin: mod frequency must be positive");
  }
  if (!(tau_s > 0.0)) throw ConfigError("lockin.tau_s must be positive");
  if (poles < 1 || poles > 4) {
    throw ConfigError("lockin.poles must lie between 1 and 4");
  }
  if (!(input.rate_hz > 2.0 * mod_frequency_hz)) {
    throw ConfigError(
        "lockin: sampling rate must exceed twice the demodulation frequency");
  }

  const double ripple = lockin_ripple_fraction(mod_frequency_hz, tau_s, poles);
  if (ripple > 0.01) {
    std::cerr << "warning: lock-in tau " << tau_s << " s passes "
              << 100.0 * ripple
              << "% of the double-frequency ripple; consider a longer tau or "
                 "more poles\n";
  }

  SignalTrace out = input;
  out.lockin_tau_s = tau_s;
  const double alpha = 1.0 - std::exp(-1.0 / (tau_s * input.rate_hz));
  double state[4] = {0.0, 0.0, 0.0, 0.0};
  const double root2 = std::sqrt(2.0);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = input.time_at(i);
    double value = root2 * input.samples[i] *
                   std::sin(two_pi * mod_frequency_hz * t + phase_rad);
    for (int p = 0; p < poles; ++p) {
      state[p] += alpha * (value - state[p]);
      value = state[p];
    }
    out.samples[i] = value;
  }
  return out;
}

}  // namespace ringsim::signal
