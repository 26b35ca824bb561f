#pragma once

// Field-rod model: longitudinal magnetic profile, effective fields seen by
// the beam, electrode field, and the gated sinusoidal drive.

#include <functional>
#include <string>
#include <vector>

namespace ringsim::fields {

struct RodGeometry {
  double length_m = 0.20;         // field region per rod
  double aperture_m = 0.004;      // square optical access hole
  double electrode_gap_m = 0.004;
  double plateau_b_t = 0.185;
  double plateau_span_m = 0.185;  // central region within 2% of maximum
  double ramp_span_m = 0.020;     // 98% -> 1% of maximum
  double fringe_decay_m = 0.004;  // exponential tail length beyond the ramp
};

struct RodAssembly {
  std::vector<RodGeometry> rods = std::vector<RodGeometry>(4);
  std::vector<int> orientation_signs = {1, 1, 1, 1};  // per-rod E x B sense
  double drive_voltage_peak_v = 2000.0;
  double drive_frequency_hz = 300.0;
  double gate_period_s = 20.0;  // amplitude-modulation period
  double gate_duty = 0.5;       // fraction of each period with the drive on
  bool gate_on_first = true;
};

// Hard limits throw ConfigError (amplifier ceiling at |V| = 2 kV, sign/rod
// count mismatch, non-positive geometry). Soft ones come back as warning
// strings, e.g. a drive frequency outside the 200-500 Hz band.
std::vector<std::string> validate(const RodAssembly& assembly);

// B(z) for one rod, z measured from the rod centre. Shape: a plateau sagging
// to 98% at its edges, a linear ramp down to 1%, then an exponential fringe
// tail. The amplitude is normalized so the field integral over the rod length
// equals plateau_b_t * length_m exactly; the centre value then sits slightly
// below plateau_b_t because the tails carry some of the integral.
double magnetic_profile(double z_m, const RodGeometry& geometry = {});

// Peak value B(0) after normalization.
double profile_amplitude(const RodGeometry& geometry = {});

// Half-width beyond which the profile is negligible; integration window.
double profile_extent(const RodGeometry& geometry = {});

// Path-averaged field (1/L) * integral of profile over [-half_width, half_width],
// composite midpoint rule.
double effective_field(const std::function<double(double)>& profile,
                       double rod_length_m, double half_width_m,
                       double step_m = 1e-4);
double effective_field(const RodGeometry& geometry, double step_m = 1e-4);

double electrode_field(double voltage_v, double gap_m);

// Instantaneous E between the electrodes at time t: a sine at the drive
// frequency, gated by the amplitude-modulation square wave (on for
// gate_duty of each period, on-phase first when gate_on_first).
double drive_waveform(double t_s, const RodAssembly& assembly);

// Quadratic field inhomogeneity across the aperture: 1% increase per mm of
// transverse offset, squared. Throws beyond half the aperture.
double transverse_offset_factor(double offset_m, const RodGeometry& geometry = {});

struct AssemblyFields {
  double b_eff_rod_mean_t = 0.0;  // length-weighted mean over rods, unsigned
  double b_eff_total_t = 0.0;     // orientation-signed mean times rod count;
                                  // pairs with the filled-length fill factor
  double e_rms_v_per_m = 0.0;     // drive rms between the electrodes
  double length_m = 0.0;          // summed field length
};

AssemblyFields assembly_fields(const RodAssembly& assembly);

}  // namespace ringsim::fields
