#include "ringsim/fields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ringsim/errors.hpp"

namespace ringsim::fields {

namespace {

// Shape anchors: the plateau sags to 98% of the peak at its edges, the ramp
// ends at 1%, the fringe decays exponentially from there.
constexpr double plateau_edge_level = 0.98;
constexpr double ramp_end_level = 0.01;

void check_geometry(const RodGeometry& g) {
  if (!(g.length_m > 0.0)) throw ConfigError("rod.length_m must be positive");
  if (!(g.aperture_m > 0.0)) throw ConfigError("rod.aperture_m must be positive");
  if (!(g.electrode_gap_m > 0.0)) {
    throw ConfigError("rod.electrode_gap_m must be positive");
  }
  if (!(g.plateau_span_m > 0.0)) {
    throw ConfigError("rod.plateau_span_m must be positive");
  }
  if (!(g.ramp_span_m > 0.0)) throw ConfigError("rod.ramp_span_m must be positive");
  if (!(g.fringe_decay_m > 0.0)) {
    throw ConfigError("rod.fringe_decay_m must be positive");
  }
  if (!(g.plateau_b_t >= 0.0)) {
    throw ConfigError("rod.plateau_b_t must be non-negative");
  }
}

// Unit-peak profile shape.
double unit_shape(double z, const RodGeometry& g) {
  const double az = std::abs(z);
  const double half_plateau = 0.5 * g.plateau_span_m;
  if (az <= half_plateau) {
    return 1.0 - (1.0 - plateau_edge_level) * (az / half_plateau);
  }
  const double past_plateau = az - half_plateau;
  if (past_plateau <= g.ramp_span_m) {
    return plateau_edge_level -
           (plateau_edge_level - ramp_end_level) * (past_plateau / g.ramp_span_m);
  }
  return ramp_end_level *
         std::exp(-(past_plateau - g.ramp_span_m) / g.fringe_decay_m);
}

// Closed-form integral of the unit shape over the whole axis.
double shape_integral(const RodGeometry& g) {
  const double plateau = g.plateau_span_m * 0.5 * (1.0 + plateau_edge_level);
  const double ramp = g.ramp_span_m * (plateau_edge_level + ramp_end_level);
  const double tails = 2.0 * ramp_end_level * g.fringe_decay_m;
  return plateau + ramp + tails;
}

}  // namespace

std::vector<std::string> validate(const RodAssembly& a) {
  for (const auto& rod : a.rods) check_geometry(rod);
  if (a.rods.empty()) throw ConfigError("assembly.rods must not be empty");
  if (a.orientation_signs.size() != a.rods.size()) {
    throw ConfigError(
        "assembly.orientation_signs must have one entry per rod");
  }
  for (int s : a.orientation_signs) {
    if (s != 1 && s != -1) {
      throw ConfigError("assembly.orientation_signs entries must be +1 or -1");
    }
  }
  if (!(std::abs(a.drive_voltage_peak_v) <= 2000.0)) {
    throw ConfigError(
        "assembly.drive_voltage_peak_v exceeds the 2 kV amplifier limit");
  }
  if (!(a.drive_frequency_hz > 0.0)) {
    throw ConfigError("assembly.drive_frequency_hz must be positive");
  }
  if (!(a.gate_period_s > 0.0)) {
    throw ConfigError("assembly.gate_period_s must be positive");
  }
  if (!(a.gate_duty > 0.0 && a.gate_duty < 1.0)) {
    throw ConfigError("assembly.gate_duty must lie strictly between 0 and 1");
  }

  std::vector<std::string> warnings;
  if (a.drive_frequency_hz < 200.0 || a.drive_frequency_hz > 500.0) {
    std::ostringstream w;
    w << "drive frequency " << a.drive_frequency_hz
      << " Hz is outside the 200-500 Hz band the electrodes are rated for";
    warnings.push_back(w.str());
  }
  return warnings;
}

double profile_amplitude(const RodGeometry& g) {
  check_geometry(g);
  return g.plateau_b_t * g.length_m / shape_integral(g);
}

double magnetic_profile(double z_m, const RodGeometry& g) {
  return profile_amplitude(g) * unit_shape(z_m, g);
}

double profile_extent(const RodGeometry& g) {
  return 0.5 * g.plateau_span_m + g.ramp_span_m + 12.0 * g.fringe_decay_m;
}

double effective_field(const std::function<double(double)>& profile,
                       double rod_length_m, double half_width_m, double step_m) {
  if (!(rod_length_m > 0.0)) {
    throw std::invalid_argument("effective_field: rod length must be positive");
  }
  if (!(half_width_m > 0.0)) {
    throw std::invalid_argument("effective_field: window must be positive");
  }
  if (!(step_m > 0.0)) {
    throw std::invalid_argument("effective_field: step must be positive");
  }
  const auto n = static_cast<std::size_t>(
      std::ceil(2.0 * half_width_m / step_m));
  const double h = 2.0 * half_width_m / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += profile(-half_width_m + (static_cast<double>(i) + 0.5) * h);
  }
  return sum * h / rod_length_m;
}

double effective_field(const RodGeometry& g, double step_m) {
  return effective_field([&g](double z) { return magnetic_profile(z, g); },
                         g.length_m, profile_extent(g), step_m);
}

double electrode_field(double voltage_v, double gap_m) {
  if (!(gap_m > 0.0)) {
    throw std::invalid_argument("electrode_field: gap must be positive");
  }
  return voltage_v / gap_m;
}

double drive_waveform(double t_s, const RodAssembly& a) {
  if (t_s < 0.0) {
    throw std::invalid_argument("drive_waveform: time must be non-negative");
  }
  const double phase = std::fmod(t_s, a.gate_period_s) / a.gate_period_s;
  const bool in_first = phase < a.gate_duty;
  const bool on = a.gate_on_first ? in_first : !in_first;
  if (!on) return 0.0;
  const double gap = a.rods.empty() ? 0.004 : a.rods.front().electrode_gap_m;
  return electrode_field(a.drive_voltage_peak_v, gap) *
         std::sin(6.283185307179586 * a.drive_frequency_hz * t_s);
}

double transverse_offset_factor(double offset_m, const RodGeometry& g) {
  if (std::abs(offset_m) > 0.5 * g.aperture_m) {
    std::ostringstream msg;
    msg << "transverse offset " << offset_m * 1e3
        << " mm lies outside the optical aperture (half-width "
        << 0.5 * g.aperture_m * 1e3 << " mm)";
    throw std::invalid_argument(msg.str());
  }
  const double offset_mm = offset_m * 1e3;
  return 1.0 + 0.01 * offset_mm * offset_mm;
}

AssemblyFields assembly_fields(const RodAssembly& a) {
  validate(a);

  // The normalization makes each rod's path-averaged field equal its plateau
  // value exactly, so the sums below use plateau_b_t directly; the numerical
  // quadrature route exists to cross-check this identity.
  double total_length = 0.0;
  double weighted = 0.0;
  double weighted_signed = 0.0;
  for (std::size_t i = 0; i < a.rods.size(); ++i) {
    const auto& rod = a.rods[i];
    total_length += rod.length_m;
    weighted += rod.length_m * rod.plateau_b_t;
    weighted_signed += rod.length_m * rod.plateau_b_t *
                       static_cast<double>(a.orientation_signs[i]);
  }

  AssemblyFields out;
  out.length_m = total_length;
  out.b_eff_rod_mean_t = weighted / total_length;
  out.b_eff_total_t =
      static_cast<double>(a.rods.size()) * weighted_signed / total_length;
  const double gap = a.rods.front().electrode_gap_m;
  out.e_rms_v_per_m =
      electrode_field(a.drive_voltage_peak_v, gap) / std::sqrt(2.0);
  return out;
}

}  // namespace ringsim::fields
