#pragma once

// Magneto-electric response coefficients and the index anisotropies they
// produce in crossed or parallel transverse fields.
//
// Sign and axis conventions used throughout:
//
//   delta_n_melb = n_B - n_E      linear birefringence in crossed transverse
//                                 fields: index for polarization along B minus
//                                 index for polarization along E.
//
//   delta_n_meda = n_plus - n_minus    directional anisotropy between
//                                 counterpropagating beams; "plus" travels
//                                 along E x B.
//
//   Jones birefringence           eigenaxes at +/-45 degrees from the common
//                                 field direction (fields parallel), angles
//                                 counted counterclockwise looking into the
//                                 beam; delta_n = n(+45) - n(-45).
//
// Coefficients are per unit B (tesla) and unit E (volt/metre). Gas entries
// refer to the table's reference pressure and temperature and rescale with
// number density in the ideal-gas approximation; the vacuum entry carries no
// reference state and never rescales.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ringsim/constants.hpp"

namespace ringsim::effects {

struct Conditions {
  double pressure_pa = constants::bar;
  double temperature_k = constants::reference_temperature;
};

struct CoefficientRecord {
  std::string medium;
  double eta_melb = 0.0;
  std::optional<double> eta_meda;  // absent for media where only MELB is known
  std::optional<double> ref_pressure_pa;
  std::optional<double> ref_temperature_k;
  double ref_wavelength_m = constants::reference_wavelength;

  bool is_vacuum() const { return !ref_pressure_pa.has_value(); }
};

class CoefficientTable {
 public:
  CoefficientTable() = default;

  // Built-in table: vacuum plus eight gases at 1 bar, 293 K, 632.8 nm.
  static const CoefficientTable& builtin();

  // Throws std::invalid_argument listing the known media on a miss.
  const CoefficientRecord& lookup(const std::string& medium) const;

  // Adds a record, replacing any existing entry for the same medium.
  void insert(CoefficientRecord record);

  std::vector<std::string> media() const;
  const std::vector<CoefficientRecord>& records() const { return records_; }

 private:
  std::vector<CoefficientRecord> records_;
};

const CoefficientRecord& lookup_coefficient(
    const std::string& medium,
    const CoefficientTable& table = CoefficientTable::builtin());

// Record rescaled to the given conditions: eta * (P/P_ref) * (T_ref/T).
// Vacuum records pass through unchanged.
CoefficientRecord scale_coefficient(const CoefficientRecord& record,
                                    const Conditions& conditions);

double delta_n_melb(const CoefficientRecord& record, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions);
double delta_n_melb(const std::string& medium, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions,
                    const CoefficientTable& table = CoefficientTable::builtin());

// Uses the medium's own MEDA coefficient when the table has one. Otherwise
// meda_ratio (= delta_n_MEDA / delta_n_MELB at equal fields) must be supplied
// or the call throws.
double delta_n_meda(const CoefficientRecord& record, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions,
                    std::optional<double> meda_ratio = std::nullopt);
double delta_n_meda(const std::string& medium, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions,
                    std::optional<double> meda_ratio = std::nullopt,
                    const CoefficientTable& table = CoefficientTable::builtin());

struct JonesBirefringence {
  double delta_n = 0.0;        // n(+45) - n(-45)
  double plus_axis_rad = 0.0;  // from the field direction, counterclockwise
  double minus_axis_rad = 0.0;
};

// In the parallel-field configuration the Jones anisotropy equals the crossed
// MELB value, sign included, with eigenaxes pinned at +/-45 degrees.
JonesBirefringence jones_from_melb(double melb_delta_n);

// ---------------------------------------------------------------------------
// Symmetry construction relating the crossed- and parallel-field responses.

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Symmetric 2x2 tensor of index perturbations in the plane transverse to the
// beam; n along a unit direction d is d.T.d.
struct SymTensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  SymTensor2 operator+(const SymTensor2& o) const {
    return {xx + o.xx, xy + o.xy, yy + o.yy};
  }
  SymTensor2 operator-(const SymTensor2& o) const {
    return {xx - o.xx, xy - o.xy, yy - o.yy};
  }
  SymTensor2 operator*(double a) const { return {xx * a, xy * a, yy * a}; }

  // Tensor re-expressed after rotating the generating fields by +90 degrees.
  SymTensor2 rotated_quarter_turn() const { return {yy, -xy, xx}; }

  double along(const Vec2& unit_dir) const;
  double max_abs() const;
};

// Index-perturbation tensor as a function of the transverse E and B vectors,
// bilinear in the field magnitudes.
class BilinearResponse {
 public:
  using EvalFn = std::function<SymTensor2(const Vec2& e, const Vec2& b)>;

  explicit BilinearResponse(EvalFn eval);

  SymTensor2 operator()(const Vec2& e_field, const Vec2& b_field) const;

  // Idealized response with n_B - n_E = eta |E||B| in crossed fields:
  // the symmetrized product of E with B rotated a quarter turn.
  static BilinearResponse melb(double eta);

 private:
  EvalFn eval_;
};

struct EquivalenceReport {
  double melb_delta_n = 0.0;   // n_B - n_E from the crossed configuration
  double jones_delta_n = 0.0;  // n(+45) - n(-45) from the constructed parallel one
  double axis_error_rad = 0.0;
  double relative_error = 0.0;
  bool passed = false;
};

// Walks the superposition argument step by step: start from crossed unit
// fields, rotate the field pair a quarter turn, flip B, superpose with the
// original, and halve to restore unit field magnitudes. The two fields are
// then parallel along +45 degrees, and for any bilinear response the
// resulting tensor must reproduce the crossed-field anisotropy on +/-45
// eigenaxes. Throws if the response is not bilinear or if parallel fields
// already produce a field-aligned anisotropy (either breaks the argument's
// premises).
EquivalenceReport verify_equivalence_construction(
    const BilinearResponse& response, double rel_tolerance = 1e-9,
    double axis_tolerance_rad = 1e-9);

}  // namespace ringsim::effects
