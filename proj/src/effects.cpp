#include "ringsim/effects.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ringsim::effects {

namespace {

void check_conditions(const Conditions& c) {
  if (!(c.pressure_pa >= 0.0)) {
    throw std::invalid_argument("conditions: pressure must be non-negative");
  }
  if (!(c.temperature_k > 0.0)) {
    throw std::invalid_argument("conditions: temperature must be positive");
  }
}

void check_fields_finite(double b, double e) {
  if (!std::isfinite(b) || !std::isfinite(e)) {
    throw std::invalid_argument("field magnitudes must be finite");
  }
}

}  // namespace

const CoefficientTable& CoefficientTable::builtin() {
  static const CoefficientTable table = [] {
    CoefficientTable t;

    CoefficientRecord vacuum;
    vacuum.medium = "vacuum";
    vacuum.eta_melb = 2.7e-32;
    vacuum.eta_meda = -6.7e-32;
    t.insert(std::move(vacuum));

    auto gas = [&t](const char* name, double eta_melb) {
      CoefficientRecord r;
      r.medium = name;
      r.eta_melb = eta_melb;
      r.ref_pressure_pa = constants::bar;
      r.ref_temperature_k = constants::reference_temperature;
      t.insert(std::move(r));
    };
    gas("He", 1.6e-24);
    gas("H", 3.4e-23);
    gas("Ne", 4.2e-24);
    gas("Ar", 3.6e-23);
    gas("Kr", 7.8e-23);
    gas("H2", 4.8e-23);
    gas("N2", 9.0e-23);
    gas("CO", 1.4e-22);
    return t;
  }();
  return table;
}

const CoefficientRecord& CoefficientTable::lookup(const std::string& medium) const {
  for (const auto& r : records_) {
    if (r.medium == medium) return r;
  }
  std::ostringstream msg;
  msg << "unknown medium '" << medium << "'; known media:";
  for (const auto& r : records_) msg << ' ' << r.medium;
  throw std::invalid_argument(msg.str());
}

void CoefficientTable::insert(CoefficientRecord record) {
  for (auto& r : records_) {
    if (r.medium == record.medium) {
      r = std::move(record);
      return;
    }
  }
  records_.push_back(std::move(record));
}

std::vector<std::string> CoefficientTable::media() const {
  std::vector<std::string> names;
  names.reserve(records_.size());
  for (const auto& r : records_) names.push_back(r.medium);
  return names;
}

const CoefficientRecord& lookup_coefficient(const std::string& medium,
                                            const CoefficientTable& table) {
  return table.lookup(medium);
}

CoefficientRecord scale_coefficient(const CoefficientRecord& record,
                                    const Conditions& conditions) {
  check_conditions(conditions);
  if (record.is_vacuum()) return record;

  const double factor = (conditions.pressure_pa / *record.ref_pressure_pa) *
                        (*record.ref_temperature_k / conditions.temperature_k);
  CoefficientRecord scaled = record;
  scaled.eta_melb = record.eta_melb * factor;
  if (record.eta_meda) scaled.eta_meda = *record.eta_meda * factor;
  scaled.ref_pressure_pa = conditions.pressure_pa;
  scaled.ref_temperature_k = conditions.temperature_k;
  return scaled;
}

double delta_n_melb(const CoefficientRecord& record, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions) {
  check_fields_finite(b_tesla, e_volt_per_m);
  return scale_coefficient(record, conditions).eta_melb * b_tesla * e_volt_per_m;
}

double delta_n_melb(const std::string& medium, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions,
                    const CoefficientTable& table) {
  return delta_n_melb(table.lookup(medium), b_tesla, e_volt_per_m, conditions);
}

double delta_n_meda(const CoefficientRecord& record, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions,
                    std::optional<double> meda_ratio) {
  check_fields_finite(b_tesla, e_volt_per_m);
  const CoefficientRecord scaled = scale_coefficient(record, conditions);
  if (scaled.eta_meda) {
    return *scaled.eta_meda * b_tesla * e_volt_per_m;
  }
  if (meda_ratio) {
    return *meda_ratio * scaled.eta_melb * b_tesla * e_volt_per_m;
  }
  throw std::invalid_argument(
      "medium '" + record.medium +
      "' has no directional coefficient; supply meda_ratio "
      "(delta_n_MEDA / delta_n_MELB at equal fields)");
}

double delta_n_meda(const std::string& medium, double b_tesla,
                    double e_volt_per_m, const Conditions& conditions,
                    std::optional<double> meda_ratio,
                    const CoefficientTable& table) {
  return delta_n_meda(table.lookup(medium), b_tesla, e_volt_per_m, conditions,
                      meda_ratio);
}

JonesBirefringence jones_from_melb(double melb_delta_n) {
  constexpr double quarter_pi = 0.7853981633974483;
  return {melb_delta_n, quarter_pi, -quarter_pi};
}

double SymTensor2::along(const Vec2& d) const {
  return xx * d.x * d.x + 2.0 * xy * d.x * d.y + yy * d.y * d.y;
}

double SymTensor2::max_abs() const {
  return std::max({std::abs(xx), std::abs(xy), std::abs(yy)});
}

BilinearResponse::BilinearResponse(EvalFn eval) : eval_(std::move(eval)) {
  if (!eval_) throw std::invalid_argument("response: evaluation function is empty");
}

SymTensor2 BilinearResponse::operator()(const Vec2& e_field,
                                        const Vec2& b_field) const {
  return eval_(e_field, b_field);
}

BilinearResponse BilinearResponse::melb(double eta) {
  return BilinearResponse([eta](const Vec2& e, const Vec2& b) {
    // Symmetrized product of E with B rotated a quarter turn; for crossed
    // fields the eigenaxes lie along the fields and n_B - n_E = eta |E||B|.
    const Vec2 bp{-b.y, b.x};
    SymTensor2 t;
    t.xx = eta * e.x * bp.x;
    t.yy = eta * e.y * bp.y;
    t.xy = 0.5 * eta * (e.x * bp.y + e.y * bp.x);
    return t;
  });
}

namespace {

void check_bilinear(const BilinearResponse& r) {
  const Vec2 e0{0.7, -0.3};
  const Vec2 b0{0.2, 0.9};
  const SymTensor2 base = r(e0, b0);
  const double scale = std::max(1.0, base.max_abs());

  constexpr double pairs[][2] = {
      {2.0, 1.5}, {-3.0, 0.5}, {0.25, -2.0}, {0.0, 1.0}};
  for (const auto& [a, b] : pairs) {
    const SymTensor2 got = r({a * e0.x, a * e0.y}, {b * b0.x, b * b0.y});
    const SymTensor2 want = base * (a * b);
    const double tol = 1e-9 * std::max(scale, std::abs(a * b) * scale);
    if ((got - want).max_abs() > tol) {
      throw std::invalid_argument(
          "response is not bilinear in the field magnitudes");
    }
  }
}

void check_parallel_premise(const BilinearResponse& r) {
  constexpr double inv_sqrt2 = 0.7071067811865476;
  const Vec2 dirs[] = {{1.0, 0.0}, {inv_sqrt2, inv_sqrt2}, {0.0, 1.0}};
  for (const Vec2& d : dirs) {
    const SymTensor2 t = r(d, d);
    const Vec2 perp{-d.y, d.x};
    const double aligned = t.along(d) - t.along(perp);
    if (std::abs(aligned) > 1e-9 * std::max(1.0, t.max_abs())) {
      throw std::invalid_argument(
          "parallel fields must not produce an anisotropy with eigenaxes "
          "along the field direction");
    }
  }
}

}  // namespace

EquivalenceReport verify_equivalence_construction(const BilinearResponse& r,
                                                  double rel_tolerance,
                                                  double axis_tolerance_rad) {
  check_bilinear(r);
  check_parallel_premise(r);

  // Crossed unit fields: E along x, B along y.
  const SymTensor2 crossed = r({1.0, 0.0}, {0.0, 1.0});
  const double melb = crossed.yy - crossed.xx;  // n_B - n_E

  // Rotate the field pair a quarter turn, flip B, superpose with the
  // original, halve. The two field configurations now add up to parallel
  // fields of magnitude sqrt(2) along +45 degrees before the halving.
  const SymTensor2 rotated = crossed.rotated_quarter_turn();
  const SymTensor2 flipped = rotated * -1.0;
  const SymTensor2 parallel = (crossed + flipped) * 0.5;

  // With the fields along +45 degrees, the +/-45 Jones axes are the lab y
  // and x axes. Any residual xy part means the eigenaxes drifted off them.
  EquivalenceReport report;
  report.melb_delta_n = melb;
  report.jones_delta_n = parallel.yy - parallel.xx;

  const double off_diag = 2.0 * parallel.xy;
  const double diag = parallel.xx - parallel.yy;
  if (std::hypot(off_diag, diag) > 0.0) {
    const double axis = 0.5 * std::atan2(off_diag, diag);
    report.axis_error_rad = std::abs(std::remainder(axis, 1.5707963267948966));
  }

  const double denom =
      std::max({std::abs(melb), crossed.max_abs(), 1e-300});
  report.relative_error = std::abs(report.jones_delta_n - melb) / denom;
  report.passed = report.relative_error <= rel_tolerance &&
                  report.axis_error_rad <= axis_tolerance_rad;
  return report;
}

}  // namespace ringsim::effects
