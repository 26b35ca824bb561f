#include "ringsim/config_json.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "ringsim/errors.hpp"

namespace ringsim {

namespace {

using nlohmann::json;

// Reads j[key] into out when present, rethrowing type errors with the dotted
// field path so CLI messages name the offending field.
template <typename T>
void read_field(const json& j, const std::string& scope, const char* key,
                T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + scope + key + "' has the wrong type");
  }
}

json conditions_to_json(const effects::Conditions& c) {
  return {{"pressure_pa", c.pressure_pa}, {"temperature_k", c.temperature_k}};
}

effects::Conditions conditions_from_json(const json& j, const std::string& scope) {
  effects::Conditions c;
  read_field(j, scope, "pressure_pa", c.pressure_pa);
  read_field(j, scope, "temperature_k", c.temperature_k);
  return c;
}

json geometry_to_json(const fields::RodGeometry& g) {
  return {{"length_m", g.length_m},
          {"aperture_m", g.aperture_m},
          {"electrode_gap_m", g.electrode_gap_m},
          {"plateau_b_t", g.plateau_b_t},
          {"plateau_span_m", g.plateau_span_m},
          {"ramp_span_m", g.ramp_span_m},
          {"fringe_decay_m", g.fringe_decay_m}};
}

fields::RodGeometry geometry_from_json(const json& j, const std::string& scope) {
  fields::RodGeometry g;
  read_field(j, scope, "length_m", g.length_m);
  read_field(j, scope, "aperture_m", g.aperture_m);
  read_field(j, scope, "electrode_gap_m", g.electrode_gap_m);
  read_field(j, scope, "plateau_b_t", g.plateau_b_t);
  read_field(j, scope, "plateau_span_m", g.plateau_span_m);
  read_field(j, scope, "ramp_span_m", g.ramp_span_m);
  read_field(j, scope, "fringe_decay_m", g.fringe_decay_m);
  return g;
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
  json j;
  j["medium"] = c.medium;
  j["conditions"] = conditions_to_json(c.conditions);
  j["meda_ratio"] = c.meda_ratio;
  if (c.coefficients) {
    j["coefficients"] = coefficient_table_to_json(*c.coefficients);
  }

  json assembly;
  assembly["rod_count"] = c.assembly.rods.size();
  assembly["rod"] = geometry_to_json(c.assembly.rods.empty()
                                         ? fields::RodGeometry{}
                                         : c.assembly.rods.front());
  assembly["orientation_signs"] = c.assembly.orientation_signs;
  assembly["drive_voltage_peak_v"] = c.assembly.drive_voltage_peak_v;
  assembly["drive_frequency_hz"] = c.assembly.drive_frequency_hz;
  assembly["gate_period_s"] = c.assembly.gate_period_s;
  assembly["gate_duty"] = c.assembly.gate_duty;
  assembly["gate_on_first"] = c.assembly.gate_on_first;
  j["assembly"] = assembly;

  j["cavity"] = {{"perimeter_m", c.cavity.perimeter_m},
                 {"finesse", c.cavity.finesse},
                 {"laser_frequency_hz", c.cavity.laser_frequency_hz}};
  j["noise"] = {{"enabled", c.noise.enabled},
                {"shot_floor", c.noise.shot_floor},
                {"excess_factor", c.noise.excess_factor},
                {"drift_rate", c.noise.drift_rate},
                {"seed", c.noise.seed}};
  j["pdh"] = {{"slope_v_per_hz", c.pdh.slope_v_per_hz},
              {"power_scale", c.pdh.power_scale},
              {"mod_frequency_hz", c.pdh.mod_frequency_hz}};
  j["lockin"] = {{"tau_s", c.lockin.tau_s},
                 {"phase_rad", c.lockin.phase_rad},
                 {"poles", c.lockin.poles}};
  j["estimator"] = {{"settle_s", c.estimator.settle_s}};
  j["run"] = {{"duration_s", c.run.duration_s}, {"rate_hz", c.run.rate_hz}};
  j["calibration"] = {{"enabled", c.calibration.enabled},
                      {"dnu_rms_hz", c.calibration.dnu_rms_hz},
                      {"duration_s", c.calibration.duration_s}};
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config document must be a JSON object");
  }
  ExperimentConfig c;
  read_field(doc, "", "medium", c.medium);
  if (doc.contains("conditions")) {
    c.conditions = conditions_from_json(doc.at("conditions"), "conditions.");
  }
  read_field(doc, "", "meda_ratio", c.meda_ratio);
  if (doc.contains("coefficients")) {
    c.coefficients = coefficient_table_from_json(doc.at("coefficients"));
  }

  if (doc.contains("assembly")) {
    const json& a = doc.at("assembly");
    std::size_t count = 4;
    read_field(a, "assembly.", "rod_count", count);
    fields::RodGeometry rod;
    if (a.contains("rod")) rod = geometry_from_json(a.at("rod"), "assembly.rod.");
    c.assembly.rods.assign(count, rod);
    c.assembly.orientation_signs.assign(count, 1);
    read_field(a, "assembly.", "orientation_signs", c.assembly.orientation_signs);
    read_field(a, "assembly.", "drive_voltage_peak_v",
               c.assembly.drive_voltage_peak_v);
    read_field(a, "assembly.", "drive_frequency_hz",
               c.assembly.drive_frequency_hz);
    read_field(a, "assembly.", "gate_period_s", c.assembly.gate_period_s);
    read_field(a, "assembly.", "gate_duty", c.assembly.gate_duty);
    read_field(a, "assembly.", "gate_on_first", c.assembly.gate_on_first);
  }

  if (doc.contains("cavity")) {
    const json& v = doc.at("cavity");
    read_field(v, "cavity.", "perimeter_m", c.cavity.perimeter_m);
    read_field(v, "cavity.", "finesse", c.cavity.finesse);
    read_field(v, "cavity.", "laser_frequency_hz", c.cavity.laser_frequency_hz);
  }
  if (doc.contains("noise")) {
    const json& v = doc.at("noise");
    read_field(v, "noise.", "enabled", c.noise.enabled);
    read_field(v, "noise.", "shot_floor", c.noise.shot_floor);
    read_field(v, "noise.", "excess_factor", c.noise.excess_factor);
    read_field(v, "noise.", "drift_rate", c.noise.drift_rate);
    read_field(v, "noise.", "seed", c.noise.seed);
  }
  if (doc.contains("pdh")) {
    const json& v = doc.at("pdh");
    read_field(v, "pdh.", "slope_v_per_hz", c.pdh.slope_v_per_hz);
    read_field(v, "pdh.", "power_scale", c.pdh.power_scale);
    read_field(v, "pdh.", "mod_frequency_hz", c.pdh.mod_frequency_hz);
  }
  if (doc.contains("lockin")) {
    const json& v = doc.at("lockin");
    read_field(v, "lockin.", "tau_s", c.lockin.tau_s);
    read_field(v, "lockin.", "phase_rad", c.lockin.phase_rad);
    read_field(v, "lockin.", "poles", c.lockin.poles);
  }
  if (doc.contains("estimator")) {
    read_field(doc.at("estimator"), "estimator.", "settle_s",
               c.estimator.settle_s);
  }
  if (doc.contains("run")) {
    const json& v = doc.at("run");
    read_field(v, "run.", "duration_s", c.run.duration_s);
    read_field(v, "run.", "rate_hz", c.run.rate_hz);
  }
  if (doc.contains("calibration")) {
    const json& v = doc.at("calibration");
    read_field(v, "calibration.", "enabled", c.calibration.enabled);
    read_field(v, "calibration.", "dnu_rms_hz", c.calibration.dnu_rms_hz);
    read_field(v, "calibration.", "duration_s", c.calibration.duration_s);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(load_json_file(path));
}

nlohmann::json coefficient_table_to_json(const effects::CoefficientTable& table) {
  json rows = json::array();
  for (const auto& r : table.records()) {
    json row;
    row["medium"] = r.medium;
    row["eta_melb"] = r.eta_melb;
    if (r.eta_meda) row["eta_meda"] = *r.eta_meda;
    if (r.ref_pressure_pa) row["ref_pressure_pa"] = *r.ref_pressure_pa;
    if (r.ref_temperature_k) row["ref_temperature_k"] = *r.ref_temperature_k;
    row["ref_wavelength_m"] = r.ref_wavelength_m;
    rows.push_back(row);
  }
  return rows;
}

effects::CoefficientTable coefficient_table_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) {
    throw ConfigError("config field 'coefficients' must be an array of records");
  }
  effects::CoefficientTable table;
  for (const auto& row : doc) {
    effects::CoefficientRecord r;
    if (!row.contains("medium") || !row.contains("eta_melb")) {
      throw ConfigError(
          "config field 'coefficients' entries need 'medium' and 'eta_melb'");
    }
    read_field(row, "coefficients.", "medium", r.medium);
    read_field(row, "coefficients.", "eta_melb", r.eta_melb);
    if (row.contains("eta_meda")) {
      double v = 0.0;
      read_field(row, "coefficients.", "eta_meda", v);
      r.eta_meda = v;
    }
    if (row.contains("ref_pressure_pa")) {
      double v = 0.0;
      read_field(row, "coefficients.", "ref_pressure_pa", v);
      r.ref_pressure_pa = v;
    }
    if (row.contains("ref_temperature_k")) {
      double v = 0.0;
      read_field(row, "coefficients.", "ref_temperature_k", v);
      r.ref_temperature_k = v;
    }
    read_field(row, "coefficients.", "ref_wavelength_m", r.ref_wavelength_m);
    if (r.ref_pressure_pa.has_value() != r.ref_temperature_k.has_value()) {
      throw ConfigError(
          "config field 'coefficients': reference pressure and temperature "
          "must be given together");
    }
    table.insert(std::move(r));
  }
  return table;
}

nlohmann::json plan_to_json(const planner::ExperimentPlan& p) {
  json j;
  j["medium"] = p.medium;
  j["conditions"] = conditions_to_json(p.conditions);
  if (p.meda_ratio) j["meda_ratio"] = *p.meda_ratio;
  j["b_eff_t"] = p.b_eff_t;
  j["e_rms_v_per_m"] = p.e_rms_v_per_m;
  j["l_fields_m"] = p.l_fields_m;
  j["perimeter_m"] = p.perimeter_m;
  j["laser_frequency_hz"] = p.laser_frequency_hz;
  j["sensitivity_per_sqrt_hz"] = p.sensitivity_per_sqrt_hz;
  j["target_snr"] = p.target_snr;
  return j;
}

planner::ExperimentPlan plan_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("plan document must be a JSON object");
  }
  planner::ExperimentPlan p;
  read_field(doc, "", "medium", p.medium);
  if (doc.contains("conditions")) {
    p.conditions = conditions_from_json(doc.at("conditions"), "conditions.");
  }
  if (doc.contains("meda_ratio")) {
    double v = 1.0;
    read_field(doc, "", "meda_ratio", v);
    p.meda_ratio = v;
  }
  read_field(doc, "", "b_eff_t", p.b_eff_t);
  read_field(doc, "", "e_rms_v_per_m", p.e_rms_v_per_m);
  read_field(doc, "", "l_fields_m", p.l_fields_m);
  read_field(doc, "", "perimeter_m", p.perimeter_m);
  read_field(doc, "", "laser_frequency_hz", p.laser_frequency_hz);
  read_field(doc, "", "sensitivity_per_sqrt_hz", p.sensitivity_per_sqrt_hz);
  read_field(doc, "", "target_snr", p.target_snr);
  return p;
}

planner::ExperimentPlan load_plan(const std::string& path) {
  return plan_from_json(load_json_file(path));
}

nlohmann::json calibration_to_json(const estimator::CalibrationRun& run) {
  return {{"dnu_rms_hz", run.dnu_rms_hz},
          {"measured_level_v", run.measured_level_v},
          {"time_s", run.time_s}};
}

estimator::CalibrationRun calibration_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("dnu_rms_hz") ||
      !doc.contains("measured_level_v") || !doc.contains("time_s")) {
    throw ConfigError(
        "calibration document needs 'dnu_rms_hz', 'measured_level_v' and "
        "'time_s'");
  }
  estimator::CalibrationRun run;
  read_field(doc, "", "dnu_rms_hz", run.dnu_rms_hz);
  read_field(doc, "", "measured_level_v", run.measured_level_v);
  read_field(doc, "", "time_s", run.time_s);
  return run;
}

estimator::CalibrationRun load_calibration(const std::string& path) {
  return calibration_from_json(load_json_file(path));
}

nlohmann::json estimate_to_json(const estimator::MeasurementEstimate& e,
                                const estimator::CalibrationInfo* calibration) {
  json j;
  j["value"] = e.value;
  if (std::isnan(e.sigma)) {
    j["sigma"] = nullptr;
  } else {
    j["sigma"] = e.sigma;
  }
  j["n_periods"] = e.n_periods;
  j["unit"] = to_string(e.unit);
  if (calibration) {
    j["calibration"] = {{"before_v_per_hz", calibration->before_v_per_hz},
                        {"after_v_per_hz", calibration->after_v_per_hz},
                        {"interpolated_v_per_hz", calibration->interpolated_v_per_hz},
                        {"time_s", calibration->time_s}};
  }
  return j;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void save_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

}  // namespace ringsim
