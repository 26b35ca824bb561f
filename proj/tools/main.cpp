// Command-line front end: synthesize runs, estimate recorded traces, plan
// sensitivities, and dump the coefficient table or the rod field profile.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ringsim/config_json.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/pipeline.hpp"
#include "ringsim/planner.hpp"
#include "ringsim/signal.hpp"
#include "ringsim/trace_io.hpp"

namespace {

using ringsim::BracketError;
using ringsim::ConfigError;
using ringsim::IoError;

// Shortest representation that parses back to the same double.
std::string shortest(double v) { return nlohmann::json(v).dump(); }

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const BracketError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("RINGSIM_OUT_DIR")) {
    if (*env) return env;
  }
  return ".";
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void cmd_simulate(const SimulateArgs& args) {
  const auto config = ringsim::load_config(args.config_path);
  print_warnings(ringsim::validate(config));

  const std::uint64_t seed = args.seed ? *args.seed : config.noise.seed;
  const auto products = ringsim::run_simulation(config, seed);

  const std::filesystem::path dir =
      args.out_dir.empty() ? default_out_dir() : args.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

  const std::string digest = ringsim::config_digest(config);
  nlohmann::json manifest;
  manifest["config"] = ringsim::to_json(config);
  manifest["config_digest"] = digest;
  manifest["seed"] = seed;
  manifest["samples"] = products.raw.samples.size();
  manifest["rate_hz"] = config.run.rate_hz;
  manifest["expected_delta_nu_rms_hz"] = ringsim::expected_delta_nu_rms(config);

  ringsim::write_trace_csv((dir / "trace_raw.csv").string(), products.raw);
  ringsim::write_trace_csv((dir / "trace_demod.csv").string(),
                           products.demodulated);
  manifest["outputs"] = {{"raw", "trace_raw.csv"},
                         {"demodulated", "trace_demod.csv"}};
  if (products.calibration_before) {
    ringsim::save_json_file((dir / "cal_before.json").string(),
                            ringsim::calibration_to_json(*products.calibration_before));
    ringsim::save_json_file((dir / "cal_after.json").string(),
                            ringsim::calibration_to_json(*products.calibration_after));
    manifest["outputs"]["calibration_before"] = "cal_before.json";
    manifest["outputs"]["calibration_after"] = "cal_after.json";
  }
  ringsim::save_json_file((dir / "manifest.json").string(), manifest);

  std::cout << "config_digest = " << digest << '\n';
  std::cout << "seed = " << seed << '\n';
  std::cout << "samples = " << products.raw.samples.size() << " @ "
            << shortest(config.run.rate_hz) << " Hz\n";
  std::cout << "expected_delta_nu_rms_hz = "
            << ringsim::format_sci(ringsim::expected_delta_nu_rms(config))
            << '\n';
  std::cout << "wrote " << (dir / "manifest.json").string() << '\n';
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string trace_path;
  std::string cal_before_path;
  std::string cal_after_path;
  std::string out_path;
  std::string ledger_path;
  double gate_period_s = 0.0;  // 0: take from trace metadata
  double settle_s = -1.0;      // negative: five lock-in taus from metadata
  bool two_sided = false;
};

ringsim::estimator::CalibrationRun load_bracketing(const std::string& path,
                                                   const char* which) {
  if (path.empty() || !std::filesystem::exists(path)) {
    throw BracketError(std::string("calibration '") + which +
                       "' run is missing; estimates need bracketing "
                       "calibration runs");
  }
  return ringsim::load_calibration(path);
}

void cmd_estimate(const EstimateArgs& args) {
  const auto trace = ringsim::read_trace_csv(args.trace_path);
  const auto before = load_bracketing(args.cal_before_path, "before");
  const auto after = load_bracketing(args.cal_after_path, "after");

  const double gate =
      args.gate_period_s > 0.0 ? args.gate_period_s : trace.gate_period_s;
  if (!(gate > 0.0)) {
    throw ConfigError(
        "trace carries no gate_period_s metadata; pass --gate-period");
  }
  const double settle =
      args.settle_s >= 0.0 ? args.settle_s : 5.0 * trace.lockin_tau_s;

  const auto pairs = ringsim::estimator::segment_periods(trace, gate, settle);
  const auto volts =
      args.two_sided
          ? ringsim::estimator::on_off_estimate_two_sided(pairs, trace.unit)
          : ringsim::estimator::on_off_estimate(pairs, trace.unit);

  const double t_mid = trace.t0_s + 0.5 * trace.duration_s();
  const auto info = ringsim::estimator::calibration_info(before, after, t_mid);
  const auto estimate =
      ringsim::estimator::to_frequency(volts, info.interpolated_v_per_hz);

  std::cout << "delta_nu_hz = " << ringsim::format_sci(estimate.value)
            << " +/- "
            << (std::isnan(estimate.sigma)
                    ? std::string("unavailable")
                    : ringsim::format_sci(estimate.sigma))
            << "  (" << estimate.n_periods << " periods)\n";
  if (estimate.n_periods == 1) {
    std::cerr << "warning: single gate period; sigma is unavailable\n";
  }

  if (!args.out_path.empty()) {
    nlohmann::json doc = ringsim::estimate_to_json(estimate, &info);
    doc["config_digest"] = trace.config_digest;
    doc["seed"] = trace.seed;
    ringsim::save_json_file(args.out_path, doc);
  }
  if (!args.ledger_path.empty()) {
    ringsim::append_results_csv(args.ledger_path, estimate,
                                trace.config_digest, trace.seed);
  }
}

// --- plan -------------------------------------------------------------------

struct PlanArgs {
  std::string plan_path;
  std::string coeffs_path;
  std::string out_path;
  std::optional<std::string> medium;
  std::optional<double> pressure_pa;
  std::optional<double> temperature_k;
  std::optional<double> meda_ratio;
  std::optional<double> b_t;
  std::optional<double> e_vpm;
  std::optional<double> l_fields;
  std::optional<double> perimeter;
  std::optional<double> laser_hz;
  std::optional<double> sensitivity;
  std::optional<double> snr;
  std::vector<std::string> sweep_specs;
};

std::vector<double> parse_sweep_axis(const std::string& spec, char axis) {
  const std::string prefix = std::string(1, axis) + "=";
  if (spec.rfind(prefix, 0) != 0) {
    throw ConfigError("sweep spec '" + spec + "' must start with '" + prefix + "'");
  }
  const std::string body = spec.substr(2);
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = body.find(':', start);
    parts.push_back(body.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() != 3) throw std::invalid_argument(spec);
    const double lo = std::stod(parts[0]);
    const double step = std::stod(parts[1]);
    const double hi = std::stod(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument(spec);
    std::vector<double> values;
    for (double v = lo; v <= hi + 1e-9 * step; v += step) values.push_back(v);
    return values;
  } catch (const std::exception&) {
    throw ConfigError("sweep spec '" + spec +
                      "' must be lo:step:hi or a single value");
  }
}

void cmd_plan(const PlanArgs& args) {
  ringsim::planner::ExperimentPlan plan;
  if (!args.plan_path.empty()) plan = ringsim::load_plan(args.plan_path);
  if (args.medium) plan.medium = *args.medium;
  if (args.pressure_pa) plan.conditions.pressure_pa = *args.pressure_pa;
  if (args.temperature_k) plan.conditions.temperature_k = *args.temperature_k;
  if (args.meda_ratio) plan.meda_ratio = *args.meda_ratio;
  if (args.b_t) plan.b_eff_t = *args.b_t;
  if (args.e_vpm) plan.e_rms_v_per_m = *args.e_vpm;
  if (args.l_fields) plan.l_fields_m = *args.l_fields;
  if (args.perimeter) plan.perimeter_m = *args.perimeter;
  if (args.laser_hz) plan.laser_frequency_hz = *args.laser_hz;
  if (args.sensitivity) plan.sensitivity_per_sqrt_hz = *args.sensitivity;
  if (args.snr) plan.target_snr = *args.snr;

  auto table = ringsim::effects::CoefficientTable::builtin();
  if (!args.coeffs_path.empty()) {
    table = ringsim::coefficient_table_from_json(
        ringsim::load_json_file(args.coeffs_path));
  }
  ringsim::planner::validate(plan);

  if (!args.sweep_specs.empty()) {
    std::vector<double> b_values{plan.b_eff_t};
    std::vector<double> e_values{plan.e_rms_v_per_m};
    for (const auto& spec : args.sweep_specs) {
      if (!spec.empty() && spec[0] == 'B') {
        b_values = parse_sweep_axis(spec, 'B');
      } else if (!spec.empty() && spec[0] == 'E') {
        e_values = parse_sweep_axis(spec, 'E');
      } else {
        throw ConfigError("sweep spec '" + spec + "' must name axis B or E");
      }
    }
    if (args.out_path.empty()) {
      throw ConfigError("sweep mode needs --out for the CSV table");
    }
    const auto points = ringsim::planner::sweep(plan, b_values, e_values, table);
    std::ofstream out(args.out_path);
    if (!out) throw IoError("cannot open '" + args.out_path + "' for writing");
    out << "medium,B_T,E_Vpm,dn,dnu_Hz,T_snr1_s\n";
    for (const auto& p : points) {
      out << plan.medium << ',' << ringsim::format_sci(p.b_t) << ','
          << ringsim::format_sci(p.e_v_per_m) << ','
          << ringsim::format_sci(p.delta_n) << ','
          << ringsim::format_sci(p.delta_nu_hz) << ','
          << ringsim::format_sci(p.t_snr1_s) << '\n';
    }
    if (!out) throw IoError("write to '" + args.out_path + "' failed");
    std::cout << "wrote " << points.size() << " sweep points to "
              << args.out_path << '\n';
    return;
  }

  const double dn = ringsim::planner::expected_delta_n(plan, table);
  const double dnu = ringsim::planner::expected_signal(plan, table);
  const double t = ringsim::planner::time_to_snr(plan, table);
  const double unit_dn = ringsim::planner::dn_unit_sensitivity(plan, table);
  std::cout << "medium = " << plan.medium << '\n';
  std::cout << "fill_factor = " << shortest(ringsim::planner::fill_factor(plan))
            << '\n';
  std::cout << "delta_n_rms = " << ringsim::format_sci(dn) << '\n';
  std::cout << "delta_nu_rms_hz = " << ringsim::format_sci(dnu) << '\n';
  std::cout << "sensitivity_per_sqrt_hz = "
            << shortest(plan.sensitivity_per_sqrt_hz) << '\n';
  std::cout << "target_snr = " << shortest(plan.target_snr) << '\n';
  std::cout << "time_to_snr_s = " << ringsim::format_sci(t) << '\n';
  std::cout << "time_to_snr_h = " << ringsim::format_sci(t / 3600.0) << '\n';
  std::cout << "dn_unit_sensitivity = " << ringsim::format_sci(unit_dn) << '\n';
}

// --- tables -----------------------------------------------------------------

struct TablesArgs {
  std::string medium_filter;
  std::string coeffs_path;
  bool as_json = false;
};

void cmd_tables(const TablesArgs& args) {
  auto table = ringsim::effects::CoefficientTable::builtin();
  if (!args.coeffs_path.empty()) {
    table = ringsim::coefficient_table_from_json(
        ringsim::load_json_file(args.coeffs_path));
  }

  std::vector<ringsim::effects::CoefficientRecord> rows;
  if (args.medium_filter.empty()) {
    rows = table.records();
  } else {
    rows.push_back(table.lookup(args.medium_filter));
  }

  if (args.as_json) {
    ringsim::effects::CoefficientTable filtered;
    for (const auto& r : rows) filtered.insert(r);
    std::cout << ringsim::coefficient_table_to_json(filtered).dump(2) << '\n';
    return;
  }

  std::cout << "medium eta_melb eta_meda ref_pressure_pa ref_temperature_k "
               "ref_wavelength_m\n";
  for (const auto& r : rows) {
    std::cout << r.medium << ' ' << shortest(r.eta_melb) << ' '
              << (r.eta_meda ? shortest(*r.eta_meda) : std::string("-")) << ' '
              << (r.ref_pressure_pa ? shortest(*r.ref_pressure_pa)
                                    : std::string("-"))
              << ' '
              << (r.ref_temperature_k ? shortest(*r.ref_temperature_k)
                                      : std::string("-"))
              << ' ' << shortest(r.ref_wavelength_m) << '\n';
  }
}

// --- profile ----------------------------------------------------------------

struct ProfileArgs {
  std::string config_path;
  std::string out_path;
  double step_m = 1e-4;
};

void cmd_profile(const ProfileArgs& args) {
  ringsim::fields::RodGeometry geometry;
  if (!args.config_path.empty()) {
    const auto config = ringsim::load_config(args.config_path);
    if (!config.assembly.rods.empty()) geometry = config.assembly.rods.front();
  }
  ringsim::write_profile_csv(args.out_path, geometry, args.step_m);
  std::cout << "wrote " << args.out_path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual ring-cavity magneto-electric metrology bench"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate",
                                 "synthesize a run and write its traces");
  sim->add_option("--config", sim_args.config_path, "experiment config JSON")
      ->required();
  sim->add_option("--out", sim_args.out_dir,
                  "output directory (default: $RINGSIM_OUT_DIR or .)");
  sim->add_option("--seed", sim_args.seed, "override the config seed");

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate",
                                 "on/off estimate from a demodulated trace");
  est->add_option("--trace", est_args.trace_path, "demodulated trace CSV")
      ->required();
  est->add_option("--cal-before", est_args.cal_before_path,
                  "calibration run JSON taken before the trace");
  est->add_option("--cal-after", est_args.cal_after_path,
                  "calibration run JSON taken after the trace");
  est->add_option("--out", est_args.out_path, "write the estimate as JSON");
  est->add_option("--ledger", est_args.ledger_path,
                  "append the estimate to this CSV ledger");
  est->add_option("--gate-period", est_args.gate_period_s,
                  "gate period override in seconds");
  est->add_option("--settle", est_args.settle_s,
                  "settle time per half-period in seconds");
  est->add_flag("--two-sided", est_args.two_sided,
                "drift-cancelling off-on-off differencing");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "sensitivity and averaging-time plan");
  plan->add_option("--plan", plan_args.plan_path, "plan JSON document");
  plan->add_option("--coeffs", plan_args.coeffs_path, "coefficient table JSON");
  plan->add_option("--out", plan_args.out_path, "sweep CSV path");
  plan->add_option("--medium", plan_args.medium, "medium name");
  plan->add_option("--pressure-pa", plan_args.pressure_pa, "gas pressure");
  plan->add_option("--temperature-k", plan_args.temperature_k, "gas temperature");
  plan->add_option("--meda-ratio", plan_args.meda_ratio,
                   "directional/birefringence ratio fallback");
  plan->add_option("--b-t", plan_args.b_t, "effective magnetic field, T");
  plan->add_option("--e-vpm", plan_args.e_vpm, "rms electric field, V/m");
  plan->add_option("--l-fields", plan_args.l_fields, "field-filled length, m");
  plan->add_option("--perimeter", plan_args.perimeter, "cavity perimeter, m");
  plan->add_option("--nu", plan_args.laser_hz, "laser frequency, Hz");
  plan->add_option("--sensitivity", plan_args.sensitivity,
                   "relative frequency ASD, 1/sqrt(Hz)");
  plan->add_option("--snr", plan_args.snr, "target signal-to-noise ratio");
  plan->add_option("--sweep", plan_args.sweep_specs,
                   "axis sweep, e.g. B=0.5:0.5:15 or E=1e6:1e6:2e7");

  TablesArgs tables_args;
  auto* tables = app.add_subcommand("tables", "print the coefficient table");
  tables->add_option("--medium", tables_args.medium_filter, "single medium");
  tables->add_option("--coeffs", tables_args.coeffs_path,
                     "coefficient table JSON");
  tables->add_flag("--json", tables_args.as_json, "JSON output");

  ProfileArgs profile_args;
  auto* profile = app.add_subcommand("profile",
                                     "export the rod magnetic profile as CSV");
  profile->add_option("--config", profile_args.config_path,
                      "take the geometry from this config");
  profile->add_option("--out", profile_args.out_path, "profile CSV path")
      ->required();
  profile->add_option("--step", profile_args.step_m, "sample spacing, m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (sim->parsed()) return guarded([&] { cmd_simulate(sim_args); });
  if (est->parsed()) return guarded([&] { cmd_estimate(est_args); });
  if (plan->parsed()) return guarded([&] { cmd_plan(plan_args); });
  if (tables->parsed()) return guarded([&] { cmd_tables(tables_args); });
  if (profile->parsed()) return guarded([&] { cmd_profile(profile_args); });
  return 1;
}
