#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "testing.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "ringsim/config_json.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/trace_io.hpp"

using namespace ringsim;

namespace {

// Per-process temp dir; tests may run in parallel across binaries.
std::filesystem::path temp_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("ringsim_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_text(const std::string& name, const std::string& text) {
  const auto path = temp_dir() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

ExperimentConfig exercised_config() {
  ExperimentConfig c;
  c.medium = "Ar";
  c.conditions.pressure_pa = 5e4;
  c.conditions.temperature_k = 300.0;
  c.meda_ratio = 0.7;
  c.assembly.rods.assign(2, fields::RodGeometry{});
  c.assembly.rods[0].plateau_b_t = 0.2125;
  c.assembly.rods[1].plateau_b_t = 0.2125;
  c.assembly.orientation_signs = {1, -1};
  c.assembly.drive_voltage_peak_v = 1500.0;
  c.assembly.drive_frequency_hz = 250.0;
  c.assembly.gate_period_s = 10.0;
  c.assembly.gate_duty = 0.4;
  c.assembly.gate_on_first = false;
  c.cavity.perimeter_m = 2.0;
  c.cavity.finesse = 15000.0;
  c.cavity.laser_frequency_hz = 4.741e14;
  c.noise.enabled = false;
  c.noise.shot_floor = 2e-18;
  c.noise.excess_factor = 2.5;
  c.noise.drift_rate = 1e-6;
  c.noise.seed = 77;
  c.pdh.slope_v_per_hz = 50.0;
  c.pdh.power_scale = 0.5;
  c.pdh.mod_frequency_hz = 5e6;
  c.lockin.tau_s = 0.5;
  c.lockin.phase_rad = 0.1;
  c.lockin.poles = 2;
  c.estimator.settle_s = 1.5;
  c.run.duration_s = 30.0;
  c.run.rate_hz = 5000.0;
  c.calibration.dnu_rms_hz = 5e-3;
  c.calibration.duration_s = 10.0;
  return c;
}

}  // namespace

TEST_CASE("experiment config JSON round trip") {
  SUBCASE("defaults") {
    const ExperimentConfig c;
    const auto j = to_json(c);
    const auto back = config_from_json(j);
    CHECK(to_json(back).dump() == j.dump());
  }
  SUBCASE("every field set away from its default") {
    const ExperimentConfig c = exercised_config();
    const auto back = config_from_json(to_json(c));
    CHECK(to_json(back).dump() == to_json(c).dump());

    CHECK(back.medium == "Ar");
    CHECK(back.assembly.rods.size() == 2);
    CHECK(back.assembly.rods[1].plateau_b_t == 0.2125);
    CHECK(back.assembly.orientation_signs == std::vector<int>{1, -1});
    CHECK(back.assembly.gate_on_first == false);
    CHECK(back.noise.seed == 77);
    CHECK(back.lockin.poles == 2);
    CHECK(back.calibration.dnu_rms_hz == 5e-3);
  }
  SUBCASE("an empty object yields the defaults") {
    const auto c = config_from_json(nlohmann::json::object());
    CHECK(to_json(c).dump() == to_json(ExperimentConfig{}).dump());
  }
  SUBCASE("a non-object document is rejected") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);
  }
  SUBCASE("type errors name the offending field") {
    nlohmann::json j;
    j["cavity"]["finesse"] = "high";
    try {
      config_from_json(j);
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("cavity.finesse") != std::string::npos);
    }
  }
}

TEST_CASE("config digest") {
  const ExperimentConfig base;
  const std::string d0 = config_digest(base);
  CHECK(d0.size() == 16);
  CHECK(d0.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(config_digest(base) == d0);

  SUBCASE("any field change moves the digest") {
    std::vector<std::function<void(ExperimentConfig&)>> mutations = {
        [](auto& c) { c.medium = "Ar"; },
        [](auto& c) { c.conditions.pressure_pa *= 2.0; },
        [](auto& c) { c.conditions.temperature_k += 1.0; },
        [](auto& c) { c.meda_ratio = 0.5; },
        [](auto& c) {
          c.assembly.rods.resize(2);
          c.assembly.orientation_signs.resize(2);
        },
        [](auto& c) { c.assembly.rods[0].length_m *= 2.0; },
        [](auto& c) { c.assembly.rods[0].aperture_m *= 2.0; },
        [](auto& c) { c.assembly.rods[0].electrode_gap_m *= 2.0; },
        [](auto& c) { c.assembly.rods[0].plateau_b_t = 0.2125; },
        [](auto& c) { c.assembly.rods[0].plateau_span_m *= 2.0; },
        [](auto& c) { c.assembly.rods[0].ramp_span_m *= 2.0; },
        [](auto& c) { c.assembly.rods[0].fringe_decay_m *= 2.0; },
        [](auto& c) { c.assembly.orientation_signs[3] = -1; },
        [](auto& c) { c.assembly.drive_voltage_peak_v = 1000.0; },
        [](auto& c) { c.assembly.drive_frequency_hz = 400.0; },
        [](auto& c) { c.assembly.gate_period_s = 10.0; },
        [](auto& c) { c.assembly.gate_duty = 0.25; },
        [](auto& c) { c.assembly.gate_on_first = false; },
        [](auto& c) { c.cavity.perimeter_m = 2.0; },
        [](auto& c) { c.cavity.finesse = 15000.0; },
        [](auto& c) { c.cavity.laser_frequency_hz = 4.741e14; },
        [](auto& c) { c.noise.enabled = false; },
        [](auto& c) { c.noise.shot_floor = 2e-18; },
        [](auto& c) { c.noise.excess_factor = 2.0; },
        [](auto& c) { c.noise.drift_rate = 1e-9; },
        [](auto& c) { c.noise.seed = 99; },
        [](auto& c) { c.pdh.slope_v_per_hz = 50.0; },
        [](auto& c) { c.pdh.power_scale = 2.0; },
        [](auto& c) { c.pdh.mod_frequency_hz = 5e6; },
        [](auto& c) { c.lockin.tau_s = 0.5; },
        [](auto& c) { c.lockin.phase_rad = 0.1; },
        [](auto& c) { c.lockin.poles = 3; },
        [](auto& c) { c.estimator.settle_s = 2.0; },
        [](auto& c) { c.run.duration_s = 30.0; },
        [](auto& c) { c.run.rate_hz = 5000.0; },
        [](auto& c) { c.calibration.enabled = false; },
        [](auto& c) { c.calibration.dnu_rms_hz = 1e-3; },
        [](auto& c) { c.calibration.duration_s = 15.0; },
    };

    std::set<std::string> digests = {d0};
    for (const auto& mutate : mutations) {
      ExperimentConfig c;
      mutate(c);
      digests.insert(config_digest(c));
    }
    CHECK(digests.size() == mutations.size() + 1);
  }
}

TEST_CASE("coefficient table JSON") {
  const auto& builtin = effects::CoefficientTable::builtin();
  const auto j = coefficient_table_to_json(builtin);
  const auto back = coefficient_table_from_json(j);

  REQUIRE(back.records().size() == builtin.records().size());
  for (std::size_t i = 0; i < builtin.records().size(); ++i) {
    const auto& a = builtin.records()[i];
    const auto& b = back.records()[i];
    CHECK(b.medium == a.medium);
    CHECK(b.eta_melb == a.eta_melb);
    CHECK(b.eta_meda == a.eta_meda);
    CHECK(b.ref_pressure_pa == a.ref_pressure_pa);
    CHECK(b.ref_temperature_k == a.ref_temperature_k);
    CHECK(b.ref_wavelength_m == a.ref_wavelength_m);
  }

  SUBCASE("records need a medium and a coefficient") {
    const auto bad = nlohmann::json::parse(R"([{"medium": "He"}])");
    CHECK_THROWS_AS(coefficient_table_from_json(bad), ConfigError);
  }
  SUBCASE("reference pressure and temperature come as a pair") {
    const auto bad = nlohmann::json::parse(
        R"([{"medium": "He", "eta_melb": 1.6e-24, "ref_pressure_pa": 1e5}])");
    CHECK_THROWS_AS(coefficient_table_from_json(bad), ConfigError);
  }
  SUBCASE("the document must be an array") {
    CHECK_THROWS_AS(coefficient_table_from_json(nlohmann::json::object()),
                    ConfigError);
  }
}

TEST_CASE("plan JSON") {
  planner::ExperimentPlan p;
  p.medium = "vacuum";
  p.b_eff_t = 15.0;
  p.e_rms_v_per_m = 2e7;
  p.sensitivity_per_sqrt_hz = 1.9e-21;
  p.target_snr = 3.0;

  const auto back = plan_from_json(plan_to_json(p));
  CHECK(back.medium == "vacuum");
  CHECK(back.b_eff_t == 15.0);
  CHECK(back.e_rms_v_per_m == 2e7);
  CHECK(back.sensitivity_per_sqrt_hz == 1.9e-21);
  CHECK(back.target_snr == 3.0);
  CHECK(back.meda_ratio == p.meda_ratio);

  SUBCASE("an absent fallback ratio keeps its default") {
    const auto j = nlohmann::json::object();
    const auto q = plan_from_json(j);
    REQUIRE(q.meda_ratio.has_value());
    CHECK(*q.meda_ratio == 1.0);
  }
  SUBCASE("a non-object document is rejected") {
    CHECK_THROWS_AS(plan_from_json(nlohmann::json::array()), ConfigError);
  }
}

TEST_CASE("calibration JSON") {
  estimator::CalibrationRun run;
  run.dnu_rms_hz = 6.5e-3;
  run.measured_level_v = 0.65123;
  run.time_s = 30.0;

  const auto back = calibration_from_json(calibration_to_json(run));
  CHECK(back.dnu_rms_hz == 6.5e-3);
  CHECK(back.measured_level_v == 0.65123);
  CHECK(back.time_s == 30.0);

  SUBCASE("all three keys are required") {
    auto j = calibration_to_json(run);
    j.erase("time_s");
    CHECK_THROWS_AS(calibration_from_json(j), ConfigError);
  }
}

TEST_CASE("estimate JSON") {
  estimator::MeasurementEstimate e;
  e.value = 3.8e-3;
  e.sigma = 2e-4;
  e.n_periods = 9;
  e.unit = TraceUnit::hertz;

  SUBCASE("plain estimate") {
    const auto j = estimate_to_json(e);
    CHECK(j.at("value").get<double>() == 3.8e-3);
    CHECK(j.at("sigma").get<double>() == 2e-4);
    CHECK(j.at("n_periods").get<std::size_t>() == 9);
    CHECK(j.at("unit").get<std::string>() == "Hz");
    CHECK(!j.contains("calibration"));
  }
  SUBCASE("an undefined sigma serializes as null") {
    e.sigma = std::numeric_limits<double>::quiet_NaN();
    CHECK(estimate_to_json(e).at("sigma").is_null());
  }
  SUBCASE("calibration details ride along when supplied") {
    estimator::CalibrationInfo info;
    info.before_v_per_hz = 100.5;
    info.after_v_per_hz = 99.5;
    info.interpolated_v_per_hz = 100.0;
    info.time_s = 30.0;
    const auto j = estimate_to_json(e, &info);
    CHECK(j.at("calibration").at("interpolated_v_per_hz").get<double>() == 100.0);
    CHECK(j.at("calibration").at("time_s").get<double>() == 30.0);
  }
}

TEST_CASE("JSON file handling") {
  SUBCASE("a missing file is an I/O error") {
    CHECK_THROWS_AS(load_json_file((temp_dir() / "absent.json").string()),
                    IoError);
    CHECK_THROWS_AS(load_config((temp_dir() / "absent.json").string()), IoError);
  }
  SUBCASE("malformed JSON is a config error naming the file") {
    const auto path = write_text("broken.json", "{ not json");
    try {
      load_json_file(path);
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
    }
  }
  SUBCASE("save and load round trip") {
    const auto path = (temp_dir() / "cfg.json").string();
    save_json_file(path, to_json(exercised_config()));
    const auto c = load_config(path);
    CHECK(to_json(c).dump() == to_json(exercised_config()).dump());
  }
}

TEST_CASE("scientific formatting") {
  CHECK(format_sci(0.0) == "0.000000000000e+00");
  CHECK(format_sci(-2.5e-3) == "-2.500000000000e-03");
  CHECK(format_sci(3.810628495853e-3) == "3.810628495853e-03");
}

TEST_CASE("trace CSV round trip") {
  SignalTrace t;
  t.rate_hz = 10000.0;
  t.t0_s = 0.0;
  t.unit = TraceUnit::volts;
  t.seed = 42;
  t.config_digest = "00bada55deadbeef";
  t.gate_period_s = 4.0;
  t.gate_on_first = false;
  t.mod_frequency_hz = 300.0;
  t.lockin_tau_s = 0.2;
  t.samples = {0.0, 1.5e-3, -2.75, 3.810628495853e-3, 1e-17, -9.9e4};

  const auto path = (temp_dir() / "trace.csv").string();
  write_trace_csv(path, t);
  const SignalTrace back = read_trace_csv(path);

  CHECK(back.rate_hz == 10000.0);
  CHECK(back.t0_s == 0.0);
  CHECK(back.unit == TraceUnit::volts);
  CHECK(back.seed == 42);
  CHECK(back.config_digest == "00bada55deadbeef");
  CHECK(back.gate_period_s == 4.0);
  CHECK(back.gate_on_first == false);
  CHECK(back.mod_frequency_hz == 300.0);
  CHECK(back.lockin_tau_s == 0.2);

  REQUIRE(back.samples.size() == t.samples.size());
  CHECK(back.samples[0] == 0.0);
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    CHECK(back.samples[i] == rel(t.samples[i], 1e-11));
  }

  SUBCASE("rewriting the parsed trace reproduces the file byte for byte") {
    const auto again = (temp_dir() / "trace2.csv").string();
    write_trace_csv(again, back);
    std::ifstream a(path), b(again);
    const std::string text_a((std::istreambuf_iterator<char>(a)),
                             std::istreambuf_iterator<char>());
    const std::string text_b((std::istreambuf_iterator<char>(b)),
                             std::istreambuf_iterator<char>());
    CHECK(text_a == text_b);
  }
}

TEST_CASE("trace CSV parsing tolerances and failure modes") {
  SUBCASE("windows line endings parse cleanly") {
    const auto path = write_text(
        "crlf.csv",
        "# rate_hz,1.000000000000e+03\r\n# unit,Hz\r\nt_s,value\r\n"
        "0.000000000000e+00,2.000000000000e+00\r\n");
    const auto t = read_trace_csv(path);
    CHECK(t.rate_hz == 1000.0);
    CHECK(t.unit == TraceUnit::hertz);
    REQUIRE(t.samples.size() == 1);
    CHECK(t.samples[0] == 2.0);
  }
  SUBCASE("unknown metadata keys are ignored") {
    const auto path = write_text(
        "extra.csv",
        "# rate_hz,1.000000000000e+03\n# operator,someone\nt_s,value\n0,1\n");
    CHECK(read_trace_csv(path).samples.size() == 1);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_trace_csv((temp_dir() / "absent.csv").string()),
                    IoError);
  }
  SUBCASE("wrong table header") {
    const auto path =
        write_text("badheader.csv", "# rate_hz,1e3\ntime,volts\n0,1\n");
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
  }
  SUBCASE("no table at all") {
    const auto path = write_text("notable.csv", "# rate_hz,1e3\n");
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
  }
  SUBCASE("malformed sample value") {
    const auto path =
        write_text("badnum.csv", "# rate_hz,1e3\nt_s,value\n0,fast\n");
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
  }
  SUBCASE("missing rate metadata") {
    const auto path = write_text("norate.csv", "t_s,value\n0,1\n");
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
  }
  SUBCASE("metadata row without a value") {
    const auto path = write_text("nometa.csv", "# rate_hz\nt_s,value\n0,1\n");
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
  }
}

TEST_CASE("field profile CSV") {
  const auto path = (temp_dir() / "profile.csv").string();
  write_profile_csv(path, fields::RodGeometry{}, 1e-3);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "z_m,B_T");

  std::size_t rows = 0;
  double peak = 0.0;
  std::string peak_z;
  while (std::getline(in, line)) {
    ++rows;
    const auto comma = line.find(',');
    const double b = std::stod(line.substr(comma + 1));
    if (b > peak) {
      peak = b;
      peak_z = line.substr(0, comma);
    }
  }
  // floor(0.1605 / 1e-3) = 160 points per side plus the centre.
  CHECK(rows == 321);
  CHECK(peak == rel(fields::profile_amplitude(fields::RodGeometry{}), 1e-9));
  CHECK(peak_z == format_sci(0.0));

  SUBCASE("step must be positive") {
    CHECK_THROWS_AS(write_profile_csv(path, fields::RodGeometry{}, 0.0),
                    ConfigError);
  }
}

TEST_CASE("results ledger CSV") {
  const auto path = (temp_dir() / "results.csv").string();
  std::filesystem::remove(path);

  estimator::MeasurementEstimate e;
  e.value = 3.8e-3;
  e.sigma = 2e-4;
  e.n_periods = 9;
  e.unit = TraceUnit::hertz;
  append_results_csv(path, e, "deadbeef00000000", 42);

  e.sigma = std::numeric_limits<double>::quiet_NaN();
  append_results_csv(path, e, "deadbeef00000000", 43);

  std::ifstream in(path);
  std::string header, row1, row2, extra;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  const bool more = static_cast<bool>(std::getline(in, extra));

  CHECK(header == "value,sigma,unit,n_periods,config_digest,seed");
  CHECK(row1 ==
        "3.800000000000e-03,2.000000000000e-04,Hz,9,deadbeef00000000,42");
  CHECK(row2 == "3.800000000000e-03,nan,Hz,9,deadbeef00000000,43");
  CHECK(!more);
}
