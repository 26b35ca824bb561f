#include "ringsim/trace_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringsim/errors.hpp"

namespace ringsim {

namespace {

std::string format_u64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

double parse_double(const std::string& text, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + path + "': malformed number '" + text + "'");
  }
}

}  // namespace

std::string format_sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", value);
  return buf;
}

void write_trace_csv(const std::string& path, const SignalTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  out << "# rate_hz," << format_sci(trace.rate_hz) << '\n';
  out << "# t0_s," << format_sci(trace.t0_s) << '\n';
  out << "# unit," << to_string(trace.unit) << '\n';
  out << "# seed," << format_u64(trace.seed) << '\n';
  out << "# config_digest," << trace.config_digest << '\n';
  out << "# gate_period_s," << format_sci(trace.gate_period_s) << '\n';
  out << "# gate_on_first," << (trace.gate_on_first ? 1 : 0) << '\n';
  out << "# mod_frequency_hz," << format_sci(trace.mod_frequency_hz) << '\n';
  out << "# lockin_tau_s," << format_sci(trace.lockin_tau_s) << '\n';
  out << "t_s,value\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    out << format_sci(trace.time_at(i)) << ',' << format_sci(trace.samples[i])
        << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

SignalTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  SignalTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line.rfind("# ", 0) == 0) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw ConfigError("'" + path + "': metadata row without a value: " + line);
      }
      const std::string key = line.substr(2, comma - 2);
      const std::string value = line.substr(comma + 1);
      if (key == "rate_hz") {
        trace.rate_hz = parse_double(value, path);
      } else if (key == "t0_s") {
        trace.t0_s = parse_double(value, path);
      } else if (key == "unit") {
        trace.unit = trace_unit_from_string(value);
      } else if (key == "seed") {
        trace.seed = std::stoull(value);
      } else if (key == "config_digest") {
        trace.config_digest = value;
      } else if (key == "gate_period_s") {
        trace.gate_period_s = parse_double(value, path);
      } else if (key == "gate_on_first") {
        trace.gate_on_first = value != "0";
      } else if (key == "mod_frequency_hz") {
        trace.mod_frequency_hz = parse_double(value, path);
      } else if (key == "lockin_tau_s") {
        trace.lockin_tau_s = parse_double(value, path);
      }
      continue;
    }

    if (!header_seen) {
      if (line != "t_s,value") {
        throw ConfigError("'" + path + "': expected header 't_s,value', got '" +
                          line + "'");
      }
      header_seen = true;
      continue;
    }

    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("'" + path + "': sample row without a comma: " + line);
    }
    trace.samples.push_back(parse_double(line.substr(comma + 1), path));
  }

  if (!header_seen) {
    throw ConfigError("'" + path + "': no 't_s,value' table found");
  }
  if (!(trace.rate_hz > 0.0)) {
    throw ConfigError("'" + path + "': missing or non-positive rate_hz metadata");
  }
  return trace;
}

void write_profile_csv(const std::string& path,
                       const fields::RodGeometry& geometry, double step_m) {
  if (!(step_m > 0.0)) throw ConfigError("profile step must be positive");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  const double half = fields::profile_extent(geometry);
  const auto n = static_cast<long long>(std::floor(half / step_m));
  out << "z_m,B_T\n";
  for (long long i = -n; i <= n; ++i) {
    const double z = static_cast<double>(i) * step_m;
    out << format_sci(z) << ',' << format_sci(fields::magnetic_profile(z, geometry))
        << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

void append_results_csv(const std::string& path,
                        const estimator::MeasurementEstimate& estimate,
                        const std::string& config_digest, std::uint64_t seed) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open '" + path + "' for appending");
  if (fresh) out << "value,sigma,unit,n_periods,config_digest,seed\n";
  out << format_sci(estimate.value) << ','
      << (std::isnan(estimate.sigma) ? std::string("nan")
                                     : format_sci(estimate.sigma))
      << ',' << to_string(estimate.unit) << ',' << estimate.n_periods << ','
      << config_digest << ',' << format_u64(seed) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace ringsim
