#pragma once

// CSV input/output. Trace files carry their metadata in leading '# key,value'
// rows followed by a 't_s,value' table; all floats are written as %.12e so
// identical runs produce byte-identical files.

#include <string>
#include <vector>

#include "ringsim/estimator.hpp"
#include "ringsim/fields.hpp"
#include "ringsim/trace.hpp"

namespace ringsim {

std::string format_sci(double value);

void write_trace_csv(const std::string& path, const SignalTrace& trace);
SignalTrace read_trace_csv(const std::string& path);

void write_profile_csv(const std::string& path,
                       const fields::RodGeometry& geometry, double step_m);

// Appends one row per estimate to a running ledger, creating the file with a
// header when needed.
void append_results_csv(const std::string& path,
                        const estimator::MeasurementEstimate& estimate,
                        const std::string& config_digest,
                        std::uint64_t seed);

}  // namespace ringsim
