#include "ringsim/trace.hpp"

#include <stdexcept>

namespace ringsim {

std::string to_string(TraceUnit unit) {
  switch (unit) {
    case TraceUnit::volts: return "V";
    case TraceUnit::hertz: return "Hz";
    case TraceUnit::dimensionless: return "1";
  }
  throw std::logic_error("unreachable trace unit");
}

TraceUnit trace_unit_from_string(const std::string& text) {
  if (text == "V") return TraceUnit::volts;
  if (text == "Hz") return TraceUnit::hertz;
  if (text == "1") return TraceUnit::dimensionless;
  throw std::invalid_argument("unknown trace unit '" + text + "'");
}

}  // namespace ringsim
