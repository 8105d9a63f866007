#pragma once

#include <string>

#include "rtst/types.hpp"

namespace rtst {

// JSON text for an instance. Numbers are written as shortest-round-trip
// decimal strings so fixtures survive byte-exact; matrices are row-major.
std::string save_instance(const Instance& inst);

// Parses and validates an instance. Numeric fields accept plain JSON
// numbers as well as decimal strings. Throws ValidationError on malformed
// input, naming the offending field.
Instance parse_instance(const std::string& text);

Instance load_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

// Shortest decimal string that reads back to exactly the same double.
std::string format_number(double v);

}  // namespace rtst
