#pragma once

#include <cstdint>
#include <string>

namespace ppreg {

// Shortest decimal representation that round-trips to the same double.
// Every machine-readable CSV/JSON value goes through this so that re-parsing
// and re-emitting a file reproduces it byte for byte.
std::string format_double(double v);

std::string format_int(long long v);

// Parses a full string as a double; returns false on trailing garbage.
bool parse_double(const std::string& s, double& out);

}  // namespace ppreg
