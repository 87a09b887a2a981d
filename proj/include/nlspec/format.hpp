#pragma once

#include <string>
#include <string_view>

namespace nlspec {

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);

/// Strict decimal parse of the whole string; throws InvalidArgument otherwise.
double parse_double(std::string_view text);

}  // namespace nlspec
