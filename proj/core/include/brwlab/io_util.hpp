#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace brwlab {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double x);

/// Strict parse of a full token; throws std::invalid_argument.
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace brwlab
