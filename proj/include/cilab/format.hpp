#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cilab {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string join_doubles(std::span<const double> v, std::string_view sep);

/// strtod-style parse of a full token; throws Format on trailing garbage.
double parse_double(std::string_view s);
std::vector<double> parse_doubles(std::string_view s, char sep);

}  // namespace cilab
