#include "cilab/format.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "cilab/error.hpp"

namespace cilab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string join_doubles(std::span<const double> v, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += sep;
    out += format_double(v[k]);
  }
  return out;
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::Format, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_doubles(std::string_view s, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(sep, start);
    const auto tok = s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (tok.find_first_not_of(" \t") != std::string_view::npos) out.push_back(parse_double(tok));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace cilab
