#include "cilab/config.hpp"

#include <fstream>
#include <sstream>

#include "cilab/error.hpp"
#include "cilab/format.hpp"

namespace cilab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Format, "config line " + std::to_string(number) + ": no '='");
    c.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Format, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::Format, "override needs key=value: " + assignment);
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string Config::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorKind::Format, "missing config key '" + key + "'");
  return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::num(const std::string& key) const { return parse_double(str(key)); }

double Config::num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

std::int64_t Config::integer(const std::string& key) const {
  const std::string s = str(key);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Format, "key '" + key + "' is not an integer: " + s);
  }
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> Config::nums(const std::string& key) const {
  std::string s = str(key);
  for (auto& ch : s) {
    if (ch == ' ' || ch == '\t') ch = ',';
  }
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_double(tok));
  }
  return out;
}

std::vector<double> Config::nums(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? nums(key) : fallback;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

}  // namespace cilab
