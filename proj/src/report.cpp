#include "cilab/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ostream>
#include <sstream>

#include "cilab/error.hpp"
#include "cilab/format.hpp"

namespace cilab {

std::string Status::str() const {
  switch (kind) {
    case Kind::Ok: return "ok";
    case Kind::InadmissibleInput: return "inadmissible-input";
    case Kind::ClampedCells: return "clamped-cells(" + std::to_string(count) + ")";
    case Kind::BelowResolution: return "below-resolution";
  }
  return "ok";
}

Report Report::make(std::string estimate, double lhs, double rhs_scale) {
  Report r;
  r.estimate = std::move(estimate);
  r.lhs = lhs;
  r.rhs_scale = rhs_scale;
  r.ratio = rhs_scale > 0.0 ? lhs / rhs_scale : 0.0;
  return r;
}

Report& Report::add(std::string key, std::string value) {
  extra.emplace_back(std::move(key), std::move(value));
  return *this;
}

Report& Report::add(std::string key, double value) { return add(std::move(key), format_double(value)); }

Report& Report::add(std::string key, std::span<const double> values) {
  return add(std::move(key), join_doubles(values, ":"));
}

std::string Report::get(const std::string& key) const {
  for (const auto& [k, v] : extra) {
    if (k == key) return v;
  }
  return {};
}

void Report::downgrade(Status s) {
  if (status.kind == Status::Kind::InadmissibleInput) return;
  if (s.kind == Status::Kind::Ok) return;
  status = s;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

}  // namespace

std::string csv_row(const Report& r) {
  std::string extra;
  for (std::size_t k = 0; k < r.extra.size(); ++k) {
    if (k) extra += ';';
    extra += r.extra[k].first + "=" + r.extra[k].second;
  }
  std::string row = csv_field(r.estimate);
  for (const std::string& f : {format_double(r.lhs), format_double(r.rhs_scale), format_double(r.ratio),
                               r.status.str(), r.fingerprint, r.grid, extra}) {
    row += ',';
    row += csv_field(f);
  }
  return row;
}

void write_csv(std::ostream& os, std::span<const Report> reports) {
  os << kCsvHeader << '\n';
  for (const auto& r : reports) os << csv_row(r) << '\n';
}

std::string merge_csv(std::span<const std::string> contents) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& c : contents) {
    std::istringstream is(c);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (first) {
        first = false;
        if (line != kCsvHeader) throw Error(ErrorKind::Format, "CSV header mismatch: " + line);
        continue;
      }
      if (line.empty()) continue;
      out += line;
      out += '\n';
    }
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Format, "sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

}  // namespace cilab
