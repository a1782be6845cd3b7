#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cilab {

/// Closed status list of a verification record.
struct Status {
  enum class Kind { Ok, InadmissibleInput, ClampedCells, BelowResolution };
  Kind kind = Kind::Ok;
  std::int64_t count = 0;  // clamped cells

  static Status ok() { return {}; }
  static Status inadmissible() { return {Kind::InadmissibleInput, 0}; }
  static Status clamped(std::int64_t k) { return {Kind::ClampedCells, k}; }
  static Status below_resolution() { return {Kind::BelowResolution, 0}; }

  std::string str() const;
  friend bool operator==(const Status&, const Status&) = default;
};

/// One verification record: both sides of an estimate and their ratio.
struct Report {
  std::string estimate;
  double lhs = 0.0;
  double rhs_scale = 0.0;
  double ratio = 0.0;
  Status status;
  std::string fingerprint;
  std::string grid;
  std::vector<std::pair<std::string, std::string>> extra;

  /// ratio = lhs / rhs_scale when rhs_scale > 0, else 0.
  static Report make(std::string estimate, double lhs, double rhs_scale);

  Report& add(std::string key, std::string value);
  Report& add(std::string key, double value);
  Report& add(std::string key, std::span<const double> values);
  /// Value of an extra key, or empty.
  std::string get(const std::string& key) const;
  /// Downgrade status unless it already records a stronger condition.
  void downgrade(Status s);
};

inline constexpr const char* kCsvHeader = "estimate,lhs,rhs_scale,ratio,status,fingerprint,grid,extra";

std::string csv_row(const Report& r);
void write_csv(std::ostream& os, std::span<const Report> reports);

/// Concatenate CSV files, keeping a single header line.
std::string merge_csv(std::span<const std::string> contents);

/// SHA-256 hex digest of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace cilab
