#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <json.hpp>

#include "pcl/claim_checker.hpp"

namespace pcl {

enum class OutputFormat { Csv, Json, Jsonl };
enum class RowSchema { Full, Theorem, Conjecture };

// Reals are carried as "9 significant digits" values in every format.
// round9 is idempotent (round9(round9(x)) == round9(x)), so a CSV cell and
// a JSON number produced from the same record parse back to the same double.
double round9(double x);
std::string format_real(double x);  // printf %.9g

std::string csv_header(RowSchema schema);
std::string csv_row(const SweepRecord& r, RowSchema schema);
nlohmann::ordered_json record_json(const SweepRecord& r, RowSchema schema);

// Streaming writer: no document object is held, so JSONL/CSV output is O(1)
// in memory. A JSON array additionally enforces a record cap because the
// result is meant to be loaded whole by consumers.
class ReportWriter {
 public:
  static constexpr std::uint64_t kDefaultJsonCap = 1000000;

  // timestamp: empty = no timestamp line. Only CSV carries the timestamp
  // (as a leading "# generated: <ISO-8601>" comment); JSON documents stay
  // comment-free so they remain machine-parseable and byte-reproducible.
  ReportWriter(std::ostream& os, OutputFormat format, RowSchema schema,
               std::string timestamp = "", std::uint64_t json_cap = kDefaultJsonCap);

  void write(const SweepRecord& r);
  void finish();  // idempotent; closes the JSON array ("[]" when empty)
  std::uint64_t written() const { return count_; }

 private:
  void begin();

  std::ostream* os_;
  OutputFormat format_;
  RowSchema schema_;
  std::string timestamp_;
  std::uint64_t json_cap_;
  std::uint64_t count_ = 0;
  bool begun_ = false;
  bool finished_ = false;
};

// Deterministic human-readable block (key=value lines, %.9g reals).
// timestamp: empty = omit the generated: line.
std::string summary_text(const SweepSummary& s, const std::string& timestamp = "");

std::string iso8601_utc_now();

}  // namespace pcl
