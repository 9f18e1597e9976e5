#include "pcl/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <stdexcept>

#include "pcl/errors.hpp"

namespace pcl {

double round9(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

std::string format_real(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

namespace {

const char* bool_name(bool b) { return b ? "true" : "false"; }

std::string join_semicolon(const std::vector<std::uint32_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string per_prime_cell(const CorrelationRecord& c) {
  std::string out;
  for (std::size_t i = 0; i < c.per_prime.size(); ++i) {
    if (i != 0) out += ';';
    out += std::to_string(c.per_prime[i].first);
    out += ':';
    out += format_real(c.per_prime[i].second);
  }
  return out;
}

}  // namespace

std::string csv_header(RowSchema schema) {
  switch (schema) {
    case RowSchema::Full:
      return "N,class,r_upsilon,r_lambda0,r_lambda,noncoprime,coprime,denominator,"
             "ratio_K,goldbach,relaxed_goldbach,conjecture1,failing_primes,s_of_N,"
             "hl_residual";
    case RowSchema::Theorem:
      return "N,class,r_upsilon,noncoprime,coprime,denominator,ratio_K";
    case RowSchema::Conjecture:
      return "N,class,denominator,conjecture1,failing_primes,per_prime";
  }
  return "";
}

std::string csv_row(const SweepRecord& r, RowSchema schema) {
  const CorrelationRecord& co = r.corr;
  const ClaimReport& cl = r.claim;
  std::string ratio = cl.ratio_K.has_value() ? format_real(*cl.ratio_K) : "";
  std::string conj =
      cl.conjecture1_holds.has_value() ? bool_name(*cl.conjecture1_holds) : "";
  std::string row = std::to_string(co.N) + ',' + nclass_name(cl.nclass);
  switch (schema) {
    case RowSchema::Full:
      row += ',' + format_real(co.r_upsilon) + ',' + format_real(co.r_lambda0) + ',' +
             format_real(co.r_lambda) + ',' + format_real(co.noncoprime_part) + ',' +
             format_real(co.coprime_part) + ',' + format_real(co.denominator) + ',' +
             ratio + ',' + bool_name(cl.goldbach) + ',' + bool_name(cl.relaxed_goldbach) +
             ',' + conj + ',' + join_semicolon(cl.failing_primes) + ',' +
             format_real(r.hl.s_of_n) + ',' + format_real(r.hl.normalized);
      break;
    case RowSchema::Theorem:
      row += ',' + format_real(co.r_upsilon) + ',' + format_real(co.noncoprime_part) +
             ',' + format_real(co.coprime_part) + ',' + format_real(co.denominator) +
             ',' + ratio;
      break;
    case RowSchema::Conjecture:
      row += ',' + format_real(co.denominator) + ',' + conj + ',' +
             join_semicolon(cl.failing_primes) + ',' + per_prime_cell(co);
      break;
  }
  return row;
}

nlohmann::ordered_json record_json(const SweepRecord& r, RowSchema schema) {
  const CorrelationRecord& co = r.corr;
  const ClaimReport& cl = r.claim;
  nlohmann::ordered_json j;
  j["N"] = co.N;
  j["class"] = nclass_name(cl.nclass);
  auto ratio = cl.ratio_K.has_value() ? nlohmann::ordered_json(round9(*cl.ratio_K))
                                      : nlohmann::ordered_json(nullptr);
  auto conj = cl.conjecture1_holds.has_value()
                  ? nlohmann::ordered_json(*cl.conjecture1_holds)
                  : nlohmann::ordered_json(nullptr);
  switch (schema) {
    case RowSchema::Full:
      j["r_upsilon"] = round9(co.r_upsilon);
      j["r_lambda0"] = round9(co.r_lambda0);
      j["r_lambda"] = round9(co.r_lambda);
      j["noncoprime"] = round9(co.noncoprime_part);
      j["coprime"] = round9(co.coprime_part);
      j["denominator"] = round9(co.denominator);
      j["ratio_K"] = ratio;
      j["goldbach"] = cl.goldbach;
      j["relaxed_goldbach"] = cl.relaxed_goldbach;
      j["conjecture1"] = conj;
      j["failing_primes"] = cl.failing_primes;
      j["s_of_N"] = round9(r.hl.s_of_n);
      j["hl_residual"] = round9(r.hl.normalized);
      break;
    case RowSchema::Theorem:
      j["r_upsilon"] = round9(co.r_upsilon);
      j["noncoprime"] = round9(co.noncoprime_part);
      j["coprime"] = round9(co.coprime_part);
      j["denominator"] = round9(co.denominator);
      j["ratio_K"] = ratio;
      break;
    case RowSchema::Conjecture: {
      j["denominator"] = round9(co.denominator);
      j["conjecture1"] = conj;
      j["failing_primes"] = cl.failing_primes;
      nlohmann::ordered_json pp;
      for (const auto& [p, s] : co.per_prime) pp[std::to_string(p)] = round9(s);
      j["per_prime"] = std::move(pp);
      break;
    }
  }
  return j;
}

ReportWriter::ReportWriter(std::ostream& os, OutputFormat format, RowSchema schema,
                           std::string timestamp, std::uint64_t json_cap)
    : os_(&os),
      format_(format),
      schema_(schema),
      timestamp_(std::move(timestamp)),
      json_cap_(json_cap) {}

void ReportWriter::begin() {
  if (begun_) return;
  begun_ = true;
  switch (format_) {
    case OutputFormat::Csv:
      if (!timestamp_.empty()) *os_ << "# generated: " << timestamp_ << "\n";
      *os_ << csv_header(schema_) << "\n";
      break;
    case OutputFormat::Json:
      *os_ << "[";
      break;
    case OutputFormat::Jsonl:
      break;
  }
}

void ReportWriter::write(const SweepRecord& r) {
  if (finished_) throw std::logic_error("ReportWriter: write after finish");
  if (format_ == OutputFormat::Json && count_ >= json_cap_)
    throw resource_limit_error(
        "ReportWriter: JSON array exceeds the record cap; use JSONL for large sweeps");
  begin();
  switch (format_) {
    case OutputFormat::Csv:
      *os_ << csv_row(r, schema_) << "\n";
      break;
    case OutputFormat::Json:
      *os_ << (count_ == 0 ? "\n" : ",\n") << record_json(r, schema_).dump();
      break;
    case OutputFormat::Jsonl:
      *os_ << record_json(r, schema_).dump() << "\n";
      break;
  }
  ++count_;
}

void ReportWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (format_ == OutputFormat::Json) {
    begin();  // an empty sweep still yields a valid document: []
    *os_ << (count_ == 0 ? "]\n" : "\n]\n");
  }
  os_->flush();
}

std::string summary_text(const SweepSummary& s, const std::string& timestamp) {
  std::string out = "# sweep summary\n";
  if (!timestamp.empty()) out += "generated: " + timestamp + "\n";
  auto num = [](std::uint64_t v) { return std::to_string(v); };
  auto list = [](const std::vector<std::uint64_t>& v) {
    std::string t = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i != 0) t += ' ';
      t += std::to_string(v[i]);
    }
    return t + "]";
  };
  out += "lo=" + num(s.lo) + " hi=" + num(s.hi) + " records=" + num(s.records) + "\n";
  out += "class_counts small=" + num(s.n_small) + " two_p=" + num(s.n_two_p) +
         " general=" + num(s.n_general) + "\n";
  out += "goldbach_failures=" + num(s.goldbach_failures) +
         " first=" + list(s.goldbach_failure_first) + "\n";
  out += "relaxed_failures=" + num(s.relaxed_failures) +
         " first=" + list(s.relaxed_failure_first) + "\n";
  out += "conjecture1_applicable=" + num(s.conjecture1_applicable) + "\n";
  out += "conjecture1_counterexamples=" + num(s.conjecture1_counterexamples) + " first=[";
  for (std::size_t i = 0; i < s.conjecture1_first.size(); ++i) {
    if (i != 0) out += ' ';
    out += std::to_string(s.conjecture1_first[i].N) + "(";
    out += join_semicolon(s.conjecture1_first[i].failing) + ")";
  }
  out += "]\n";
  out += "conjecture1_twop_failures=" + num(s.conjecture1_twop_failures) + "\n";
  out += "two_p_near_misses=" + num(s.two_p_near_misses) +
         " first=" + list(s.two_p_near_miss_first) + "\n";
  out += "bridge_violations=" + num(s.bridge_violations) + "\n";
  out += "converse_violations=" + num(s.converse_violations) + "\n";
  out += "remark_fwd_violations=" + num(s.remark_fwd_violations) + "\n";
  out += "remark_rev_violations=" + num(s.remark_rev_violations) + "\n";
  out += "ratio_k count=" + num(s.k_count);
  if (s.k_count > 0)
    out += " min=" + format_real(s.k_min) + " max=" + format_real(s.k_max);
  out += " underflow=" + num(s.k_underflow) + " overflow=" + num(s.k_overflow) + "\n";
  for (std::size_t i = 0; i < s.k_hist.size(); ++i) {
    if (s.k_hist[i] == 0) continue;
    char label[64];
    double lo = SweepSummary::kHistLo + (double)i * SweepSummary::kHistStep;
    std::snprintf(label, sizeof label, "k_hist log10[%.2f,%.2f)=", lo,
                  lo + SweepSummary::kHistStep);
    out += label + num(s.k_hist[i]) + "\n";
  }
  if (s.max_residual_n != 0)
    out += "max_abs_normalized_residual=" + format_real(s.max_abs_normalized_residual) +
           " at_n=" + num(s.max_residual_n) + "\n";
  else
    out += "max_abs_normalized_residual=none\n";
  return out;
}

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace pcl
