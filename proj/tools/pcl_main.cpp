#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pcl/claim_checker.hpp"
#include "pcl/correlations.hpp"
#include "pcl/prime_table.hpp"
#include "pcl/report_io.hpp"
#include "pcl/singular_series.hpp"
#include "pcl/weights.hpp"

namespace {

using namespace pcl;

struct GlobalOpts {
  std::uint64_t limit = 1000000;
  std::uint64_t lo = 8;
  std::uint64_t hi = 0;  // 0 = limit
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string format = "csv";
  std::string output;  // empty = stdout
  std::string cache;   // empty = no cache; env PCL_CACHE supplies a default
  std::string klass;   // "", "small", "two_p", "general"
  std::string claims;  // comma list; empty = subcommand default
  std::string weights = "lambda,lambda0,upsilon";
  std::string engine = "direct";
  std::uint64_t product_limit = 0;  // 0 = limit
  bool allow_uncertified = false;
  bool no_timestamp = false;
};

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "jsonl") return OutputFormat::Jsonl;
  throw std::invalid_argument("unknown format: " + s);
}

std::optional<NClass> parse_class(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "small") return NClass::Small;
  if (s == "two_p") return NClass::TwoP;
  if (s == "general") return NClass::General;
  throw std::invalid_argument("unknown class: " + s);
}

BatchEngine parse_engine(const std::string& s) {
  if (s == "direct") return BatchEngine::Direct;
  if (s == "convolution") return BatchEngine::Convolution;
  throw std::invalid_argument("unknown engine: " + s);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<WeightKind> parse_weights(const std::string& s) {
  bool lam = false, lam0 = false, ups = false;
  for (const auto& w : split_list(s)) {
    if (w == "lambda") lam = true;
    else if (w == "lambda0") lam0 = true;
    else if (w == "upsilon") ups = true;
    else throw std::invalid_argument("unknown weight: " + w);
  }
  std::vector<WeightKind> out;  // canonical column order
  if (lam) out.push_back(WeightKind::VonMangoldt);
  if (lam0) out.push_back(WeightKind::Truncated);
  if (ups) out.push_back(WeightKind::Master);
  if (out.empty()) throw std::invalid_argument("no weights selected");
  return out;
}

const char* weight_column(WeightKind k) {
  switch (k) {
    case WeightKind::VonMangoldt: return "lambda";
    case WeightKind::Truncated: return "lambda0";
    case WeightKind::Master: return "upsilon";
  }
  return "";
}

PrimeTable load_or_build(const GlobalOpts& g) {
  if (!g.cache.empty() && std::filesystem::exists(g.cache)) {
    PrimeTable t = load_prime_table(g.cache);
    if (t.limit < g.limit)
      throw std::invalid_argument("cache '" + g.cache + "' covers only limit " +
                                  std::to_string(t.limit) + " < requested " +
                                  std::to_string(g.limit));
    return t;
  }
  PrimeTable t = build_prime_table(g.limit);
  if (!g.cache.empty()) save_prime_table(t, g.cache);
  return t;
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* records = &std::cout;
  std::ostream* summary = &std::cerr;

  explicit OutputTarget(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    records = &file;
    summary = &std::cout;
  }

  void close() {
    if (!file.is_open()) return;
    file.close();
    if (!file) throw std::runtime_error("failed writing output file");
  }
};

int cmd_sieve(const GlobalOpts& g) {
  PrimeTable t;
  if (!g.cache.empty() && std::filesystem::exists(g.cache)) {
    t = load_prime_table(g.cache);
    if (t.limit != g.limit) {  // stale cache for this request: rebuild it
      t = build_prime_table(g.limit);
      save_prime_table(t, g.cache);
    }
  } else {
    t = build_prime_table(g.limit);
    if (!g.cache.empty()) save_prime_table(t, g.cache);
  }
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016llx", (unsigned long long)table_checksum(t));
  std::cout << "limit=" << t.limit << " entries=" << t.spf.size()
            << " primes=" << t.primes.size() << " checksum=" << sum << "\n";
  return 0;
}

int cmd_eval(const GlobalOpts& g, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("eval: n must be >= 1");
  if (n > g.limit)
    throw std::invalid_argument("eval: n exceeds --limit " + std::to_string(g.limit));
  PrimeTable t = load_or_build(g);
  nlohmann::ordered_json j;
  j["lambda"] = round9(lambda(t, n));
  j["lambda0"] = round9(lambda0(t, n));
  j["upsilon"] = round9(upsilon(t, n));
  j["omega"] = big_omega(t, n);
  j["phi"] = euler_phi(t, n);
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_correlate(const GlobalOpts& g) {
  std::uint64_t hi = g.hi == 0 ? g.limit : g.hi;
  if (g.lo < 2 || g.lo > hi || hi > g.limit)
    throw std::invalid_argument("correlate: need 2 <= lo <= hi <= limit");
  PrimeTable t = load_or_build(g);
  WeightTable lam = build_weight_table(t, WeightKind::VonMangoldt, g.limit);
  WeightTable lam0 = build_weight_table(t, WeightKind::Truncated, g.limit);
  WeightTable ups = build_weight_table(t, WeightKind::Master, g.limit);
  Correlator c(t, lam, lam0, ups);

  auto kinds = parse_weights(g.weights);
  BatchEngine engine = parse_engine(g.engine);
  std::vector<std::vector<double>> cols;
  cols.reserve(kinds.size());
  for (WeightKind k : kinds)
    cols.push_back(c.batch(k, hi, engine, g.allow_uncertified, g.threads));

  OutputTarget out(g.output);
  std::string header = "N";
  for (WeightKind k : kinds) header += std::string(",") + weight_column(k);
  *out.records << header << "\n";
  for (std::uint64_t N = g.lo; N <= hi; ++N) {
    std::string row = std::to_string(N);
    for (const auto& col : cols) row += "," + format_real(col[N]);
    *out.records << row << "\n";
  }
  out.close();
  return 0;
}

std::uint64_t counterexamples_for(const SweepSummary& s,
                                  const std::vector<std::string>& claims) {
  std::uint64_t n = 0;
  for (const auto& c : claims) {
    if (c == "goldbach") n += s.goldbach_failures;
    else if (c == "relaxed") n += s.relaxed_failures;
    else if (c == "conjecture1")
      n += s.conjecture1_counterexamples + s.conjecture1_twop_failures;
    else if (c == "bridge") n += s.bridge_violations;
    else if (c == "converse") n += s.converse_violations;
    else throw std::invalid_argument("unknown claim: " + c);
  }
  return n;
}

int run_sweep(const GlobalOpts& g, RowSchema schema, const std::string& default_claims) {
  std::uint64_t hi = g.hi == 0 ? g.limit : g.hi;
  PrimeTable t = load_or_build(g);
  WeightTable lam = build_weight_table(t, WeightKind::VonMangoldt, g.limit);
  WeightTable lam0 = build_weight_table(t, WeightKind::Truncated, g.limit);
  WeightTable ups = build_weight_table(t, WeightKind::Master, g.limit);
  Correlator c(t, lam, lam0, ups);
  SingularSeriesValue ssv = twin_prime_constant(t, g.limit);

  SweepOptions opt;
  opt.lo = g.lo;
  opt.hi = hi;
  opt.threads = g.threads;
  opt.class_filter = parse_class(g.klass);

  std::string ts = g.no_timestamp ? "" : iso8601_utc_now();
  OutputTarget out(g.output);
  ReportWriter writer(*out.records, parse_format(g.format), schema, ts);
  SweepSummary summary =
      sweep(c, ssv, opt, [&writer](const SweepRecord& r) { writer.write(r); });
  writer.finish();
  out.close();
  *out.summary << summary_text(summary, ts);

  auto claims = split_list(g.claims.empty() ? default_claims : g.claims);
  return counterexamples_for(summary, claims) > 0 ? 1 : 0;
}

int cmd_singular(const GlobalOpts& g, const std::vector<std::uint64_t>& ns) {
  PrimeTable t = load_or_build(g);
  std::uint64_t pl = g.product_limit == 0 ? g.limit : g.product_limit;
  SingularSeriesValue ssv = twin_prime_constant(t, pl);
  nlohmann::ordered_json j;
  j["pi2"] = ssv.pi2;  // full precision: this is the headline constant
  j["tail_bound"] = ssv.tail_bound;
  j["product_limit"] = ssv.product_limit;
  if (!ns.empty()) {
    nlohmann::ordered_json vals;
    for (std::uint64_t n : ns) vals[std::to_string(n)] = singular_series(ssv, t, n);
    j["s_of_N"] = std::move(vals);
  }
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation sums, singular series, and claim sweeps over even N"};
  app.set_version_flag("--version", "0.1.0");
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--limit", g.limit, "sieve/table limit")->capture_default_str();
  app.add_option("--lo", g.lo, "lower end of the N range")->capture_default_str();
  app.add_option("--hi", g.hi, "upper end of the N range (0 = limit)")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = all hardware threads)")
      ->capture_default_str();
  app.add_option("--format", g.format, "record format")
      ->check(CLI::IsMember({"csv", "json", "jsonl"}))
      ->capture_default_str();
  app.add_option("--output", g.output,
                 "write records to this file (summary then goes to stdout)");
  app.add_option("--cache", g.cache, "sieve cache file (built if missing)")
      ->envname("PCL_CACHE");
  app.add_option("--class", g.klass, "restrict sweeps to one class")
      ->check(CLI::IsMember({"small", "two_p", "general"}));
  app.add_option("--claims", g.claims,
                 "claims deciding the exit status (comma list of "
                 "goldbach,relaxed,conjecture1,bridge,converse)");
  app.add_option("--weights", g.weights, "columns for `correlate`")
      ->capture_default_str();
  app.add_option("--engine", g.engine, "batch engine for `correlate`")
      ->check(CLI::IsMember({"direct", "convolution"}))
      ->capture_default_str();
  app.add_option("--product-limit", g.product_limit,
                 "primes included in the twin-prime product (0 = limit)");
  app.add_flag("--allow-uncertified", g.allow_uncertified,
               "let `correlate` run the convolution engine past its certified size");
  app.add_flag("--no-timestamp", g.no_timestamp,
               "omit the timestamp line for byte-reproducible output");

  auto* sieve_cmd =
      app.add_subcommand("sieve", "build the prime table; print size and checksum");
  sieve_cmd->fallthrough();

  auto* eval_cmd = app.add_subcommand("eval", "print the weights at one n as JSON");
  eval_cmd->fallthrough();
  std::uint64_t eval_n = 0;
  eval_cmd->add_option("--n", eval_n, "the argument n")->required();

  auto* correlate_cmd =
      app.add_subcommand("correlate", "tabulate correlation sums over [lo, hi]");
  correlate_cmd->fallthrough();

  auto* sweep_cmd =
      app.add_subcommand("sweep", "audit all claims over even N in [lo, hi]");
  sweep_cmd->fallthrough();

  auto* theorem_cmd = app.add_subcommand(
      "check-theorem", "sweep with the ratio/decomposition columns only");
  theorem_cmd->fallthrough();

  auto* conjecture_cmd = app.add_subcommand(
      "check-conjecture", "sweep with the per-prime positivity columns only");
  conjecture_cmd->fallthrough();

  auto* singular_cmd =
      app.add_subcommand("singular", "print the twin-prime product and series values");
  singular_cmd->fallthrough();
  std::vector<std::uint64_t> singular_ns;
  singular_cmd->add_option("--n", singular_ns, "values of N (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sieve_cmd) return cmd_sieve(g);
    if (*eval_cmd) return cmd_eval(g, eval_n);
    if (*correlate_cmd) return cmd_correlate(g);
    if (*sweep_cmd) return run_sweep(g, RowSchema::Full, "goldbach,relaxed");
    if (*theorem_cmd) return run_sweep(g, RowSchema::Theorem, "relaxed,bridge,converse");
    if (*conjecture_cmd) return run_sweep(g, RowSchema::Conjecture, "conjecture1");
    if (*singular_cmd) return cmd_singular(g, singular_ns);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable with require_subcommand(1)
}
