#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcl/correlations.hpp"
#include "pcl/prime_table.hpp"
#include "pcl/singular_series.hpp"

namespace pcl {

enum class NClass { Small, TwoP, General };

// Stable lowercase tags used in report output: "small", "two_p", "general".
std::string nclass_name(NClass c);

// Small: N <= 6. TwoP: N/2 prime. General: everything else even.
// Small wins over TwoP for N = 4 and N = 6.
NClass classify(const PrimeTable& t, std::uint64_t N);

// Every boolean is computed from the sums; nothing is presumed true.
// All positivity tests compare exactly against 0.0: each sum is a finite sum
// of products of logarithms of integers >= 2, so a genuine positive is at
// least (log 2)^2 and a genuine zero is an empty sum.
struct ClaimReport {
  std::uint64_t N = 0;
  NClass nclass = NClass::General;
  bool goldbach = false;             // r_lambda0 > 0: N is a sum of two primes
  bool relaxed_goldbach = false;     // r_upsilon > 0: N is a sum of two Omega-2 numbers
  bool theorem1_hypothesis = false;  // same sum as relaxed_goldbach, kept as its own flag
  bool denominator_positive = false;
  std::optional<double> ratio_K;
  bool conjecture1_applicable = false;        // denominator > 0
  std::optional<bool> conjecture1_holds;      // present iff applicable: every S_p > 0
  std::vector<std::uint32_t> failing_primes;  // p | N with S_p == 0, when applicable

  bool operator==(const ClaimReport&) const = default;
};

ClaimReport check_claims(const CorrelationRecord& rec, NClass cls);

// classify + record + check_claims for one N. Requires even N in [8, limit].
ClaimReport check_N(const Correlator& c, std::uint64_t N);

struct SweepRecord {
  CorrelationRecord corr;
  ClaimReport claim;
  HlResidual hl;

  bool operator==(const SweepRecord&) const = default;
};

struct Conjecture1Hit {
  std::uint64_t N = 0;
  std::vector<std::uint32_t> failing;

  bool operator==(const Conjecture1Hit&) const = default;
};

// Aggregate over a sweep. "first" lists hold the 100 smallest N so memory
// stays bounded no matter how many counterexamples a range contains.
struct SweepSummary {
  std::uint64_t lo = 0, hi = 0;  // requested range; assigned by sweep, not merged
  std::uint64_t records = 0;
  std::uint64_t n_small = 0, n_two_p = 0, n_general = 0;

  std::uint64_t goldbach_failures = 0;  // any class
  std::vector<std::uint64_t> goldbach_failure_first;
  std::uint64_t relaxed_failures = 0;  // class general only; two_p evens are
                                       // covered by their own prime pair
  std::vector<std::uint64_t> relaxed_failure_first;

  std::uint64_t conjecture1_applicable = 0;      // any class with denominator > 0
  std::uint64_t conjecture1_counterexamples = 0;  // class general
  std::vector<Conjecture1Hit> conjecture1_first;
  std::uint64_t conjecture1_twop_failures = 0;  // two_p applicable and failing

  std::uint64_t two_p_near_misses = 0;  // two_p with r_upsilon > 0, denominator == 0
  std::vector<std::uint64_t> two_p_near_miss_first;

  std::uint64_t bridge_violations = 0;      // noncoprime > 0 but denominator == 0
  std::uint64_t converse_violations = 0;    // denominator > 0 but noncoprime == 0
  std::uint64_t remark_fwd_violations = 0;  // general: r_upsilon > 0, denominator == 0
  std::uint64_t remark_rev_violations = 0;  // general: denominator > 0, r_upsilon == 0

  // ratio statistics over records where the ratio exists
  std::uint64_t k_count = 0;
  double k_min = 0.0, k_max = 0.0;  // meaningful only when k_count > 0
  std::uint64_t k_underflow = 0, k_overflow = 0;
  static constexpr double kHistLo = -1.0;   // log10 scale
  static constexpr double kHistStep = 0.25;
  std::array<std::uint64_t, 36> k_hist{};   // covers log10(K) in [-1, 8)

  double max_abs_normalized_residual = 0.0;
  std::uint64_t max_residual_n = 0;  // 0 = none yet; ties go to the smaller N

  bool operator==(const SweepSummary&) const = default;
};

// Folds one record into a summary. Exposed so callers can recount a record
// stream independently of the sweep's own bookkeeping.
void add_record(SweepSummary& s, const SweepRecord& r);

// Order-independent combine (commutative and associative by test); lo/hi are
// taken from `a` and overwritten by sweep() afterwards.
SweepSummary merge_summaries(const SweepSummary& a, const SweepSummary& b);

struct SweepOptions {
  std::uint64_t lo = 8;
  std::uint64_t hi = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::optional<NClass> class_filter;
};

// Emits one SweepRecord per matching even N in ascending order through sink
// (which may be empty), regardless of thread count, and returns the summary.
// With T workers, chunks of N are computed concurrently and re-sequenced
// before emission, so the stream and the summary are deterministic.
SweepSummary sweep(const Correlator& c, const SingularSeriesValue& ssv, const SweepOptions& opt,
                   const std::function<void(const SweepRecord&)>& sink);

}  // namespace pcl
