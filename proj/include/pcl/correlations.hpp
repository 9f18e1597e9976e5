#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pcl/prime_table.hpp"
#include "pcl/weights.hpp"

namespace pcl {

// Reference correlation sum r_f(N) = sum_{n=1}^{N-1} f(n) f(N-n), computed
// by a plain scan with compensated accumulation. Symmetric pairs are both
// counted (no halving). pre: 2 <= N <= f.limit.
double correlate(const WeightTable& f, std::uint64_t N);

struct UpsilonSplit {
  double noncoprime_part = 0.0;  // pairs with gcd(n, N-n) > 1
  double coprime_part = 0.0;     // pairs with gcd(n, N-n) = 1
};

struct CorrelationRecord {
  std::uint64_t N = 0;
  double r_upsilon = 0.0;
  double r_lambda0 = 0.0;
  double r_lambda = 0.0;
  double noncoprime_part = 0.0;
  double coprime_part = 0.0;
  // S_p = r_lambda0-style sum at N/p, one entry per distinct prime p | N,
  // ascending by p.
  std::vector<std::pair<std::uint32_t, double>> per_prime;
  double denominator = 0.0;       // sum of the S_p
  std::optional<double> ratio_K;  // r_upsilon / denominator, when positive

  bool operator==(const CorrelationRecord&) const = default;
};

// Master-weight pairs split by the shape of the two sides (prime square vs
// product of two distinct primes) and, for the squarefree-squarefree class,
// by coprimality. Every contributing pair lands in exactly one of the four
// classes; noncoprime_square_part is the gcd>1 slice of the two square
// classes, so that
//   sq_sq + sq_semiprime + semi_semi_coprime + semi_semi_noncoprime = r_upsilon
//   semi_semi_noncoprime + noncoprime_square_part = noncoprime_part
struct ErrorTermBreakdown {
  std::uint64_t N = 0;
  double sq_sq = 0.0;
  double sq_semiprime = 0.0;
  double semi_semi_coprime = 0.0;
  double semi_semi_noncoprime = 0.0;
  double noncoprime_square_part = 0.0;
};

enum class BatchEngine { Direct, Convolution };

// Support-restricted correlation engine over prebuilt weight tables.
//
// Sorted support indexes are built once; per-N queries then walk only the
// nonzero entries with a two-pointer pass from both ends of the support, so
// work per N is proportional to the support size, and sums with no
// contributing pair come out exactly 0.0 (the positivity flags depend on
// that). The tables and the engine are immutable after construction and safe
// for concurrent readers.
class Correlator {
 public:
  Correlator(const PrimeTable& t, const WeightTable& lam, const WeightTable& lam0,
             const WeightTable& ups);

  const PrimeTable& table() const { return *table_; }
  std::uint64_t limit() const { return limit_; }

  // r_f(N) for one weight. pre: 2 <= N <= limit.
  double r(WeightKind k, std::uint64_t N) const;

  // pre for the record-level queries: N even, 8 <= N <= limit.
  UpsilonSplit decompose_upsilon(std::uint64_t N) const;
  CorrelationRecord record(std::uint64_t N) const;
  ErrorTermBreakdown error_term_breakdown(std::uint64_t N) const;

  // S_p map for the distinct primes p | N. pre: N even, 4 <= N <= limit.
  std::vector<std::pair<std::uint32_t, double>> per_prime_sums(std::uint64_t N) const;

  // Values r_f(N) for every 2 <= N <= L, indexed by N ([0] and [1] are 0).
  // Direct: per-N two-pointer sums, parallelizable across N.
  // Convolution: one FFT self-convolution; certified to match Direct within
  // relative 1e-9 only for L <= kConvolutionCertifiedLimit -- larger L
  // throws std::invalid_argument unless allow_uncertified.
  std::vector<double> batch(WeightKind k, std::uint64_t L, BatchEngine engine,
                            bool allow_uncertified = false, unsigned threads = 1) const;

  static constexpr std::uint64_t kConvolutionCertifiedLimit = 1000000;

  // Both-sides-in-one-pass view used by record(), error_term_breakdown() and
  // the sweep (public because the claim audit consumes it directly).
  struct UpsilonPass {
    double r_upsilon = 0.0;
    UpsilonSplit split;
    ErrorTermBreakdown breakdown;
  };
  UpsilonPass upsilon_pass(std::uint64_t N) const;

 private:
  struct Support {
    std::vector<std::uint32_t> point;  // ascending support positions
    std::vector<double> w;             // matching weights
  };
  static Support index_support(const WeightTable& w);
  const Support& support(WeightKind k) const;
  double support_correlate(const Support& s, std::uint64_t N) const;

  const PrimeTable* table_;
  const WeightTable *lam_, *lam0_, *ups_;
  std::uint64_t limit_;
  Support sup_lam_, sup_lam0_, sup_ups_;
};

}  // namespace pcl
