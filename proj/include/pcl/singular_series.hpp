#pragma once

#include <cstdint>

#include "pcl/correlations.hpp"
#include "pcl/prime_table.hpp"

namespace pcl {

// Truncation of the twin-prime-constant product over odd primes.
struct SingularSeriesValue {
  double pi2 = 0.0;                 // prod over odd p <= product_limit of (1 - 1/(p-1)^2)
  double tail_bound = 0.0;          // relative gap bound: true value in [pi2*(1-tail), pi2]
  std::uint64_t product_limit = 0;  // primes up to this bound are included
};

// The tail bound is 1/(product_limit - 1): the omitted factors multiply to at
// least 1 - sum_{p > L} 1/(p-1)^2 >= 1 - sum_{n >= L} 1/(n(n-1)) = 1 - 1/(L-1).
SingularSeriesValue twin_prime_constant(const PrimeTable& t, std::uint64_t product_limit);

// 0 for odd N; otherwise 2 * pi2 * prod over odd primes p | N of (p-1)/(p-2).
double singular_series(const SingularSeriesValue& ssv, const PrimeTable& t, std::uint64_t N);

// Descriptive diagnostic against the predicted main term; never a pass/fail.
struct HlResidual {
  double s_of_n = 0.0;
  double predicted = 0.0;   // s_of_n * N
  double residual = 0.0;    // r_lambda - predicted
  double normalized = 0.0;  // residual / sqrt(N)

  bool operator==(const HlResidual&) const = default;
};

HlResidual hl_residual(const CorrelationRecord& rec, const SingularSeriesValue& ssv,
                       const PrimeTable& t);

}  // namespace pcl
