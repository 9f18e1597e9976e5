#include "pcl/singular_series.hpp"

#include <cmath>
#include <stdexcept>

namespace pcl {

SingularSeriesValue twin_prime_constant(const PrimeTable& t, std::uint64_t product_limit) {
  if (product_limit < 3 || product_limit > t.limit)
    throw std::invalid_argument("twin_prime_constant: product_limit must be in [3, table limit]");
  long double prod = 1.0L;
  for (std::uint32_t p : t.primes) {
    if (p > product_limit) break;
    if (p == 2) continue;
    long double q = (long double)(p - 1);
    prod *= 1.0L - 1.0L / (q * q);
  }
  SingularSeriesValue out;
  out.pi2 = (double)prod;
  out.tail_bound = 1.0 / (double)(product_limit - 1);
  out.product_limit = product_limit;
  return out;
}

double singular_series(const SingularSeriesValue& ssv, const PrimeTable& t, std::uint64_t N) {
  if (N < 2 || N > t.limit)
    throw std::invalid_argument("singular_series: N must be in [2, table limit]");
  if (N % 2 != 0) return 0.0;
  long double factor = 1.0L;
  std::uint64_t m = N;
  while (m % 2 == 0) m /= 2;
  while (m > 1) {
    std::uint32_t p = t.spf[m];
    factor *= (long double)(p - 1) / (long double)(p - 2);
    while (m % p == 0) m /= p;
  }
  return (double)(2.0L * (long double)ssv.pi2 * factor);
}

HlResidual hl_residual(const CorrelationRecord& rec, const SingularSeriesValue& ssv,
                       const PrimeTable& t) {
  HlResidual out;
  out.s_of_n = singular_series(ssv, t, rec.N);
  out.predicted = out.s_of_n * (double)rec.N;
  out.residual = rec.r_lambda - out.predicted;
  out.normalized = out.residual / std::sqrt((double)rec.N);
  return out;
}

}  // namespace pcl
