#include "pcl/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace pcl {

namespace {

void check_n(const PrimeTable& t, std::uint64_t n, std::uint64_t lo, const char* who) {
  if (n < lo || n > t.limit)
    throw std::invalid_argument(std::string(who) + ": n out of table range");
}

}  // namespace

const char* weight_name(WeightKind k) {
  switch (k) {
    case WeightKind::VonMangoldt: return "lambda";
    case WeightKind::Truncated: return "lambda0";
    case WeightKind::Master: return "upsilon";
  }
  return "?";
}

double lambda(const PrimeTable& t, std::uint64_t n) {
  check_n(t, n, 1, "lambda");
  if (n < 2) return 0.0;
  std::uint32_t p = t.spf[n];
  while (n > 1) {
    if (t.spf[n] != p) return 0.0;
    n /= p;
  }
  return std::log((double)p);
}

double lambda0(const PrimeTable& t, std::uint64_t n) {
  check_n(t, n, 1, "lambda0");
  return t.is_prime(n) ? std::log((double)n) : 0.0;
}

double upsilon(const PrimeTable& t, std::uint64_t n) {
  if (n > t.limit) throw std::invalid_argument("upsilon: n out of table range");
  if (n < 4) return 0.0;  // includes the 0 and 1 conventions
  std::uint64_t p = t.spf[n];
  std::uint64_t m = n / p;
  if (m < 2 || t.spf[m] != m) return 0.0;  // cofactor must itself be prime
  if (m == p) return std::log((double)p);  // square: log p, not log p^2
  return std::log((double)n);              // distinct primes: log(p1 p2)
}

double weight(const PrimeTable& t, WeightKind k, std::uint64_t n) {
  switch (k) {
    case WeightKind::VonMangoldt: return lambda(t, n);
    case WeightKind::Truncated: return lambda0(t, n);
    case WeightKind::Master: return upsilon(t, n);
  }
  return 0.0;
}

WeightTable build_weight_table(const PrimeTable& t, WeightKind k, std::uint64_t limit) {
  if (limit < 2 || limit > t.limit)
    throw std::invalid_argument("build_weight_table: limit out of range");

  WeightTable w;
  w.kind = k;
  w.limit = limit;
  w.values.assign(limit + 1, 0.0);

  switch (k) {
    case WeightKind::VonMangoldt:
      // prime powers: for each prime, walk its powers (sum over p of log_p
      // limit steps -- cheaper than testing every n)
      for (std::uint32_t p : t.primes) {
        if (p > limit) break;
        double lp = std::log((double)p);
        for (std::uint64_t q = p; q <= limit; q *= p) {
          w.values[q] = lp;
          if (q > limit / p) break;  // next power would overflow past limit
        }
      }
      break;
    case WeightKind::Truncated:
      for (std::uint32_t p : t.primes) {
        if (p > limit) break;
        w.values[p] = std::log((double)p);
      }
      break;
    case WeightKind::Master:
      for (std::uint64_t n = 4; n <= limit; ++n) {
        std::uint64_t p = t.spf[n];
        std::uint64_t m = n / p;
        if (m < 2 || t.spf[m] != m) continue;
        w.values[n] = m == p ? std::log((double)p) : std::log((double)n);
      }
      break;
  }
  return w;
}

}  // namespace pcl
