#pragma once

#include <cstdint>
#include <vector>

#include "pcl/prime_table.hpp"

namespace pcl {

// The three arithmetic weights (natural logarithms throughout):
//   VonMangoldt  log p on prime powers p^k, else 0
//   Truncated    log p on primes only, else 0
//   Master       log p on squares p^2; log(p1*p2) on products of two
//                distinct primes; else 0
//
// Note the deliberate asymmetry of the master weight: a square contributes
// log p, not log p^2. Supports of Truncated and Master are disjoint
// (primes have one prime factor, master support has exactly two).
enum class WeightKind { VonMangoldt, Truncated, Master };

const char* weight_name(WeightKind k);

double lambda(const PrimeTable& t, std::uint64_t n);    // pre: 1 <= n <= limit
double lambda0(const PrimeTable& t, std::uint64_t n);   // pre: 1 <= n <= limit
double upsilon(const PrimeTable& t, std::uint64_t n);   // pre: 0 <= n <= limit
double weight(const PrimeTable& t, WeightKind k, std::uint64_t n);

struct WeightTable {
  WeightKind kind = WeightKind::VonMangoldt;
  std::uint64_t limit = 0;
  std::vector<double> values;  // size limit + 1; [0] = [1] = 0
};

// Single pass over the sieve. pre: 2 <= limit <= t.limit.
WeightTable build_weight_table(const PrimeTable& t, WeightKind k, std::uint64_t limit);

}  // namespace pcl
