#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pcl {

// Smallest-prime-factor table built by a linear (Euler) sieve: every
// composite is struck exactly once by its least prime factor, so build time
// is O(limit). The table is immutable after construction; concurrent readers
// need no synchronization.
//
// spf[0] = spf[1] = 0, spf[p] = p for primes, spf[n] = least prime factor.
// Entries are 32-bit, which caps limit at 2^32 - 1.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint32_t> spf;     // size limit + 1
  std::vector<std::uint32_t> primes;  // ascending; derived from spf

  bool is_prime(std::uint64_t n) const { return n >= 2 && spf[n] == n; }
};

// pre: 2 <= limit <= 2^32 - 1 (std::invalid_argument otherwise).
// Throws resource_limit_error when the table cannot be allocated.
PrimeTable build_prime_table(std::uint64_t limit);

// (prime, exponent) pairs, primes ascending. Product reconstructs n.
using FactorMultiset = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

FactorMultiset factorize(const PrimeTable& t, std::uint64_t n);  // pre: 2 <= n <= limit
std::uint32_t big_omega(const PrimeTable& t, std::uint64_t n);   // pre: 1 <= n <= limit; Omega(1) = 0
std::uint64_t euler_phi(const PrimeTable& t, std::uint64_t n);   // pre: 1 <= n <= limit

// phi(n) for 0 <= n <= limit (entry 0 unused, stored as 0). One linear pass.
std::vector<std::uint32_t> euler_phi_table(const PrimeTable& t);

struct PhiSummatory {
  std::uint64_t sum = 0;     // sum of phi(n), 1 <= n <= N
  double normalized = 0.0;   // sum / N^2
};
PhiSummatory phi_summatory(const PrimeTable& t, std::uint64_t N);  // pre: 1 <= N <= limit

// Cache file layout: magic "PCL1", limit as u64 LE, spf entries as u32 LE
// for indices 0..limit.
void save_prime_table(const PrimeTable& t, const std::string& path);

// Validates magic and size, then spot-checks 100 pseudo-randomly chosen
// entries against trial-division recomputation; throws cache_format_error on
// any mismatch or I/O problem.
PrimeTable load_prime_table(const std::string& path);

// FNV-1a over the spf payload bytes (the value `sieve` prints).
std::uint64_t table_checksum(const PrimeTable& t);

}  // namespace pcl
