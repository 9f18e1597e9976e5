#include "pcl/prime_table.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <new>
#include <random>

#include "pcl/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "cache serialization assumes a little-endian host");

namespace pcl {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'L', '1'};
constexpr std::uint64_t kMaxLimit = 0xFFFFFFFFULL;

void check_range(const PrimeTable& t, std::uint64_t n, std::uint64_t lo, const char* who) {
  if (n < lo || n > t.limit)
    throw std::invalid_argument(std::string(who) + ": n out of table range");
}

std::uint32_t trial_division_spf(std::uint64_t n) {
  if (n < 2) return 0;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return (std::uint32_t)d;
  return (std::uint32_t)n;
}

std::vector<std::uint32_t> primes_from_spf(const std::vector<std::uint32_t>& spf) {
  std::vector<std::uint32_t> primes;
  for (std::uint64_t n = 2; n < spf.size(); ++n)
    if (spf[n] == n) primes.push_back((std::uint32_t)n);
  return primes;
}

}  // namespace

PrimeTable build_prime_table(std::uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("build_prime_table: limit must be >= 2");
  if (limit > kMaxLimit)
    throw std::invalid_argument("build_prime_table: limit exceeds 32-bit entry range");

  PrimeTable t;
  t.limit = limit;
  try {
    t.spf.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw resource_limit_error("build_prime_table: table allocation failed");
  }

  // Linear sieve: each composite m is struck once, by p = spf(m) paired with
  // the cofactor n = m / p, which is enumerated here with spf(n) >= p.
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (t.spf[n] == 0) {
      t.spf[n] = (std::uint32_t)n;
      t.primes.push_back((std::uint32_t)n);
    }
    for (std::uint32_t p : t.primes) {
      std::uint64_t m = n * (std::uint64_t)p;
      if (m > limit) break;
      t.spf[m] = p;
      if (p == t.spf[n]) break;
    }
  }
  return t;
}

FactorMultiset factorize(const PrimeTable& t, std::uint64_t n) {
  check_range(t, n, 2, "factorize");
  FactorMultiset out;
  while (n > 1) {
    std::uint32_t p = t.spf[n];
    std::uint32_t e = 0;
    while (n > 1 && t.spf[n] == p) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

std::uint32_t big_omega(const PrimeTable& t, std::uint64_t n) {
  check_range(t, n, 1, "big_omega");
  std::uint32_t total = 0;
  while (n > 1) {
    n /= t.spf[n];
    ++total;
  }
  return total;
}

std::uint64_t euler_phi(const PrimeTable& t, std::uint64_t n) {
  check_range(t, n, 1, "euler_phi");
  std::uint64_t r = n;
  while (n > 1) {
    std::uint32_t p = t.spf[n];
    r = r / p * (p - 1);
    while (n > 1 && t.spf[n] == p) n /= p;
  }
  return r;
}

std::vector<std::uint32_t> euler_phi_table(const PrimeTable& t) {
  std::vector<std::uint32_t> phi(t.limit + 1, 0);
  if (t.limit >= 1) phi[1] = 1;
  // multiplicative recurrence over the least prime factor
  for (std::uint64_t n = 2; n <= t.limit; ++n) {
    std::uint64_t p = t.spf[n];
    std::uint64_t m = n / p;
    phi[n] = (std::uint32_t)(m == 1          ? p - 1
                             : t.spf[m] == p ? (std::uint64_t)phi[m] * p
                                             : (std::uint64_t)phi[m] * (p - 1));
  }
  return phi;
}

PhiSummatory phi_summatory(const PrimeTable& t, std::uint64_t N) {
  check_range(t, N, 1, "phi_summatory");
  // phi over 1..N recomputed locally so the call does not depend on a cached
  // full-limit table
  std::vector<std::uint32_t> phi(N + 1, 0);
  phi[1] = 1;
  std::uint64_t sum = 1;
  for (std::uint64_t n = 2; n <= N; ++n) {
    std::uint64_t p = t.spf[n];
    std::uint64_t m = n / p;
    phi[n] = (std::uint32_t)(m == 1          ? p - 1
                             : t.spf[m] == p ? (std::uint64_t)phi[m] * p
                                             : (std::uint64_t)phi[m] * (p - 1));
    sum += phi[n];
  }
  PhiSummatory out;
  out.sum = sum;
  out.normalized = (double)sum / ((double)N * (double)N);
  return out;
}

// ---- cache ----------------------------------------------------------------

void save_prime_table(const PrimeTable& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("save_prime_table: cannot open " + path);
  f.write(kMagic, 4);
  std::uint64_t limit = t.limit;
  f.write(reinterpret_cast<const char*>(&limit), 8);
  f.write(reinterpret_cast<const char*>(t.spf.data()),
          (std::streamsize)(t.spf.size() * sizeof(std::uint32_t)));
  if (!f) throw std::runtime_error("save_prime_table: write failed for " + path);
}

PrimeTable load_prime_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw cache_format_error("load_prime_table: cannot open " + path);

  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw cache_format_error("load_prime_table: bad magic in " + path);

  std::uint64_t limit = 0;
  f.read(reinterpret_cast<char*>(&limit), 8);
  if (!f || limit < 2 || limit > kMaxLimit)
    throw cache_format_error("load_prime_table: unsupported limit in " + path);

  f.seekg(0, std::ios::end);
  std::uint64_t size = (std::uint64_t)f.tellg();
  std::uint64_t expect = 12 + 4 * (limit + 1);
  if (size != expect)
    throw cache_format_error("load_prime_table: size mismatch in " + path);
  f.seekg(12, std::ios::beg);

  PrimeTable t;
  t.limit = limit;
  try {
    t.spf.resize(limit + 1);
  } catch (const std::bad_alloc&) {
    throw resource_limit_error("load_prime_table: table allocation failed");
  }
  f.read(reinterpret_cast<char*>(t.spf.data()),
         (std::streamsize)(t.spf.size() * sizeof(std::uint32_t)));
  if (!f) throw cache_format_error("load_prime_table: short read in " + path);

  if (t.spf[0] != 0 || t.spf[1] != 0)
    throw cache_format_error("load_prime_table: entries 0/1 must be 0 in " + path);

  // Spot-check 100 deterministically chosen entries against trial division.
  std::mt19937_64 rng(0x9E3779B97F4A7C15ULL ^ limit);
  for (int i = 0; i < 100; ++i) {
    std::uint64_t n = 2 + rng() % (limit - 1);
    if (t.spf[n] != trial_division_spf(n))
      throw cache_format_error("load_prime_table: spot check failed at n=" +
                               std::to_string(n) + " in " + path);
  }

  t.primes = primes_from_spf(t.spf);
  return t;
}

std::uint64_t table_checksum(const PrimeTable& t) {
  std::uint64_t h = 14695981039346656037ULL;
  const unsigned char* p = reinterpret_cast<const unsigned char*>(t.spf.data());
  std::size_t bytes = t.spf.size() * sizeof(std::uint32_t);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace pcl
