#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pcl/correlations.hpp"
#include "pcl/prime_table.hpp"
#include "pcl/singular_series.hpp"
#include "pcl/weights.hpp"

using namespace pcl;

namespace {

// Frozen 25-digit reference for the truncated product at 10^6, computed
// independently at 30-digit working precision before this module was written.
constexpr double kPi2At1e6 = 0.6601618605898407646766939;
constexpr double kSAt10 = 1.7604316282395753725;  // 2 * pi2(1e6) * (4/3)
constexpr double kSAt8 = 1.3203237211796815294;   // 2 * pi2(1e6)
constexpr double kPredictedAt10 = 17.604316282395753725;
constexpr double kResidualAt10 = -9.7775182557867954945;

}  // namespace

TEST_SUITE("singular_series") {

TEST_CASE("twin prime constant: hand products and the frozen 10^6 value") {
  PrimeTable t = build_prime_table(1000000);
  auto s3 = twin_prime_constant(t, 3);
  CHECK(s3.pi2 == 0.75);  // single factor 1 - 1/4, exact in binary
  CHECK(s3.product_limit == 3);
  auto s5 = twin_prime_constant(t, 5);
  CHECK(s5.pi2 == 0.703125);  // (3/4)(15/16) = 45/64, exact in binary
  auto s6 = twin_prime_constant(t, 1000000);
  CHECK(std::fabs(s6.pi2 - kPi2At1e6) < 1e-12);
  CHECK(s6.pi2 > 0.6);
  CHECK(s6.pi2 < 0.7);
  CHECK(s6.tail_bound == 1.0 / 999999.0);

  CHECK_THROWS_AS(twin_prime_constant(t, 2), std::invalid_argument);
  CHECK_THROWS_AS(twin_prime_constant(t, 1000001), std::invalid_argument);
}

TEST_CASE("truncations decrease monotonically and bracket later truncations") {
  PrimeTable t = build_prime_table(1000000);
  auto a = twin_prime_constant(t, 10000);
  auto b = twin_prime_constant(t, 100000);
  auto c = twin_prime_constant(t, 1000000);
  CHECK(a.pi2 > b.pi2);
  CHECK(b.pi2 > c.pi2);
  // certified bracket: the deeper truncation lies in [pi2*(1-tail), pi2]
  CHECK(b.pi2 >= a.pi2 * (1.0 - a.tail_bound));
  CHECK(b.pi2 <= a.pi2);
  CHECK(c.pi2 >= b.pi2 * (1.0 - b.tail_bound));
  CHECK(a.tail_bound > b.tail_bound);
}

TEST_CASE("series values: frozen examples, odd vanishing, two-adic invariance") {
  PrimeTable t = build_prime_table(1000000);
  auto ssv = twin_prime_constant(t, 1000000);
  CHECK(singular_series(ssv, t, 10) == doctest::Approx(kSAt10).epsilon(1e-12));
  CHECK(singular_series(ssv, t, 8) == doctest::Approx(kSAt8).epsilon(1e-12));
  CHECK(singular_series(ssv, t, 15) == 0.0);
  CHECK(singular_series(ssv, t, 999999) == 0.0);
  CHECK(singular_series(ssv, t, 2) == 2.0 * ssv.pi2);

  // the value depends only on the odd part of N
  for (std::uint64_t m : {3ULL, 15ULL, 105ULL, 9ULL, 4999ULL}) {
    double base = singular_series(ssv, t, 2 * m);
    CHECK(singular_series(ssv, t, 4 * m) == base);
    CHECK(singular_series(ssv, t, 16 * m) == base);
  }

  // every odd prime factor contributes a factor > 1
  for (std::uint64_t N = 2; N <= 5000; N += 2)
    REQUIRE(singular_series(ssv, t, N) >= 2.0 * ssv.pi2);

  CHECK_THROWS_AS(singular_series(ssv, t, 1), std::invalid_argument);
  CHECK_THROWS_AS(singular_series(ssv, t, 1000001), std::invalid_argument);
}

TEST_CASE("residual diagnostic at N = 10 against the exhaustive hand sum") {
  PrimeTable t = build_prime_table(1000000);
  auto ssv = twin_prime_constant(t, 1000000);
  WeightTable lam = build_weight_table(t, WeightKind::VonMangoldt, 100);
  WeightTable lam0 = build_weight_table(t, WeightKind::Truncated, 100);
  WeightTable ups = build_weight_table(t, WeightKind::Master, 100);
  Correlator c(t, lam, lam0, ups);
  auto rec = c.record(10);
  auto hl = hl_residual(rec, ssv, t);
  CHECK(hl.s_of_n == doctest::Approx(kSAt10).epsilon(1e-12));
  CHECK(hl.predicted == doctest::Approx(kPredictedAt10).epsilon(1e-12));
  CHECK(hl.residual == doctest::Approx(kResidualAt10).epsilon(1e-12));
  CHECK(hl.normalized == doctest::Approx(kResidualAt10 / std::sqrt(10.0)).epsilon(1e-12));
}

TEST_CASE("residual diagnostic on a hand-built odd record: series term drops out") {
  PrimeTable t = build_prime_table(100);
  auto ssv = twin_prime_constant(t, 100);
  CorrelationRecord rec;
  rec.N = 15;
  rec.r_lambda = 3.5;
  auto hl = hl_residual(rec, ssv, t);
  CHECK(hl.s_of_n == 0.0);
  CHECK(hl.predicted == 0.0);
  CHECK(hl.residual == 3.5);
  CHECK(hl.normalized == doctest::Approx(3.5 / std::sqrt(15.0)).epsilon(1e-15));
}

}  // TEST_SUITE
