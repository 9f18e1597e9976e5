#include "pcl/correlations.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "pcl/errors.hpp"
#include "pcl/kahan.hpp"

namespace pcl {

namespace {

void require_even_in(std::uint64_t N, std::uint64_t lo, std::uint64_t limit, const char* who) {
  if (N % 2 != 0 || N < lo || N > limit)
    throw std::invalid_argument(std::string(who) + ": N must be even and in [" +
                                std::to_string(lo) + ", " + std::to_string(limit) + "]");
}

}  // namespace

double correlate(const WeightTable& f, std::uint64_t N) {
  if (N < 2 || N > f.limit)
    throw std::invalid_argument("correlate: N must be in [2, table limit]");
  KahanSum acc;
  for (std::uint64_t n = 1; n < N; ++n) {
    double term = f.values[n] * f.values[N - n];
    if (term != 0.0) acc.add(term);
  }
  return acc.value();
}

Correlator::Correlator(const PrimeTable& t, const WeightTable& lam, const WeightTable& lam0,
                       const WeightTable& ups)
    : table_(&t), lam_(&lam), lam0_(&lam0), ups_(&ups) {
  if (lam.kind != WeightKind::VonMangoldt || lam0.kind != WeightKind::Truncated ||
      ups.kind != WeightKind::Master)
    throw std::invalid_argument("Correlator: weight tables passed in the wrong order");
  if (lam.limit != lam0.limit || lam.limit != ups.limit || lam.limit > t.limit)
    throw std::invalid_argument("Correlator: weight tables must share a limit <= table limit");
  limit_ = lam.limit;
  sup_lam_ = index_support(lam);
  sup_lam0_ = index_support(lam0);
  sup_ups_ = index_support(ups);
}

Correlator::Support Correlator::index_support(const WeightTable& w) {
  Support s;
  for (std::uint64_t n = 2; n < w.values.size(); ++n) {
    if (w.values[n] != 0.0) {
      s.point.push_back((std::uint32_t)n);
      s.w.push_back(w.values[n]);
    }
  }
  return s;
}

const Correlator::Support& Correlator::support(WeightKind k) const {
  switch (k) {
    case WeightKind::VonMangoldt: return sup_lam_;
    case WeightKind::Truncated: return sup_lam0_;
    case WeightKind::Master: return sup_ups_;
  }
  throw std::logic_error("support: bad weight kind");
}

// Walk the sorted support from both ends; every unordered pair {a, b} with
// a + b = N is visited exactly once. Symmetric pairs contribute twice the
// product, the middle point (if 2a = N) contributes its square once. All
// terms are positive, so a zero result means the pair set is empty.
double Correlator::support_correlate(const Support& s, std::uint64_t N) const {
  const auto& pts = s.point;
  if (N < 2 || pts.empty()) return 0.0;
  auto end = std::upper_bound(pts.begin(), pts.end(), (std::uint32_t)(N - 1));
  if (end == pts.begin()) return 0.0;
  std::size_t i = 0, j = (std::size_t)(end - pts.begin()) - 1;
  KahanSum acc;
  while (i < j) {
    std::uint64_t sum = (std::uint64_t)pts[i] + pts[j];
    if (sum == N) {
      acc.add(2.0 * s.w[i] * s.w[j]);
      ++i;
      --j;
    } else if (sum < N) {
      ++i;
    } else {
      --j;
    }
  }
  if (i == j && 2ULL * pts[i] == N) acc.add(s.w[i] * s.w[i]);
  return acc.value();
}

double Correlator::r(WeightKind k, std::uint64_t N) const {
  if (N < 2 || N > limit_)
    throw std::invalid_argument("Correlator::r: N must be in [2, limit]");
  return support_correlate(support(k), N);
}

Correlator::UpsilonPass Correlator::upsilon_pass(std::uint64_t N) const {
  require_even_in(N, 8, limit_, "upsilon_pass");
  const auto& pts = sup_ups_.point;
  const auto& ws = sup_ups_.w;
  const auto& spf = table_->spf;

  UpsilonPass out;
  out.breakdown.N = N;

  KahanSum total, nonco, co, sq_sq, sq_semi, semi_co, semi_non, nonco_sq;
  auto is_square = [&spf](std::uint32_t n) {
    std::uint64_t p = spf[n];
    return p * p == n;
  };
  auto account = [&](std::uint32_t a, std::uint32_t b, double contrib) {
    bool a_sq = is_square(a);
    bool b_sq = is_square(b);
    bool noncoprime = std::gcd(a, b) > 1u;
    total.add(contrib);
    if (noncoprime) {
      nonco.add(contrib);
      if (a_sq || b_sq) nonco_sq.add(contrib);
    } else {
      co.add(contrib);
    }
    if (a_sq && b_sq) sq_sq.add(contrib);
    else if (a_sq || b_sq) sq_semi.add(contrib);
    else if (noncoprime) semi_non.add(contrib);
    else semi_co.add(contrib);
  };

  auto end = std::upper_bound(pts.begin(), pts.end(), (std::uint32_t)(N - 1));
  if (end != pts.begin()) {
    std::size_t i = 0, j = (std::size_t)(end - pts.begin()) - 1;
    while (i < j) {
      std::uint64_t sum = (std::uint64_t)pts[i] + pts[j];
      if (sum == N) {
        account(pts[i], pts[j], 2.0 * ws[i] * ws[j]);
        ++i;
        --j;
      } else if (sum < N) {
        ++i;
      } else {
        --j;
      }
    }
    if (i == j && 2ULL * pts[i] == N) account(pts[i], pts[i], ws[i] * ws[i]);
  }

  out.r_upsilon = total.value();
  out.split.noncoprime_part = nonco.value();
  out.split.coprime_part = co.value();
  out.breakdown.sq_sq = sq_sq.value();
  out.breakdown.sq_semiprime = sq_semi.value();
  out.breakdown.semi_semi_coprime = semi_co.value();
  out.breakdown.semi_semi_noncoprime = semi_non.value();
  out.breakdown.noncoprime_square_part = nonco_sq.value();
  return out;
}

UpsilonSplit Correlator::decompose_upsilon(std::uint64_t N) const {
  return upsilon_pass(N).split;
}

ErrorTermBreakdown Correlator::error_term_breakdown(std::uint64_t N) const {
  return upsilon_pass(N).breakdown;
}

std::vector<std::pair<std::uint32_t, double>> Correlator::per_prime_sums(std::uint64_t N) const {
  require_even_in(N, 4, limit_, "per_prime_sums");
  std::vector<std::pair<std::uint32_t, double>> out;
  std::uint64_t m = N;
  while (m > 1) {
    std::uint32_t p = table_->spf[m];
    out.emplace_back(p, support_correlate(sup_lam0_, N / p));
    while (m % p == 0) m /= p;
  }
  return out;  // primes emerge in ascending order from the factor chain
}

CorrelationRecord Correlator::record(std::uint64_t N) const {
  require_even_in(N, 8, limit_, "record");
  UpsilonPass pass = upsilon_pass(N);
  CorrelationRecord rec;
  rec.N = N;
  rec.r_upsilon = pass.r_upsilon;
  rec.noncoprime_part = pass.split.noncoprime_part;
  rec.coprime_part = pass.split.coprime_part;
  rec.r_lambda0 = support_correlate(sup_lam0_, N);
  rec.r_lambda = support_correlate(sup_lam_, N);
  rec.per_prime = per_prime_sums(N);
  double denom = 0.0;
  for (const auto& [p, s] : rec.per_prime) denom += s;  // a handful of terms
  rec.denominator = denom;
  if (denom > 0.0) rec.ratio_K = rec.r_upsilon / denom;
  return rec;
}

std::vector<double> Correlator::batch(WeightKind k, std::uint64_t L, BatchEngine engine,
                                      bool allow_uncertified, unsigned threads) const {
  if (L < 2 || L > limit_)
    throw std::invalid_argument("batch: L must be in [2, limit]");
  std::vector<double> out(L + 1, 0.0);

  if (engine == BatchEngine::Direct) {
    const Support& sup = support(k);
    unsigned T = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (T == 0) T = 1;
    if (T <= 1) {
      for (std::uint64_t N = 2; N <= L; ++N) out[N] = support_correlate(sup, N);
      return out;
    }
    // Each worker claims fixed-size chunks of N and fills disjoint slots, so
    // the result is bitwise independent of scheduling.
    constexpr std::uint64_t kChunk = 1024;
    std::atomic<std::uint64_t> next{2};
    auto work = [&] {
      for (;;) {
        std::uint64_t start = next.fetch_add(kChunk, std::memory_order_relaxed);
        if (start > L) return;
        std::uint64_t stop = std::min(L, start + kChunk - 1);
        for (std::uint64_t N = start; N <= stop; ++N) out[N] = support_correlate(sup, N);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return out;
  }

  // Convolution route: the certification below the size cap comes from the
  // engine-equivalence tests; beyond it the caller must opt in explicitly.
  if (L > kConvolutionCertifiedLimit && !allow_uncertified)
    throw std::invalid_argument(
        "batch: convolution accuracy is certified only up to L = " +
        std::to_string(kConvolutionCertifiedLimit) + "; pass allow_uncertified to proceed");

  std::size_t M = 1;
  while (M < 2 * L + 1) M <<= 1;
  if (M > (std::size_t)INT_MAX)
    throw resource_limit_error("batch: convolution size exceeds the FFT plan range");

  const WeightTable& wt = k == WeightKind::VonMangoldt ? *lam_
                          : k == WeightKind::Truncated ? *lam0_
                                                       : *ups_;
  long double* buf = fftwl_alloc_real(M);
  fftwl_complex* spec = fftwl_alloc_complex(M / 2 + 1);
  if (buf == nullptr || spec == nullptr) {
    fftwl_free(buf);
    fftwl_free(spec);
    throw resource_limit_error("batch: FFT buffer allocation failed");
  }
  fftwl_plan fwd = fftwl_plan_dft_r2c_1d((int)M, buf, spec, FFTW_ESTIMATE);
  fftwl_plan bwd = fftwl_plan_dft_c2r_1d((int)M, spec, buf, FFTW_ESTIMATE);
  if (fwd == nullptr || bwd == nullptr) {
    if (fwd != nullptr) fftwl_destroy_plan(fwd);
    if (bwd != nullptr) fftwl_destroy_plan(bwd);
    fftwl_free(buf);
    fftwl_free(spec);
    throw resource_limit_error("batch: FFT planning failed");
  }

  std::fill(buf, buf + M, 0.0L);
  for (std::uint64_t n = 2; n <= L && n < wt.values.size(); ++n) buf[n] = wt.values[n];
  fftwl_execute(fwd);
  for (std::size_t i = 0; i <= M / 2; ++i) {
    long double re = spec[i][0], im = spec[i][1];
    spec[i][0] = re * re - im * im;  // pointwise square = self-convolution
    spec[i][1] = 2.0L * re * im;
  }
  fftwl_execute(bwd);
  const long double scale = 1.0L / (long double)M;
  // Snap transform noise at structural zeros: the smallest possible true
  // value of any of these sums is (log 2)^2 ~ 0.48, so anything tiny is an
  // empty pair set and must come out as exactly 0.0 like the direct engine.
  constexpr double kSnapEpsilon = 1e-6;
  for (std::uint64_t N = 2; N <= L; ++N) {
    double v = (double)(buf[N] * scale);
    out[N] = std::fabs(v) < kSnapEpsilon ? 0.0 : v;
  }

  fftwl_destroy_plan(fwd);
  fftwl_destroy_plan(bwd);
  fftwl_free(buf);
  fftwl_free(spec);
  return out;
}

}  // namespace pcl
