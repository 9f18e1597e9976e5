#include "pcl/claim_checker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pcl/bounded_queue.hpp"

namespace pcl {

namespace {

constexpr std::size_t kFirstListCap = 100;
constexpr std::uint64_t kChunkEvens = 512;

void push_capped(std::vector<std::uint64_t>& v, std::uint64_t n) {
  if (v.size() < kFirstListCap) v.push_back(n);
}

// Both inputs are ascending; keep the 100 smallest of the union. Each input
// already holds the smallest elements of its own range, so the global
// smallest 100 are always present in the union.
std::vector<std::uint64_t> merge_capped(const std::vector<std::uint64_t>& a,
                                        const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  out.reserve(std::min(a.size() + b.size(), kFirstListCap));
  std::size_t i = 0, j = 0;
  while (out.size() < kFirstListCap && (i < a.size() || j < b.size())) {
    if (j == b.size() || (i < a.size() && a[i] <= b[j]))
      out.push_back(a[i++]);
    else
      out.push_back(b[j++]);
  }
  return out;
}

std::vector<Conjecture1Hit> merge_capped_hits(const std::vector<Conjecture1Hit>& a,
                                              const std::vector<Conjecture1Hit>& b) {
  std::vector<Conjecture1Hit> out;
  out.reserve(std::min(a.size() + b.size(), kFirstListCap));
  std::size_t i = 0, j = 0;
  while (out.size() < kFirstListCap && (i < a.size() || j < b.size())) {
    if (j == b.size() || (i < a.size() && a[i].N <= b[j].N))
      out.push_back(a[i++]);
    else
      out.push_back(b[j++]);
  }
  return out;
}

}  // namespace

std::string nclass_name(NClass c) {
  switch (c) {
    case NClass::Small: return "small";
    case NClass::TwoP: return "two_p";
    case NClass::General: return "general";
  }
  return "general";
}

NClass classify(const PrimeTable& t, std::uint64_t N) {
  if (N % 2 != 0 || N < 4 || N > t.limit)
    throw std::invalid_argument("classify: N must be even and in [4, table limit]");
  if (N <= 6) return NClass::Small;
  return t.is_prime(N / 2) ? NClass::TwoP : NClass::General;
}

ClaimReport check_claims(const CorrelationRecord& rec, NClass cls) {
  ClaimReport rep;
  rep.N = rec.N;
  rep.nclass = cls;
  rep.goldbach = rec.r_lambda0 > 0.0;
  rep.relaxed_goldbach = rec.r_upsilon > 0.0;
  rep.theorem1_hypothesis = rec.r_upsilon > 0.0;
  rep.denominator_positive = rec.denominator > 0.0;
  rep.ratio_K = rec.ratio_K;
  rep.conjecture1_applicable = rep.denominator_positive;
  if (rep.conjecture1_applicable) {
    bool holds = true;
    for (const auto& [p, s] : rec.per_prime) {
      if (s == 0.0) {
        holds = false;
        rep.failing_primes.push_back(p);
      }
    }
    rep.conjecture1_holds = holds;
  }
  return rep;
}

ClaimReport check_N(const Correlator& c, std::uint64_t N) {
  CorrelationRecord rec = c.record(N);  // validates even N in [8, limit]
  return check_claims(rec, classify(c.table(), N));
}

void add_record(SweepSummary& s, const SweepRecord& r) {
  const CorrelationRecord& co = r.corr;
  const ClaimReport& cl = r.claim;
  ++s.records;
  switch (cl.nclass) {
    case NClass::Small: ++s.n_small; break;
    case NClass::TwoP: ++s.n_two_p; break;
    case NClass::General: ++s.n_general; break;
  }
  const bool general = cl.nclass == NClass::General;
  const bool twop = cl.nclass == NClass::TwoP;

  if (!cl.goldbach) {
    ++s.goldbach_failures;
    push_capped(s.goldbach_failure_first, co.N);
  }
  if (general && !cl.relaxed_goldbach) {
    ++s.relaxed_failures;
    push_capped(s.relaxed_failure_first, co.N);
  }
  if (cl.conjecture1_applicable) ++s.conjecture1_applicable;
  const bool conjecture_fails = cl.conjecture1_holds.has_value() && !*cl.conjecture1_holds;
  if (general && conjecture_fails) {
    ++s.conjecture1_counterexamples;
    if (s.conjecture1_first.size() < kFirstListCap)
      s.conjecture1_first.push_back({co.N, cl.failing_primes});
  }
  if (twop && conjecture_fails) ++s.conjecture1_twop_failures;
  if (twop && co.r_upsilon > 0.0 && co.denominator == 0.0) {
    ++s.two_p_near_misses;
    push_capped(s.two_p_near_miss_first, co.N);
  }
  if (co.noncoprime_part > 0.0 && co.denominator == 0.0) ++s.bridge_violations;
  if (co.denominator > 0.0 && co.noncoprime_part == 0.0) ++s.converse_violations;
  if (general && co.r_upsilon > 0.0 && co.denominator == 0.0) ++s.remark_fwd_violations;
  if (general && co.denominator > 0.0 && co.r_upsilon == 0.0) ++s.remark_rev_violations;

  if (cl.ratio_K.has_value()) {
    double k = *cl.ratio_K;
    if (s.k_count == 0) {
      s.k_min = k;
      s.k_max = k;
    } else {
      s.k_min = std::min(s.k_min, k);
      s.k_max = std::max(s.k_max, k);
    }
    ++s.k_count;
    double l = std::log10(k);
    if (l < SweepSummary::kHistLo) {
      ++s.k_underflow;
    } else {
      auto bin = (std::size_t)((l - SweepSummary::kHistLo) / SweepSummary::kHistStep);
      if (bin >= s.k_hist.size())
        ++s.k_overflow;
      else
        ++s.k_hist[bin];
    }
  }

  double a = std::fabs(r.hl.normalized);
  if (s.max_residual_n == 0 || a > s.max_abs_normalized_residual ||
      (a == s.max_abs_normalized_residual && co.N < s.max_residual_n)) {
    s.max_abs_normalized_residual = a;
    s.max_residual_n = co.N;
  }
}

SweepSummary merge_summaries(const SweepSummary& a, const SweepSummary& b) {
  SweepSummary m = a;
  m.records += b.records;
  m.n_small += b.n_small;
  m.n_two_p += b.n_two_p;
  m.n_general += b.n_general;

  m.goldbach_failures += b.goldbach_failures;
  m.goldbach_failure_first = merge_capped(a.goldbach_failure_first, b.goldbach_failure_first);
  m.relaxed_failures += b.relaxed_failures;
  m.relaxed_failure_first = merge_capped(a.relaxed_failure_first, b.relaxed_failure_first);

  m.conjecture1_applicable += b.conjecture1_applicable;
  m.conjecture1_counterexamples += b.conjecture1_counterexamples;
  m.conjecture1_first = merge_capped_hits(a.conjecture1_first, b.conjecture1_first);
  m.conjecture1_twop_failures += b.conjecture1_twop_failures;

  m.two_p_near_misses += b.two_p_near_misses;
  m.two_p_near_miss_first = merge_capped(a.two_p_near_miss_first, b.two_p_near_miss_first);

  m.bridge_violations += b.bridge_violations;
  m.converse_violations += b.converse_violations;
  m.remark_fwd_violations += b.remark_fwd_violations;
  m.remark_rev_violations += b.remark_rev_violations;

  if (b.k_count > 0) {
    if (m.k_count == 0) {
      m.k_min = b.k_min;
      m.k_max = b.k_max;
    } else {
      m.k_min = std::min(m.k_min, b.k_min);
      m.k_max = std::max(m.k_max, b.k_max);
    }
  }
  m.k_count += b.k_count;
  m.k_underflow += b.k_underflow;
  m.k_overflow += b.k_overflow;
  for (std::size_t i = 0; i < m.k_hist.size(); ++i) m.k_hist[i] += b.k_hist[i];

  bool take_b = b.max_residual_n != 0 &&
                (m.max_residual_n == 0 ||
                 b.max_abs_normalized_residual > m.max_abs_normalized_residual ||
                 (b.max_abs_normalized_residual == m.max_abs_normalized_residual &&
                  b.max_residual_n < m.max_residual_n));
  if (take_b) {
    m.max_abs_normalized_residual = b.max_abs_normalized_residual;
    m.max_residual_n = b.max_residual_n;
  }
  return m;
}

SweepSummary sweep(const Correlator& c, const SingularSeriesValue& ssv, const SweepOptions& opt,
                   const std::function<void(const SweepRecord&)>& sink) {
  const PrimeTable& t = c.table();
  if (opt.lo < 8) throw std::invalid_argument("sweep: lo must be >= 8");
  if (opt.hi > c.limit() || opt.lo > opt.hi)
    throw std::invalid_argument("sweep: need lo <= hi <= correlator limit");

  SweepSummary total;
  auto finish = [&](SweepSummary s) {
    s.lo = opt.lo;
    s.hi = opt.hi;
    return s;
  };
  std::uint64_t first = opt.lo + opt.lo % 2;
  std::uint64_t last = opt.hi - opt.hi % 2;
  if (first > last) return finish(total);

  auto eval_one = [&](std::uint64_t N, SweepRecord& out) {
    NClass cls = classify(t, N);  // cheap; filter before the heavy sums
    if (opt.class_filter.has_value() && *opt.class_filter != cls) return false;
    out.corr = c.record(N);
    out.claim = check_claims(out.corr, cls);
    out.hl = hl_residual(out.corr, ssv, t);
    return true;
  };

  unsigned T = opt.threads != 0 ? opt.threads : std::thread::hardware_concurrency();
  if (T == 0) T = 1;
  std::uint64_t n_evens = (last - first) / 2 + 1;
  std::uint64_t n_chunks = (n_evens + kChunkEvens - 1) / kChunkEvens;
  if ((std::uint64_t)T > n_chunks) T = (unsigned)n_chunks;

  if (T <= 1) {
    SweepRecord rec;
    for (std::uint64_t N = first; N <= last; N += 2) {
      if (!eval_one(N, rec)) continue;
      if (sink) sink(rec);
      add_record(total, rec);
    }
    return finish(total);
  }

  struct ChunkOut {
    std::uint64_t idx = 0;
    std::vector<SweepRecord> recs;
    SweepSummary part;
  };
  BoundedQueue<ChunkOut> queue(2 * (std::size_t)T);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    try {
      for (;;) {
        std::uint64_t idx = next.fetch_add(1, std::memory_order_relaxed);
        if (idx >= n_chunks) return;
        ChunkOut out;
        out.idx = idx;
        std::uint64_t begin = first + 2 * idx * kChunkEvens;
        std::uint64_t end = std::min(last, begin + 2 * (kChunkEvens - 1));
        SweepRecord rec;
        for (std::uint64_t N = begin; N <= end; N += 2) {
          if (!eval_one(N, rec)) continue;
          add_record(out.part, rec);
          out.recs.push_back(rec);
        }
        queue.push(std::move(out));
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(T);
  for (unsigned i = 0; i < T; ++i) pool.emplace_back(worker);
  std::thread closer([&] {
    for (auto& th : pool) th.join();
    queue.close();
  });

  // Re-sequence chunks so the sink always sees ascending N.
  try {
    std::map<std::uint64_t, ChunkOut> pending;
    std::uint64_t next_emit = 0;
    while (auto got = queue.pop()) {
      std::uint64_t idx = got->idx;
      pending.emplace(idx, std::move(*got));
      for (auto it = pending.find(next_emit); it != pending.end();
           it = pending.find(++next_emit)) {
        if (sink)
          for (const auto& r : it->second.recs) sink(r);
        total = merge_summaries(total, it->second.part);
        pending.erase(it);
      }
    }
  } catch (...) {
    queue.close();  // unblock producers; their remaining pushes are dropped
    closer.join();
    throw;
  }
  closer.join();
  if (first_error) std::rethrow_exception(first_error);
  return finish(total);
}

}  // namespace pcl
