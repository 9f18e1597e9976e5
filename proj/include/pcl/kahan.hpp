#pragma once

namespace pcl {

// Kahan compensated accumulator. All correlation sums run through this so
// that accumulation error stays O(eps * sum |terms|) independent of term
// count and order. Starting from 0.0 and adding nothing yields exactly 0.0,
// which the positivity checks rely on (they compare against 0.0 exactly).
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace pcl
