#pragma once

namespace tourcount {

// Kahan compensated accumulator. Batch weight sums add up to 10^6 terms
// spanning many orders of magnitude; the running compensation keeps the
// result independent of how the error would otherwise accumulate.
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

}  // namespace tourcount
