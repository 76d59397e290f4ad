#pragma once

#include <cmath>

namespace blockcast {

// Neumaier compensated accumulator. Enumeration sums mix 4^(d^n) terms of
// both signs (z_n in particular cancels heavily), so plain summation loses
// digits we need for the 1e-10 residual checks.
class Kahan {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }

  void merge(const Kahan& o) {
    add(o.sum_);
    comp_ += o.comp_;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace blockcast
