#pragma once

// Small numeric helpers shared across modules.

#include <cmath>
#include <cstdint>

namespace chaos {

/// Neumaier compensated summation.
class KahanSum {
 public:
  KahanSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

constexpr double ipow(double x, int r) noexcept {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= x;
  return out;
}

constexpr double factorial(int n) noexcept {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

constexpr double binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace chaos
