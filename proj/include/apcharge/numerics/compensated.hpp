#pragma once

#include <span>

namespace apcharge::numerics {

// Neumaier's variant of Kahan summation. Order-dependent, so callers that
// need reproducible results must feed terms in a fixed order.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

}  // namespace apcharge::numerics
