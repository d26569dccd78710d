#pragma once

#include <cstdint>
#include <optional>

namespace apcharge::numerics {

struct Fraction {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Walks the continued-fraction convergents of x and returns the first one
// within `tolerance` of x. Returns nullopt when every convergent with
// denominator <= max_denominator misses the tolerance.
std::optional<Fraction> rational_approximation(double x, double tolerance, std::int64_t max_denominator);

// First convergent h/k with |k*x - h| <= tolerance * max(1, |x|), i.e. the
// first denominator at which k copies of x tile h units to within the
// tolerance. Unlike a bound on |x - h/k|, this does not eventually accept
// every irrational once denominators reach 1e4 or so.
std::optional<Fraction> commensurate_ratio(double x, double tolerance, std::int64_t max_denominator);

// Least common multiple of q1 and q2 when commensurate_ratio(q1/q2) exists.
// The result is expressed as (multiple of q1, multiple of q2) so callers can
// tile exactly.
struct CommonMultiple {
  double period = 0.0;
  std::int64_t copies_of_first = 1;
  std::int64_t copies_of_second = 1;
};
std::optional<CommonMultiple> common_multiple(double q1, double q2, double tolerance = 1e-9,
                                              std::int64_t max_denominator = 1'000'000);

}  // namespace apcharge::numerics
