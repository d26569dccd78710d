#include "apcharge/numerics/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apcharge::numerics {

namespace {

// Convergents h_n/k_n with the usual three-term recurrence, stopping at the
// first one `accept` likes. long double keeps the remainder expansion
// accurate for a few more terms.
template <class Accept>
std::optional<Fraction> walk_convergents(double x, std::int64_t max_denominator, Accept accept) {
  if (!std::isfinite(x)) return std::nullopt;
  long double rest = x;
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(rest));
  std::int64_t k_prev = 0, k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    if (accept(h, k)) return Fraction{h, k};
    const long double frac = rest - std::floor(rest);
    if (frac == 0.0L) break;
    rest = 1.0L / frac;
    if (rest > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 4)) break;
    const auto a = static_cast<std::int64_t>(std::floor(rest));
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    const std::int64_t h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Fraction> rational_approximation(double x, double tolerance, std::int64_t max_denominator) {
  return walk_convergents(x, max_denominator, [&](std::int64_t h, std::int64_t k) {
    return std::fabs(x - static_cast<double>(h) / static_cast<double>(k)) <= tolerance;
  });
}

std::optional<Fraction> commensurate_ratio(double x, double tolerance, std::int64_t max_denominator) {
  const double scale = std::max(1.0, std::fabs(x));
  return walk_convergents(x, max_denominator, [&](std::int64_t h, std::int64_t k) {
    return std::fabs(static_cast<double>(k) * x - static_cast<double>(h)) <= tolerance * scale;
  });
}

std::optional<CommonMultiple> common_multiple(double q1, double q2, double tolerance,
                                              std::int64_t max_denominator) {
  if (!(q1 > 0.0) || !(q2 > 0.0)) return std::nullopt;
  const auto ratio = commensurate_ratio(q1 / q2, tolerance, max_denominator);
  if (!ratio || ratio->numerator > max_denominator) return std::nullopt;
  // q1/q2 = r/s  =>  s*q1 = r*q2 is the least common period.
  return CommonMultiple{static_cast<double>(ratio->denominator) * q1, ratio->denominator, ratio->numerator};
}

}  // namespace apcharge::numerics
