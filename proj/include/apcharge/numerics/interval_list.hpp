#pragma once

#include <span>
#include <vector>

namespace apcharge::numerics {

// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi > lo ? hi - lo : 0.0; }
  bool empty() const noexcept { return !(hi > lo); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// A finite union of half-open intervals, kept sorted, disjoint and with
// touching pieces merged, so structural equality is set equality.
class IntervalList {
 public:
  IntervalList() = default;
  explicit IntervalList(std::vector<Interval> pieces);

  std::span<const Interval> pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }
  double measure() const noexcept;
  // Lebesgue measure of the intersection with [lo, hi).
  double measure_within(double lo, double hi) const noexcept;
  bool contains(double x) const noexcept;

  IntervalList unite(const IntervalList& other) const;
  IntervalList intersect(const IntervalList& other) const;
  IntervalList subtract(const IntervalList& other) const;
  // Complement relative to [lo, hi).
  IntervalList complement_within(double lo, double hi) const;
  IntervalList shifted(double h) const;

  // Smallest interval containing every piece; empty interval when empty.
  Interval hull() const noexcept;

  friend bool operator==(const IntervalList&, const IntervalList&) = default;

 private:
  std::vector<Interval> pieces_;
};

}  // namespace apcharge::numerics
