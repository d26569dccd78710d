#include "apcharge/numerics/interval_list.hpp"

#include <algorithm>

#include "apcharge/numerics/compensated.hpp"

namespace apcharge::numerics {

IntervalList::IntervalList(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& iv) { return iv.empty(); });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  for (const Interval& iv : pieces) {
    if (!pieces_.empty() && iv.lo <= pieces_.back().hi) {
      pieces_.back().hi = std::max(pieces_.back().hi, iv.hi);
    } else {
      pieces_.push_back(iv);
    }
  }
}

double IntervalList::measure() const noexcept {
  CompensatedSum acc;
  for (const Interval& iv : pieces_) acc.add(iv.length());
  return acc.value();
}

double IntervalList::measure_within(double lo, double hi) const noexcept {
  CompensatedSum acc;
  for (const Interval& iv : pieces_) {
    const double a = std::max(lo, iv.lo);
    const double b = std::min(hi, iv.hi);
    if (b > a) acc.add(b - a);
  }
  return acc.value();
}

bool IntervalList::contains(double x) const noexcept {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == pieces_.begin()) return false;
  --it;
  return x >= it->lo && x < it->hi;
}

IntervalList IntervalList::unite(const IntervalList& other) const {
  std::vector<Interval> all(pieces_.begin(), pieces_.end());
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return IntervalList(std::move(all));
}

IntervalList IntervalList::intersect(const IntervalList& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < other.pieces_.size()) {
    const Interval& a = pieces_[i];
    const Interval& b = other.pieces_[j];
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalList(std::move(out));
}

IntervalList IntervalList::subtract(const IntervalList& other) const {
  if (pieces_.empty()) return {};
  const Interval h = hull();
  return intersect(other.complement_within(h.lo, h.hi));
}

IntervalList IntervalList::complement_within(double lo, double hi) const {
  std::vector<Interval> out;
  double cursor = lo;
  for (const Interval& iv : pieces_) {
    if (iv.hi <= lo) continue;
    if (iv.lo >= hi) break;
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = std::max(cursor, iv.hi);
  }
  if (cursor < hi) out.push_back({cursor, hi});
  return IntervalList(std::move(out));
}

IntervalList IntervalList::shifted(double h) const {
  std::vector<Interval> out;
  out.reserve(pieces_.size());
  for (const Interval& iv : pieces_) out.push_back({iv.lo + h, iv.hi + h});
  return IntervalList(std::move(out));
}

Interval IntervalList::hull() const noexcept {
  if (pieces_.empty()) return {};
  return {pieces_.front().lo, pieces_.back().hi};
}

}  // namespace apcharge::numerics
