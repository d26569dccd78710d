#pragma once

// The density charge gamma(E) = lim lambda(E n [-t, t)) / 2t on the sets
// where that limit is computable: periodic interval sets, adjusted by
// bounded pieces that do not affect the density. Plus numeric tools for
// periodic functions (distribution of |f| over one period, period means).

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apcharge/charge.hpp"
#include "apcharge/numerics/interval_list.hpp"
#include "apcharge/numerics/quadrature.hpp"

namespace apcharge {

using numerics::Interval;
using numerics::IntervalList;

class PeriodicSet {
 public:
  PeriodicSet() = default;
  // Trace pieces must satisfy 0 <= a < b <= period; touching pieces merge.
  static PeriodicSet make(double period, std::vector<Interval> trace);
  static PeriodicSet empty(double period = 1.0) { return make(period, {}); }
  static PeriodicSet full(double period = 1.0) { return make(period, {{0.0, period}}); }

  double period() const noexcept { return period_; }
  const IntervalList& trace() const noexcept { return trace_; }
  double trace_measure() const noexcept { return trace_.measure(); }
  bool trace_empty() const noexcept { return trace_.empty(); }
  bool trace_full() const noexcept;

  bool contains(double x) const noexcept;
  // The set restricted to [lo, hi), as explicit intervals.
  IntervalList over_window(double lo, double hi) const;
  double measure_within(double lo, double hi) const;
  // Same set described with period copies * period().
  PeriodicSet retiled(std::int64_t copies) const;
  PeriodicSet complement() const;
  PeriodicSet shifted(double h) const;

  friend bool operator==(const PeriodicSet&, const PeriodicSet&) = default;

 private:
  double period_ = 1.0;
  IntervalList trace_;
};

// (periodic \ minus) u plus, stored canonically with plus disjoint from the
// periodic part and minus inside it.
class DensitySet {
 public:
  DensitySet() = default;
  static DensitySet make(PeriodicSet periodic, IntervalList plus = {}, IntervalList minus = {});
  static DensitySet bounded(IntervalList pieces) { return make(PeriodicSet::empty(), std::move(pieces)); }
  static DensitySet real_line() { return make(PeriodicSet::full()); }

  const PeriodicSet& periodic() const noexcept { return periodic_; }
  const IntervalList& plus() const noexcept { return plus_; }
  const IntervalList& minus() const noexcept { return minus_; }

  bool contains(double x) const noexcept;
  // Explicit intervals of the set inside [lo, hi).
  IntervalList over_window(double lo, double hi) const;
  // lambda(E n [lo, hi)).
  double measure_within(double lo, double hi) const;

  friend bool operator==(const DensitySet&, const DensitySet&) = default;

 private:
  PeriodicSet periodic_;
  IntervalList plus_;
  IntervalList minus_;
};

// trace measure / period of the periodic part.
double gamma_eval(const DensitySet& e);

enum class SetOp { Union, Intersection, Complement };

// Binary operations work over the least common period; periods must be
// commensurable (IncommensurablePeriods otherwise). An empty or full trace
// fits any period. Complement ignores f.
DensitySet set_algebra(const DensitySet& e, const DensitySet& f, SetOp op);
DensitySet complement(const DensitySet& e);
DensitySet unite(const DensitySet& e, const DensitySet& f);
DensitySet intersect(const DensitySet& e, const DensitySet& f);
DensitySet shift(const DensitySet& e, double h);

struct DensityField {
  DensitySet complement(const DensitySet& e) const { return apcharge::complement(e); }
  DensitySet unite(const DensitySet& a, const DensitySet& b) const { return apcharge::unite(a, b); }
  DensitySet intersect(const DensitySet& a, const DensitySet& b) const { return apcharge::intersect(a, b); }
};
static_assert(SetField<DensityField, DensitySet>);
static_assert(SetField<FieldOfSets, SetExpr>);

struct DensityProfile {
  std::vector<std::pair<double, double>> samples;  // (tau, lambda(E n [-tau, tau)) / 2 tau)
  double estimate = 0.0;
  double residual = 0.0;
};

// Samples at tau_j = tau0 * 2^j, j = 0..doublings.
DensityProfile density_profile(const DensitySet& e, double tau0, int doublings);

// Bound C used with |profile estimate - gamma| <= C / tau: two per trace
// piece plus the total length of the bounded pieces.
double density_profile_constant(const DensitySet& e);

struct DistributionOptions {
  std::size_t grid = 4096;
  double tol = 1e-9;
};

// lambda({|f| > s} n [0, q)) / q by scanning `grid` cells and bisecting
// every sign change of |f| - s down to width tol. Throws GridTooCoarse when
// more than a quarter of the cells contain a crossing.
double periodic_distribution(const numerics::BatchFunction& f, double period, double s,
                             const DistributionOptions& options = {});

// Several levels at once, sharing one scan of the grid.
std::vector<double> periodic_distribution(const numerics::BatchFunction& f, double period, std::span<const double> levels,
                                          const DistributionOptions& options = {});

// (1 / 2q) int_{a-q}^{a+q} f. Throws QuadratureFailure from the quadrature.
double periodic_integral(const numerics::BatchFunction& f, double period, double anchor, double tol = 1e-10);

// "period=q;trace=[a,b)[c,d);plus=[..);minus=[..)". All keys optional;
// period defaults to 1 and an absent trace is empty. ParseError on bad
// syntax, InvalidArgument on bad geometry.
DensitySet parse_density_set(std::string_view spec);
std::string format_density_set(const DensitySet& e);

}  // namespace apcharge
