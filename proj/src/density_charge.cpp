#include "apcharge/density_charge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"
#include "apcharge/numerics/rational.hpp"

namespace apcharge {

// ------------------------------------------------------------ PeriodicSet

PeriodicSet PeriodicSet::make(double period, std::vector<Interval> trace) {
  if (!(period > 0.0) || !std::isfinite(period)) throw Error(ErrorKind::InvalidArgument, "period must be positive and finite");
  std::sort(trace.begin(), trace.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Interval& iv = trace[i];
    if (!(iv.lo >= 0.0) || !(iv.lo < iv.hi) || !(iv.hi <= period)) {
      throw Error(ErrorKind::InvalidArgument, "trace pieces must satisfy 0 <= a < b <= period");
    }
    if (i > 0 && iv.lo < trace[i - 1].hi) throw Error(ErrorKind::InvalidArgument, "trace pieces overlap");
  }
  PeriodicSet s;
  s.period_ = period;
  s.trace_ = IntervalList(std::move(trace));
  return s;
}

bool PeriodicSet::trace_full() const noexcept {
  const auto pieces = trace_.pieces();
  return pieces.size() == 1 && pieces[0].lo == 0.0 && pieces[0].hi == period_;
}

bool PeriodicSet::contains(double x) const noexcept {
  double r = x - period_ * std::floor(x / period_);
  if (r >= period_) r = 0.0;
  return trace_.contains(r);
}

IntervalList PeriodicSet::over_window(double lo, double hi) const {
  if (!(hi > lo) || trace_.empty()) return {};
  const auto k0 = static_cast<std::int64_t>(std::floor(lo / period_));
  const auto k1 = static_cast<std::int64_t>(std::ceil(hi / period_));
  std::vector<Interval> pieces;
  for (std::int64_t k = k0; k < k1; ++k) {
    const double base = static_cast<double>(k) * period_;
    for (const Interval& iv : trace_.pieces()) {
      const double a = std::max(lo, base + iv.lo);
      const double b = std::min(hi, base + iv.hi);
      if (b > a) pieces.push_back({a, b});
    }
  }
  return IntervalList(std::move(pieces));
}

double PeriodicSet::measure_within(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  const double m = trace_measure();
  // lambda(P n [0, x)), signed for x < 0.
  auto cumulative = [&](double x) {
    const double n = std::floor(x / period_);
    double r = x - n * period_;
    if (r >= period_) r = period_;
    return n * m + trace_.measure_within(0.0, r);
  };
  return cumulative(hi) - cumulative(lo);
}

PeriodicSet PeriodicSet::retiled(std::int64_t copies) const {
  if (copies < 1) throw Error(ErrorKind::InvalidArgument, "copies must be >= 1");
  const double new_period = static_cast<double>(copies) * period_;
  std::vector<Interval> pieces;
  for (std::int64_t j = 0; j < copies; ++j) {
    const double base = static_cast<double>(j) * period_;
    for (const Interval& iv : trace_.pieces()) {
      const double a = base + iv.lo;
      const double b = std::min(new_period, base + iv.hi);
      if (b > a) pieces.push_back({a, b});
    }
  }
  PeriodicSet s;
  s.period_ = new_period;
  s.trace_ = IntervalList(std::move(pieces));
  return s;
}

PeriodicSet PeriodicSet::complement() const {
  PeriodicSet s;
  s.period_ = period_;
  s.trace_ = trace_.complement_within(0.0, period_);
  return s;
}

PeriodicSet PeriodicSet::shifted(double h) const {
  const double offset = h - period_ * std::floor(h / period_);
  std::vector<Interval> pieces;
  for (const Interval& iv : trace_.pieces()) {
    const double a = iv.lo + offset;
    const double b = iv.hi + offset;
    if (a < period_) pieces.push_back({a, std::min(b, period_)});
    if (b > period_) pieces.push_back({std::max(a, period_) - period_, b - period_});
  }
  PeriodicSet s;
  s.period_ = period_;
  s.trace_ = IntervalList(std::move(pieces));
  return s;
}

// ------------------------------------------------------------- DensitySet

DensitySet DensitySet::make(PeriodicSet periodic, IntervalList plus, IntervalList minus) {
  DensitySet e;
  const Interval w = plus.unite(minus).hull();
  if (!w.empty()) {
    const IntervalList p_w = periodic.over_window(w.lo, w.hi);
    e.plus_ = plus.subtract(p_w);
    e.minus_ = minus.intersect(p_w).subtract(plus);
  }
  e.periodic_ = std::move(periodic);
  return e;
}

bool DensitySet::contains(double x) const noexcept {
  return plus_.contains(x) || (periodic_.contains(x) && !minus_.contains(x));
}

IntervalList DensitySet::over_window(double lo, double hi) const {
  if (!(hi > lo)) return {};
  const IntervalList window({{lo, hi}});
  return periodic_.over_window(lo, hi).subtract(minus_).unite(plus_).intersect(window);
}

double DensitySet::measure_within(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  return periodic_.measure_within(lo, hi) - minus_.measure_within(lo, hi) + plus_.measure_within(lo, hi);
}

double gamma_eval(const DensitySet& e) { return e.periodic().trace_measure() / e.periodic().period(); }

namespace {

// Both periodic parts described over one common period.
std::pair<PeriodicSet, PeriodicSet> common_tiling(const PeriodicSet& a, const PeriodicSet& b) {
  auto trivial = [](const PeriodicSet& s) { return s.trace_empty() || s.trace_full(); };
  auto redescribe = [](const PeriodicSet& s, double period) {
    return s.trace_empty() ? PeriodicSet::empty(period) : PeriodicSet::full(period);
  };
  if (trivial(a)) return {redescribe(a, b.period()), b};
  if (trivial(b)) return {a, redescribe(b, a.period())};
  const auto cm = numerics::common_multiple(a.period(), b.period());
  if (!cm) {
    std::ostringstream os;
    os.precision(17);
    os << "periods " << a.period() << " and " << b.period()
       << " have no common multiple; the density of the combination is outside the computable domain";
    throw Error(ErrorKind::IncommensurablePeriods, os.str());
  }
  PeriodicSet ra = a.retiled(cm->copies_of_first);
  PeriodicSet rb = b.retiled(cm->copies_of_second);
  // Rounding can leave the two periods a few ulps apart; clip b onto a's.
  if (rb.period() != ra.period()) {
    std::vector<Interval> pieces;
    for (const Interval& iv : rb.trace().pieces()) {
      const double hi = std::min(iv.hi, ra.period());
      if (hi > iv.lo) pieces.push_back({iv.lo, hi});
    }
    rb = PeriodicSet::make(ra.period(), std::move(pieces));
  }
  return {std::move(ra), std::move(rb)};
}

IntervalList apply_op(const IntervalList& a, const IntervalList& b, SetOp op) {
  return op == SetOp::Union ? a.unite(b) : a.intersect(b);
}

}  // namespace

DensitySet complement(const DensitySet& e) { return DensitySet::make(e.periodic().complement(), e.minus(), e.plus()); }

DensitySet set_algebra(const DensitySet& e, const DensitySet& f, SetOp op) {
  if (op == SetOp::Complement) return complement(e);
  const auto [pe, pf] = common_tiling(e.periodic(), f.periodic());
  const PeriodicSet result_periodic =
      PeriodicSet::make(pe.period(), [&] {
        const IntervalList t = apply_op(pe.trace(), pf.trace(), op);
        return std::vector<Interval>(t.pieces().begin(), t.pieces().end());
      }());
  const Interval w = e.plus().unite(e.minus()).unite(f.plus()).unite(f.minus()).hull();
  if (w.empty()) return DensitySet::make(result_periodic);
  const IntervalList exact = apply_op(e.over_window(w.lo, w.hi), f.over_window(w.lo, w.hi), op);
  const IntervalList base = result_periodic.over_window(w.lo, w.hi);
  return DensitySet::make(result_periodic, exact.subtract(base), base.subtract(exact));
}

DensitySet unite(const DensitySet& e, const DensitySet& f) { return set_algebra(e, f, SetOp::Union); }
DensitySet intersect(const DensitySet& e, const DensitySet& f) { return set_algebra(e, f, SetOp::Intersection); }

DensitySet shift(const DensitySet& e, double h) {
  return DensitySet::make(e.periodic().shifted(h), e.plus().shifted(h), e.minus().shifted(h));
}

// ---------------------------------------------------------------- profile

DensityProfile density_profile(const DensitySet& e, double tau0, int doublings) {
  if (!(tau0 > 0.0) || doublings < 0) throw Error(ErrorKind::InvalidArgument, "need tau0 > 0 and doublings >= 0");
  DensityProfile prof;
  double tau = tau0;
  for (int j = 0; j <= doublings; ++j, tau *= 2.0) {
    prof.samples.emplace_back(tau, e.measure_within(-tau, tau) / (2.0 * tau));
  }
  prof.estimate = prof.samples.back().second;
  if (prof.samples.size() > 1) prof.residual = std::fabs(prof.estimate - prof.samples[prof.samples.size() - 2].second);
  return prof;
}

double density_profile_constant(const DensitySet& e) {
  return 2.0 * static_cast<double>(e.periodic().trace().pieces().size()) + e.plus().measure() + e.minus().measure();
}

// ---------------------------------------------------- periodic functions

std::vector<double> periodic_distribution(const numerics::BatchFunction& f, double period, std::span<const double> levels,
                                          const DistributionOptions& options) {
  if (!(period > 0.0) || options.grid < 4 || !(options.tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "need period > 0, grid >= 4 and tol > 0");
  }
  const std::size_t n = options.grid;
  const double h = period / static_cast<double>(n);
  std::vector<double> xs(n + 1);
  for (std::size_t j = 0; j <= n; ++j) xs[j] = period * static_cast<double>(j) / static_cast<double>(n);
  std::vector<double> ys(n + 1);
  f(xs, ys);
  for (double& y : ys) y = std::fabs(y);

  std::vector<double> out;
  out.reserve(levels.size());
  for (double s : levels) {
    numerics::CompensatedSum measure;
    std::vector<std::size_t> cells;
    for (std::size_t j = 0; j < n; ++j) {
      const bool a = ys[j] > s;
      const bool b = ys[j + 1] > s;
      if (a && b) {
        measure.add(xs[j + 1] - xs[j]);
      } else if (a != b) {
        cells.push_back(j);
      }
    }
    if (cells.size() > n / 4) {
      throw Error(ErrorKind::GridTooCoarse, std::to_string(cells.size()) + " crossings on a grid of " +
                                                std::to_string(n) + " cells; refine the grid");
    }
    std::vector<double> lo(cells.size());
    std::vector<double> hi(cells.size());
    std::vector<char> above_lo(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      lo[k] = xs[cells[k]];
      hi[k] = xs[cells[k] + 1];
      above_lo[k] = ys[cells[k]] > s;
    }
    std::vector<double> mid(cells.size());
    std::vector<double> fm(cells.size());
    for (double width = h; width > options.tol && !cells.empty(); width *= 0.5) {
      for (std::size_t k = 0; k < cells.size(); ++k) mid[k] = 0.5 * (lo[k] + hi[k]);
      f(mid, fm);
      for (std::size_t k = 0; k < cells.size(); ++k) {
        const bool above = std::fabs(fm[k]) > s;
        if (above == static_cast<bool>(above_lo[k])) {
          lo[k] = mid[k];
        } else {
          hi[k] = mid[k];
        }
      }
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const double root = 0.5 * (lo[k] + hi[k]);
      const std::size_t j = cells[k];
      measure.add(above_lo[k] ? root - xs[j] : xs[j + 1] - root);
    }
    out.push_back(std::clamp(measure.value() / period, 0.0, 1.0));
  }
  return out;
}

double periodic_distribution(const numerics::BatchFunction& f, double period, double s,
                             const DistributionOptions& options) {
  const double levels[1] = {s};
  return periodic_distribution(f, period, levels, options).front();
}

double periodic_integral(const numerics::BatchFunction& f, double period, double anchor, double tol) {
  if (!(period > 0.0) || !(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "need period > 0 and tol > 0");
  numerics::QuadratureOptions opts;
  opts.abs_tol = tol * 2.0 * period;
  opts.initial_panels = 64;
  const auto r = numerics::adaptive_simpson(f, anchor - period, anchor + period, opts);
  return r.value / (2.0 * period);
}

// ---------------------------------------------------------------- parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<Interval> parse_intervals(std::string_view s) {
  std::vector<Interval> out;
  s = trim(s);
  while (!s.empty()) {
    if (s.front() != '[') throw Error(ErrorKind::ParseError, "expected '[' in interval list near '" + std::string(s) + "'");
    const auto close = s.find(')');
    if (close == std::string_view::npos) throw Error(ErrorKind::ParseError, "interval is missing its closing ')'");
    const std::string_view body = s.substr(1, close - 1);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorKind::ParseError, "interval needs two endpoints");
    const double a = parse_number(body.substr(0, comma));
    const double b = parse_number(body.substr(comma + 1));
    if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "interval endpoints must satisfy a < b");
    out.push_back({a, b});
    s = trim(s.substr(close + 1));
  }
  return out;
}

std::string shortest(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void append_intervals(std::ostringstream& os, std::span<const Interval> pieces) {
  for (const Interval& iv : pieces) os << '[' << shortest(iv.lo) << ',' << shortest(iv.hi) << ')';
}

}  // namespace

DensitySet parse_density_set(std::string_view spec) {
  double period = 1.0;
  std::vector<Interval> trace;
  std::vector<Interval> plus;
  std::vector<Interval> minus;
  bool seen_any = false;
  while (!spec.empty()) {
    const auto semi = spec.find(';');
    const std::string_view item = trim(spec.substr(0, semi));
    spec = semi == std::string_view::npos ? std::string_view{} : spec.substr(semi + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, "expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    if (key == "period") {
      period = parse_number(value);
    } else if (key == "trace") {
      trace = parse_intervals(value);
    } else if (key == "plus") {
      plus = parse_intervals(value);
    } else if (key == "minus") {
      minus = parse_intervals(value);
    } else {
      throw Error(ErrorKind::ParseError, "unknown set key '" + std::string(key) + "'");
    }
    seen_any = true;
  }
  if (!seen_any) throw Error(ErrorKind::ParseError, "empty set specification");
  return DensitySet::make(PeriodicSet::make(period, std::move(trace)), IntervalList(std::move(plus)),
                          IntervalList(std::move(minus)));
}

std::string format_density_set(const DensitySet& e) {
  std::ostringstream os;
  os << "period=" << shortest(e.periodic().period()) << ";trace=";
  append_intervals(os, e.periodic().trace().pieces());
  if (!e.plus().empty()) {
    os << ";plus=";
    append_intervals(os, e.plus().pieces());
  }
  if (!e.minus().empty()) {
    os << ";minus=";
    append_intervals(os, e.minus().pieces());
  }
  return os.str();
}

}  // namespace apcharge
