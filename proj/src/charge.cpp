#include "apcharge/charge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge {

namespace {

using PointVec = std::vector<Point>;

PointVec sorted_unique(PointVec v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

PointVec vec_union(const PointVec& a, const PointVec& b) {
  PointVec out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointVec vec_intersection(const PointVec& a, const PointVec& b) {
  PointVec out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointVec vec_difference(const PointVec& a, const PointVec& b) {
  PointVec out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- SetExpr

SetExpr SetExpr::finite(std::vector<Point> pts) { return SetExpr{Kind::Finite, sorted_unique(std::move(pts))}; }

SetExpr SetExpr::cofinite(std::vector<Point> excluded) {
  return SetExpr{Kind::Cofinite, sorted_unique(std::move(excluded))};
}

bool SetExpr::contains(Point p) const noexcept {
  const bool listed = std::binary_search(points.begin(), points.end(), p);
  return kind == Kind::Finite ? listed : !listed;
}

// ------------------------------------------------------------ FieldOfSets

FieldOfSets FieldOfSets::power_set(std::vector<Point> atoms) {
  FieldOfSets f;
  f.variant_ = Variant::FinitePowerSet;
  f.atoms_ = sorted_unique(std::move(atoms));
  return f;
}

FieldOfSets FieldOfSets::finite_cofinite() {
  FieldOfSets f;
  f.variant_ = Variant::FiniteCofinite;
  return f;
}

SetExpr FieldOfSets::universe() const {
  if (variant_ == Variant::FinitePowerSet) return SetExpr::finite(atoms_);
  return SetExpr::cofinite({});
}

SetExpr FieldOfSets::canonical(SetExpr e) const {
  e.points = sorted_unique(std::move(e.points));
  if (variant_ == Variant::FinitePowerSet) {
    if (e.kind == SetExpr::Kind::Cofinite) return SetExpr::finite(vec_difference(atoms_, e.points));
    if (!std::includes(atoms_.begin(), atoms_.end(), e.points.begin(), e.points.end())) {
      throw Error(ErrorKind::InvalidArgument, "set mentions a point that is not an atom of the field");
    }
    return e;
  }
  if (!e.points.empty() && e.points.front() == 0) {
    throw Error(ErrorKind::InvalidArgument, "finite/co-finite field points start at 1");
  }
  return e;
}

SetExpr FieldOfSets::complement(const SetExpr& e) const {
  const SetExpr c = canonical(e);
  if (variant_ == Variant::FinitePowerSet) return SetExpr::finite(vec_difference(atoms_, c.points));
  return SetExpr{c.kind == SetExpr::Kind::Finite ? SetExpr::Kind::Cofinite : SetExpr::Kind::Finite, c.points};
}

SetExpr FieldOfSets::unite(const SetExpr& a, const SetExpr& b) const {
  const SetExpr x = canonical(a);
  const SetExpr y = canonical(b);
  using K = SetExpr::Kind;
  if (x.kind == K::Finite && y.kind == K::Finite) return SetExpr{K::Finite, vec_union(x.points, y.points)};
  if (x.kind == K::Cofinite && y.kind == K::Cofinite) return SetExpr{K::Cofinite, vec_intersection(x.points, y.points)};
  const SetExpr& fin = x.kind == K::Finite ? x : y;
  const SetExpr& cof = x.kind == K::Finite ? y : x;
  return SetExpr{K::Cofinite, vec_difference(cof.points, fin.points)};
}

SetExpr FieldOfSets::intersect(const SetExpr& a, const SetExpr& b) const {
  const SetExpr x = canonical(a);
  const SetExpr y = canonical(b);
  using K = SetExpr::Kind;
  if (x.kind == K::Finite && y.kind == K::Finite) return SetExpr{K::Finite, vec_intersection(x.points, y.points)};
  if (x.kind == K::Cofinite && y.kind == K::Cofinite) return SetExpr{K::Cofinite, vec_union(x.points, y.points)};
  const SetExpr& fin = x.kind == K::Finite ? x : y;
  const SetExpr& cof = x.kind == K::Finite ? y : x;
  return SetExpr{K::Finite, vec_difference(fin.points, cof.points)};
}

SetExpr FieldOfSets::difference(const SetExpr& a, const SetExpr& b) const { return intersect(a, complement(b)); }

// -------------------------------------------------------- CofiniteWeights

CofiniteWeights CofiniteWeights::geometric(double first, double ratio) {
  if (!(first >= 0.0) || !(ratio >= 0.0) || !(ratio < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "geometric weights need first >= 0 and 0 <= ratio < 1");
  }
  CofiniteWeights w;
  w.geometric_ = true;
  w.first_ = first;
  w.ratio_ = ratio;
  return w;
}

CofiniteWeights CofiniteWeights::listed(std::vector<double> weights) {
  for (double x : weights) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "point weights must be >= 0");
  }
  CofiniteWeights w;
  w.listed_ = std::move(weights);
  w.listed_suffix_.assign(w.listed_.size() + 1, 0.0);
  numerics::CompensatedSum acc;
  for (std::size_t i = w.listed_.size(); i-- > 0;) {
    acc.add(w.listed_[i]);
    w.listed_suffix_[i] = acc.value();
  }
  return w;
}

double CofiniteWeights::weight(Point n) const noexcept {
  if (n == 0) return 0.0;
  if (geometric_) return first_ * std::pow(ratio_, static_cast<double>(n - 1));
  return n <= listed_.size() ? listed_[n - 1] : 0.0;
}

double CofiniteWeights::total() const noexcept { return tail_mass(0); }

double CofiniteWeights::tail_mass(Point k) const noexcept {
  if (geometric_) return first_ * std::pow(ratio_, static_cast<double>(k)) / (1.0 - ratio_);
  if (listed_suffix_.empty()) return 0.0;
  return k < listed_.size() ? listed_suffix_[k] : 0.0;
}

// ----------------------------------------------------------------- Charge

Charge Charge::on_atoms(std::vector<Point> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size()) throw Error(ErrorKind::InvalidArgument, "one weight per atom required");
  std::vector<std::pair<Point, double>> pairs;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorKind::InvalidArgument, "atom weights must be finite and >= 0");
    }
    pairs.emplace_back(atoms[i], weights[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].first == pairs[i - 1].first) throw Error(ErrorKind::InvalidArgument, "duplicate atom");
  }
  Charge mu;
  std::vector<Point> sorted_atoms;
  numerics::CompensatedSum total;
  for (const auto& [a, w] : pairs) {
    sorted_atoms.push_back(a);
    mu.atom_weights_.push_back(w);
    total.add(w);
  }
  mu.field_ = FieldOfSets::power_set(std::move(sorted_atoms));
  mu.total_ = total.value();
  return mu;
}

Charge Charge::finite_cofinite(CofiniteWeights weights, double total_mass) {
  if (!(total_mass >= weights.total()) || !std::isfinite(total_mass)) {
    throw Error(ErrorKind::InvalidArgument, "total mass must be finite and at least the sum of point weights");
  }
  Charge mu;
  mu.field_ = FieldOfSets::finite_cofinite();
  mu.weights_ = std::move(weights);
  mu.total_ = total_mass;
  return mu;
}

Charge Charge::halving_cofinite(double total_mass) {
  return finite_cofinite(CofiniteWeights::geometric(0.5, 0.5), total_mass);
}

double Charge::weight_of(Point p) const noexcept {
  if (field_.variant() == FieldOfSets::Variant::FiniteCofinite) return weights_.weight(p);
  const auto atoms = field_.atoms();
  const auto it = std::lower_bound(atoms.begin(), atoms.end(), p);
  if (it == atoms.end() || *it != p) return 0.0;
  return atom_weights_[static_cast<std::size_t>(it - atoms.begin())];
}

double Charge::mass_at_infinity() const noexcept {
  if (field_.variant() != FieldOfSets::Variant::FiniteCofinite) return 0.0;
  return total_ - weights_.total();
}

double Charge::measure(const SetExpr& e) const {
  const SetExpr c = field_.canonical(e);
  numerics::CompensatedSum listed;
  for (Point p : c.points) listed.add(weight_of(p));
  if (c.kind == SetExpr::Kind::Finite) return listed.value();
  return total_ - listed.value();
}

double outer_charge(const Charge& mu, const SetExpr& e) { return mu.outer(e); }

nlohmann::json to_json(const Charge& mu) {
  nlohmann::json j;
  if (mu.field().variant() == FieldOfSets::Variant::FinitePowerSet) {
    j["variant"] = "finite_power_set";
    j["atoms"] = std::vector<Point>(mu.field().atoms().begin(), mu.field().atoms().end());
    j["atom_weights"] = std::vector<double>(mu.atom_weights().begin(), mu.atom_weights().end());
  } else {
    j["variant"] = "finite_cofinite";
    const CofiniteWeights& w = mu.cofinite_weights();
    if (w.is_geometric()) {
      j["weights"] = {{"geometric", {{"first", w.first()}, {"ratio", w.ratio()}}}};
    } else {
      j["weights"] = std::vector<double>(w.listed_weights().begin(), w.listed_weights().end());
    }
  }
  j["total_mass"] = mu.total();
  return j;
}

Charge charge_from_json(const nlohmann::json& j) {
  try {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "finite_power_set") {
      auto atoms = j.at("atoms").get<std::vector<Point>>();
      auto weights = j.at("atom_weights").get<std::vector<double>>();
      Charge mu = Charge::on_atoms(std::move(atoms), std::move(weights));
      if (j.contains("total_mass") && std::fabs(j.at("total_mass").get<double>() - mu.total()) > 1e-12) {
        throw Error(ErrorKind::ParseError, "total_mass disagrees with the atom weights");
      }
      return mu;
    }
    if (variant == "finite_cofinite") {
      const auto& w = j.at("weights");
      CofiniteWeights weights = w.is_array()
                                    ? CofiniteWeights::listed(w.get<std::vector<double>>())
                                    : CofiniteWeights::geometric(w.at("geometric").at("first").get<double>(),
                                                                 w.at("geometric").at("ratio").get<double>());
      return Charge::finite_cofinite(std::move(weights), j.at("total_mass").get<double>());
    }
    throw Error(ErrorKind::ParseError, "unknown charge variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed charge JSON: ") + e.what());
  }
}

// --------------------------------------------------------- SimpleFunction

SimpleFunction SimpleFunction::make(const FieldOfSets& field, std::vector<Term> terms) {
  for (Term& t : terms) t.set = field.canonical(std::move(t.set));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t k = i + 1; k < terms.size(); ++k) {
      if (!field.disjoint(terms[i].set, terms[k].set)) {
        throw Error(ErrorKind::InvalidArgument, "simple function level sets must be pairwise disjoint");
      }
    }
  }
  std::map<double, SetExpr> by_value;
  for (Term& t : terms) {
    if (t.value == 0.0 || t.set.is_empty()) continue;
    if (!std::isfinite(t.value)) throw Error(ErrorKind::InvalidArgument, "simple function values must be finite");
    auto [it, inserted] = by_value.try_emplace(t.value, t.set);
    if (!inserted) it->second = field.unite(it->second, t.set);
  }
  SimpleFunction f;
  for (auto& [v, s] : by_value) f.terms_.push_back(Term{v, std::move(s)});
  return f;
}

SimpleFunction SimpleFunction::indicator(const FieldOfSets& field, SetExpr e, double value) {
  return make(field, {Term{value, std::move(e)}});
}

double SimpleFunction::operator()(Point p) const noexcept {
  for (const Term& t : terms_) {
    if (t.set.contains(p)) return t.value;
  }
  return 0.0;
}

double SimpleFunction::sup_abs() const noexcept {
  double m = 0.0;
  for (const Term& t : terms_) m = std::max(m, std::fabs(t.value));
  return m;
}

// ---------------------------------------------------------- pointwise ops

namespace {

PointVec mentioned_points(const FieldOfSets& field, std::initializer_list<const SimpleFunction*> fs) {
  if (field.variant() == FieldOfSets::Variant::FinitePowerSet) {
    return PointVec(field.atoms().begin(), field.atoms().end());
  }
  PointVec pts;
  for (const SimpleFunction* f : fs) {
    for (const auto& t : f->terms()) pts.insert(pts.end(), t.set.points.begin(), t.set.points.end());
  }
  return sorted_unique(std::move(pts));
}

double rest_value(const SimpleFunction& f) {
  for (const auto& t : f.terms()) {
    if (t.set.kind == SetExpr::Kind::Cofinite) return t.value;
  }
  return 0.0;
}

}  // namespace

PointwiseForm pointwise(const FieldOfSets& field, const SimpleFunction& f) {
  PointwiseForm form;
  for (Point p : mentioned_points(field, {&f})) form.points.emplace_back(p, f(p));
  if (field.variant() == FieldOfSets::Variant::FiniteCofinite) {
    form.has_rest = true;
    form.rest = rest_value(f);
  }
  return form;
}

PointwiseForm pointwise_common(const FieldOfSets& field, const SimpleFunction& f, const SimpleFunction& g,
                               const std::function<double(double, double)>& op) {
  PointwiseForm form;
  for (Point p : mentioned_points(field, {&f, &g})) form.points.emplace_back(p, op(f(p), g(p)));
  if (field.variant() == FieldOfSets::Variant::FiniteCofinite) {
    form.has_rest = true;
    form.rest = op(rest_value(f), rest_value(g));
  }
  return form;
}

SimpleFunction from_pointwise(const FieldOfSets& field, const PointwiseForm& form) {
  std::map<double, PointVec> levels;
  PointVec off_rest;
  for (const auto& [p, v] : form.points) {
    if (form.has_rest && v == form.rest) continue;
    off_rest.push_back(p);
    if (v != 0.0) levels[v].push_back(p);
  }
  std::vector<SimpleFunction::Term> terms;
  for (auto& [v, pts] : levels) terms.push_back({v, SetExpr::finite(std::move(pts))});
  if (form.has_rest && form.rest != 0.0) terms.push_back({form.rest, SetExpr::cofinite(std::move(off_rest))});
  return SimpleFunction::make(field, std::move(terms));
}

SimpleFunction combine_with(const FieldOfSets& field, const SimpleFunction& f, const SimpleFunction& g,
                            const std::function<double(double, double)>& op) {
  return from_pointwise(field, pointwise_common(field, f, g, op));
}

SimpleFunction apply(const FieldOfSets& field, const SimpleFunction& f, const std::function<double(double)>& fn) {
  PointwiseForm form = pointwise(field, f);
  for (auto& entry : form.points) entry.second = fn(entry.second);
  if (form.has_rest) form.rest = fn(form.rest);
  return from_pointwise(field, form);
}

SimpleFunction combine(const FieldOfSets& field, const SimpleFunction& f, const SimpleFunction& g, PointwiseOp op) {
  switch (op) {
    case PointwiseOp::Max: return combine_with(field, f, g, [](double a, double b) { return std::max(a, b); });
    case PointwiseOp::Min: return combine_with(field, f, g, [](double a, double b) { return std::min(a, b); });
    case PointwiseOp::Add: return combine_with(field, f, g, std::plus<double>{});
    case PointwiseOp::Sub: return combine_with(field, f, g, std::minus<double>{});
    case PointwiseOp::Mul: return combine_with(field, f, g, std::multiplies<double>{});
    case PointwiseOp::Abs: return apply(field, f, [](double a) { return std::fabs(a); });
  }
  throw Error(ErrorKind::InvalidArgument, "unknown pointwise operation");
}

double integrate_simple(const Charge& mu, const SimpleFunction& f) {
  numerics::CompensatedSum acc;
  for (const auto& t : f.terms()) acc.add(t.value * mu.measure(t.set));
  return acc.value();
}

// ------------------------------------------------------- StepDistribution

StepDistribution StepDistribution::from_steps(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "step distribution needs one value per breakpoint");
  }
  StepDistribution d;
  double prev_t = 0.0;
  double prev_c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = breakpoints[i];
    const double c = values[i];
    if (!(t > prev_t) || !std::isfinite(t)) {
      throw Error(ErrorKind::InvalidArgument, "breakpoints must be positive, finite and strictly increasing");
    }
    if (!(c >= 0.0) || c > prev_c) throw Error(ErrorKind::InvalidArgument, "distribution values must be nonincreasing and >= 0");
    prev_t = t;
    prev_c = c;
    if (c == 0.0) break;
    if (!d.values_.empty() && d.values_.back() == c) {
      d.breakpoints_.back() = t;
    } else {
      d.breakpoints_.push_back(t);
      d.values_.push_back(c);
    }
  }
  return d;
}

StepDistribution StepDistribution::from_levels(std::vector<std::pair<double, double>> abs_value_and_mass) {
  std::erase_if(abs_value_and_mass, [](const auto& lm) { return !(lm.first > 0.0) || !(lm.second > 0.0); });
  std::sort(abs_value_and_mass.begin(), abs_value_and_mass.end());
  std::vector<double> levels;
  std::vector<double> masses;
  for (const auto& [v, m] : abs_value_and_mass) {
    if (!levels.empty() && levels.back() == v) {
      masses.back() += m;
    } else {
      levels.push_back(v);
      masses.push_back(m);
    }
  }
  std::vector<double> values(levels.size());
  numerics::CompensatedSum acc;
  for (std::size_t i = levels.size(); i-- > 0;) {
    acc.add(masses[i]);
    values[i] = acc.value();
  }
  // Guard against a compensated partial sum dipping below its successor.
  for (std::size_t i = values.size(); i-- > 1;) values[i - 1] = std::max(values[i - 1], values[i]);
  return from_steps(std::move(levels), std::move(values));
}

double StepDistribution::operator()(double t) const noexcept {
  if (values_.empty()) return 0.0;
  if (t < 0.0) return values_.front();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double StepDistribution::total_integral() const noexcept {
  numerics::CompensatedSum acc;
  for (std::size_t i = 0; i < values_.size(); ++i) acc.add(values_[i] * (right(i) - left(i)));
  return acc.value();
}

StepDistribution distribution_simple(const Charge& mu, const SimpleFunction& f) {
  std::vector<std::pair<double, double>> levels;
  for (const auto& t : f.terms()) levels.emplace_back(std::fabs(t.value), mu.measure(t.set));
  return StepDistribution::from_levels(std::move(levels));
}

double integrate_abs_difference(const StepDistribution& a, const StepDistribution& b, double from) {
  from = std::max(from, 0.0);
  std::vector<double> cuts{from};
  for (double t : a.breakpoints()) {
    if (t > from) cuts.push_back(t);
  }
  for (double t : b.breakpoints()) {
    if (t > from) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  numerics::CompensatedSum acc;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = cuts[k - 1];
    acc.add(std::fabs(a(lo) - b(lo)) * (cuts[k] - lo));
  }
  return acc.value();
}

double f_metric_norm(const StepDistribution& d) {
  double best = d.support_end();
  for (std::size_t i = 0; i < d.size(); ++i) best = std::min(best, std::max(d.left(i), d.values()[i]));
  return std::min(1.0, best);
}

double f_metric_norm(const Charge& mu, const SimpleFunction& f) { return f_metric_norm(distribution_simple(mu, f)); }

// ------------------------------------------------------------- layer cake

namespace {

bool same_sign(const SimpleFunction& f, const SimpleFunction& g) {
  auto all = [](const SimpleFunction& h, auto pred) {
    return std::all_of(h.terms().begin(), h.terms().end(), [&](const auto& t) { return pred(t.value); });
  };
  auto nonneg = [](double v) { return v >= 0.0; };
  auto nonpos = [](double v) { return v <= 0.0; };
  return (all(f, nonneg) && all(g, nonneg)) || (all(f, nonpos) && all(g, nonpos));
}

}  // namespace

LayerCakeReport layer_cake_check(const Charge& mu, const SimpleFunction& f, const SimpleFunction& g, double delta,
                                 double tolerance) {
  const FieldOfSets& field = mu.field();
  const auto abs_f = combine(field, f, f, PointwiseOp::Abs);
  const StepDistribution df = distribution_simple(mu, f);
  const StepDistribution dg = distribution_simple(mu, g);
  auto slack = [&](double a, double b) { return tolerance * std::max({1.0, std::fabs(a), std::fabs(b)}); };

  LayerCakeReport r;
  r.integral_identity.lhs = integrate_simple(mu, abs_f);
  r.integral_identity.rhs = df.total_integral();
  r.integral_identity.holds =
      std::fabs(r.integral_identity.lhs - r.integral_identity.rhs) <= slack(r.integral_identity.lhs, r.integral_identity.rhs);

  r.lattice_identity.applicable = same_sign(f, g);
  if (r.lattice_identity.applicable) {
    const auto diff = combine_with(field, f, g, [](double a, double b) { return std::fabs(a - b); });
    const auto hi = combine(field, f, g, PointwiseOp::Max);
    const auto lo = combine(field, f, g, PointwiseOp::Min);
    r.lattice_identity.lhs = integrate_simple(mu, diff);
    r.lattice_identity.rhs = integrate_abs_difference(distribution_simple(mu, hi), distribution_simple(mu, lo));
    r.lattice_identity.holds =
        std::fabs(r.lattice_identity.lhs - r.lattice_identity.rhs) <= slack(r.lattice_identity.lhs, r.lattice_identity.rhs);
  }

  r.difference_bound.lhs = integrate_abs_difference(df, dg);
  r.difference_bound.rhs = integrate_simple(
      mu, combine_with(field, f, g, [](double a, double b) { return std::fabs(std::fabs(a) - std::fabs(b)); }));
  r.difference_bound.holds =
      r.difference_bound.lhs <= r.difference_bound.rhs + slack(r.difference_bound.lhs, r.difference_bound.rhs);

  r.tail_bound.lhs = integrate_abs_difference(df, dg, delta);
  r.tail_bound.rhs = integrate_simple(mu, combine_with(field, f, g, [delta](double a, double b) {
                                        const bool big = std::fabs(a) > delta || std::fabs(b) > delta;
                                        return big ? std::fabs(std::fabs(a) - std::fabs(b)) : 0.0;
                                      }));
  r.tail_bound.holds = r.tail_bound.lhs <= r.tail_bound.rhs + slack(r.tail_bound.lhs, r.tail_bound.rhs);
  return r;
}

}  // namespace apcharge
