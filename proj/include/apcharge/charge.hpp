#pragma once

// Charges (finitely additive set functions) on the two fields used
// throughout the library: the power set of a finite atom list, and the
// finite/co-finite subsets of the positive integers. Simple functions over
// either field, their integrals and distribution functions, and the
// layer-cake relations between them.

#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

namespace apcharge {

using Point = std::uint64_t;

struct SetExpr {
  enum class Kind { Finite, Cofinite };

  Kind kind = Kind::Finite;
  // Finite: the set itself. Cofinite: the finite part of the complement.
  // Always sorted and duplicate-free.
  std::vector<Point> points;

  static SetExpr finite(std::vector<Point> pts);
  static SetExpr cofinite(std::vector<Point> excluded);
  static SetExpr empty() { return {}; }

  bool contains(Point p) const noexcept;
  bool is_empty() const noexcept { return kind == Kind::Finite && points.empty(); }

  friend bool operator==(const SetExpr&, const SetExpr&) = default;
};

class FieldOfSets {
 public:
  enum class Variant { FinitePowerSet, FiniteCofinite };

  static FieldOfSets power_set(std::vector<Point> atoms);
  // Finite and co-finite subsets of {1, 2, 3, ...}.
  static FieldOfSets finite_cofinite();

  Variant variant() const noexcept { return variant_; }
  std::span<const Point> atoms() const noexcept { return atoms_; }

  SetExpr universe() const;
  SetExpr empty_set() const { return SetExpr::empty(); }
  // Rewrites e into this field's canonical encoding (power-set sets are
  // always Finite subsets of the atom list). Throws on foreign points.
  SetExpr canonical(SetExpr e) const;

  SetExpr complement(const SetExpr& e) const;
  SetExpr unite(const SetExpr& a, const SetExpr& b) const;
  SetExpr intersect(const SetExpr& a, const SetExpr& b) const;
  SetExpr difference(const SetExpr& a, const SetExpr& b) const;
  bool disjoint(const SetExpr& a, const SetExpr& b) const { return intersect(a, b).is_empty(); }

  friend bool operator==(const FieldOfSets&, const FieldOfSets&) = default;

 private:
  Variant variant_ = Variant::FinitePowerSet;
  std::vector<Point> atoms_;
};

// The operations density_charge's periodic-set field also provides.
template <class F, class S>
concept SetField = requires(const F& field, const S& a, const S& b) {
  { field.complement(a) } -> std::convertible_to<S>;
  { field.unite(a, b) } -> std::convertible_to<S>;
  { field.intersect(a, b) } -> std::convertible_to<S>;
};

// Point weights w_n, n >= 1, of a finite/co-finite charge, with closed-form
// partial and tail sums.
class CofiniteWeights {
 public:
  // w_n = first * ratio^(n-1), 0 <= ratio < 1.
  static CofiniteWeights geometric(double first, double ratio);
  // w_1..w_k as given, zero beyond.
  static CofiniteWeights listed(std::vector<double> weights);

  double weight(Point n) const noexcept;
  double total() const noexcept;
  // Sum of w_n over n > k.
  double tail_mass(Point k) const noexcept;

  bool is_geometric() const noexcept { return listed_.empty() && geometric_; }
  double first() const noexcept { return first_; }
  double ratio() const noexcept { return ratio_; }
  std::span<const double> listed_weights() const noexcept { return listed_; }

 private:
  bool geometric_ = false;
  double first_ = 0.0;
  double ratio_ = 0.0;
  std::vector<double> listed_;
  std::vector<double> listed_suffix_;
};

class Charge {
 public:
  static Charge on_atoms(std::vector<Point> atoms, std::vector<double> weights);
  static Charge finite_cofinite(CofiniteWeights weights, double total_mass);
  // mu({n}) = 2^-n and mu(N) = total_mass (5 by default): the standard
  // example of a Cauchy-in-charge sequence without a limit.
  static Charge halving_cofinite(double total_mass = 5.0);

  const FieldOfSets& field() const noexcept { return field_; }
  double measure(const SetExpr& e) const;
  // Outer charge. Every representable set lies in the field, so this is
  // measure() after canonicalisation.
  double outer(const SetExpr& e) const { return measure(field_.canonical(e)); }
  double total() const noexcept { return total_; }
  double weight_of(Point p) const noexcept;
  // V - sum_n w_n for finite/co-finite charges, 0 otherwise.
  double mass_at_infinity() const noexcept;

  const CofiniteWeights& cofinite_weights() const noexcept { return weights_; }
  std::span<const double> atom_weights() const noexcept { return atom_weights_; }

 private:
  FieldOfSets field_;
  std::vector<double> atom_weights_;
  CofiniteWeights weights_;
  double total_ = 0.0;
};

double outer_charge(const Charge& mu, const SetExpr& e);

nlohmann::json to_json(const Charge& mu);
Charge charge_from_json(const nlohmann::json& j);

class SimpleFunction {
 public:
  struct Term {
    double value = 0.0;
    SetExpr set;
    friend bool operator==(const Term&, const Term&) = default;
  };

  SimpleFunction() = default;
  // Validates pairwise disjointness and canonicalises: distinct nonzero
  // values sorted ascending, level sets merged, empty sets dropped.
  static SimpleFunction make(const FieldOfSets& field, std::vector<Term> terms);
  static SimpleFunction indicator(const FieldOfSets& field, SetExpr e, double value = 1.0);

  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  double operator()(Point p) const noexcept;
  // Largest |value| taken.
  double sup_abs() const noexcept;

  friend bool operator==(const SimpleFunction&, const SimpleFunction&) = default;

 private:
  std::vector<Term> terms_;
};

// Values at every point the field can distinguish: each listed point, plus
// one shared value on all other points of a finite/co-finite field.
struct PointwiseForm {
  std::vector<std::pair<Point, double>> points;
  bool has_rest = false;
  double rest = 0.0;
};

PointwiseForm pointwise(const FieldOfSets& field, const SimpleFunction& f);
PointwiseForm pointwise_common(const FieldOfSets& field, const SimpleFunction& f, const SimpleFunction& g,
                               const std::function<double(double, double)>& op);
SimpleFunction from_pointwise(const FieldOfSets& field, const PointwiseForm& form);

enum class PointwiseOp { Max, Min, Add, Sub, Mul, Abs };

// Pointwise lattice and arithmetic operations on the common refinement. Abs
// ignores g.
SimpleFunction combine(const FieldOfSets& field, const SimpleFunction& f, const SimpleFunction& g, PointwiseOp op);
SimpleFunction apply(const FieldOfSets& field, const SimpleFunction& f, const std::function<double(double)>& fn);
SimpleFunction combine_with(const FieldOfSets& field, const SimpleFunction& f, const SimpleFunction& g,
                            const std::function<double(double, double)>& op);

double integrate_simple(const Charge& mu, const SimpleFunction& f);

// Nonincreasing right-continuous step function on [0, inf):
// value c_i on [t_{i-1}, t_i) with t_0 = 0, and 0 from t_m on.
class StepDistribution {
 public:
  StepDistribution() = default;
  // Canonicalises: drops zero-length and zero-valued steps, merges equal
  // neighbours. Throws InvalidArgument if values increase or breakpoints
  // are not strictly increasing.
  static StepDistribution from_steps(std::vector<double> breakpoints, std::vector<double> values);
  // Distribution of a function taking |value| on a set of the given mass.
  static StepDistribution from_levels(std::vector<std::pair<double, double>> abs_value_and_mass);

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }
  double left(std::size_t i) const noexcept { return i == 0 ? 0.0 : breakpoints_[i - 1]; }
  double right(std::size_t i) const noexcept { return breakpoints_[i]; }

  double operator()(double t) const noexcept;
  double total_integral() const noexcept;
  // Right end of the support (0 when empty).
  double support_end() const noexcept { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }

  friend bool operator==(const StepDistribution&, const StepDistribution&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

StepDistribution distribution_simple(const Charge& mu, const SimpleFunction& f);

// Integral over [from, inf) of |a(t) - b(t)|.
double integrate_abs_difference(const StepDistribution& a, const StepDistribution& b, double from = 0.0);

// min(1, inf_{a>0} max(a, mu*({|f| > a}))), scanned in closed form.
double f_metric_norm(const StepDistribution& d);
double f_metric_norm(const Charge& mu, const SimpleFunction& f);

struct LayerCakeRelation {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  bool holds = true;
};

struct LayerCakeReport {
  LayerCakeRelation integral_identity;    // int |f| = int_0^inf mu_f
  LayerCakeRelation lattice_identity;     // same-sign f, g: int |f-g| = int |mu_{f v g} - mu_{f ^ g}|
  LayerCakeRelation difference_bound;     // int |mu_f - mu_g| <= int ||f| - |g||
  LayerCakeRelation tail_bound;           // from delta, restricted to {|f|>delta} u {|g|>delta}
  bool all_hold() const noexcept {
    return integral_identity.holds && lattice_identity.holds && difference_bound.holds && tail_bound.holds;
  }
};

LayerCakeReport layer_cake_check(const Charge& mu, const SimpleFunction& f, const SimpleFunction& g,
                                 double delta = 0.0, double tolerance = 1e-12);

}  // namespace apcharge
