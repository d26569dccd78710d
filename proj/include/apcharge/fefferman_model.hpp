#pragma once

// A genuine (countably additive) measure space carrying the finite/co-finite
// charge: the points of N with their weights, plus one extra point "inf"
// holding the mass V - sum_n w_n that the charge cannot see pointwise.
// Elements of the completion of the charge space map to functions here with
// norms, integrals, products and order preserved.

#include <string>
#include <utility>
#include <vector>

#include "apcharge/charge.hpp"
#include "apcharge/lorentz.hpp"
#include "apcharge/tm_spaces.hpp"

namespace apcharge {

class CofiniteModelSpace {
 public:
  // Throws InvalidArgument unless mu lives on the finite/co-finite field.
  static CofiniteModelSpace from_charge(const Charge& mu);

  const CofiniteWeights& weights() const noexcept { return weights_; }
  double total() const noexcept { return total_; }
  double infinity_mass() const noexcept { return total_ - weights_.total(); }

  // Measure of a finite subset of N.
  double measure_finite(std::span<const Point> points) const;
  // Measure of (N \ excluded) together with the point at infinity.
  double measure_cofinite_image(std::span<const Point> excluded) const;

 private:
  CofiniteWeights weights_;
  double total_ = 0.0;
};

struct ModelFunction {
  std::vector<std::pair<Point, double>> exceptions;  // sorted by point, no repeats
  double tail_value = 0.0;                            // on unlisted points of N
  double infinity_value = 0.0;

  double at(Point n) const noexcept;
  friend bool operator==(const ModelFunction&, const ModelFunction&) = default;
};

// Drops exceptions equal to the tail value and sorts.
ModelFunction canonical(ModelFunction g);
ModelFunction pointwise(const ModelFunction& g, const ModelFunction& h, const std::function<double(double, double)>& op);

ModelFunction embed_simple(const FieldOfSets& field, const SimpleFunction& f);

// Pointwise values of f_N on N and the ladder-certified limit of the
// co-finite values at infinity. Throws NotCauchy if the sequence fails
// is_cauchy(delta = tol), TailNotConvergent if the co-finite values move by
// more than tol along the ladder.
ModelFunction embed_sequence(const SimpleFunctionSequence& seq, double tol = kDefaultSequenceTol);

struct ModelNormSpec {
  enum class Kind { Integral, Lp, Lorentz, FNorm };
  Kind kind = Kind::Integral;
  double p = 1.0;
  double q = 1.0;

  static ModelNormSpec integral() { return {Kind::Integral, 1.0, 1.0}; }
  static ModelNormSpec lp(double p) { return {Kind::Lp, p, p}; }
  static ModelNormSpec lorentz(double p, double q) { return {Kind::Lorentz, p, q}; }
  static ModelNormSpec f_norm() { return {Kind::FNorm, 1.0, 1.0}; }
  std::string name() const;
};

// Value distribution of g: (|value|, mass) for each exception, the tail
// points and the point at infinity.
std::vector<std::pair<double, double>> model_levels(const CofiniteModelSpace& space, const ModelFunction& g);

// Closed form over the countable model. Throws TruncationBoundExceedsTol if
// the tail mass left after the exceptions comes out negative beyond 1e-12.
double model_norm(const CofiniteModelSpace& space, const ModelFunction& g, const ModelNormSpec& spec);

struct IsometryRow {
  std::string space;
  double charge_side = 0.0;
  double model_side = 0.0;
  double discrepancy = 0.0;
  double residual = 0.0;
  bool ok = false;
};

struct IsometryReport {
  std::vector<IsometryRow> rows;
  bool multiplication_preserved = false;
  bool order_preserved = false;
  double max_discrepancy = 0.0;
  bool all_ok() const noexcept;
};

// Charge-side limits from tm_spaces against the model side of
// embed_sequence(seq). A row passes when discrepancy <= residual + 1e-9.
IsometryReport verify_isometry(const SimpleFunctionSequence& seq, std::span<const ModelNormSpec> spaces,
                               double tol = kDefaultSequenceTol);

}  // namespace apcharge
