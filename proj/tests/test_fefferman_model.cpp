#include <doctest.h>

#include <cmath>

#include "apcharge/error.hpp"
#include "apcharge/fefferman_model.hpp"
#include "generators.hpp"

using namespace apcharge;

namespace {

const Charge kHalving = Charge::halving_cofinite();
const CofiniteModelSpace kModel = CofiniteModelSpace::from_charge(kHalving);

std::vector<Point> prefix(std::size_t n) {
  std::vector<Point> pts;
  for (Point k = 1; k <= n; ++k) pts.push_back(k);
  return pts;
}

SimpleFunctionSequence prefix_indicators(std::size_t horizon = kDefaultHorizon) {
  const FieldOfSets field = kHalving.field();
  return {[field](std::size_t n) { return SimpleFunction::indicator(field, SetExpr::finite(prefix(n))); }, horizon,
          kHalving};
}

const std::vector<ModelNormSpec> kSpaces = {ModelNormSpec::integral(), ModelNormSpec::lp(1), ModelNormSpec::lp(2),
                                            ModelNormSpec::lorentz(2, 1), ModelNormSpec::lorentz(3, kInf),
                                            ModelNormSpec::f_norm()};

}  // namespace

TEST_CASE("model space of the halving charge") {
  CHECK(kModel.total() == 5.0);
  CHECK(kModel.infinity_mass() == 4.0);
  const std::vector<Point> pts = {1, 2};
  CHECK(kModel.measure_finite(pts) == 0.75);
  CHECK(kModel.measure_cofinite_image(pts) == 4.25);
  CHECK_THROWS_AS(CofiniteModelSpace::from_charge(Charge::on_atoms({1}, {1.0})), Error);
}

TEST_CASE("embedding simple functions") {
  const auto& field = kHalving.field();
  const auto co = embed_simple(field, SimpleFunction::indicator(field, SetExpr::cofinite({1})));
  CHECK(co.exceptions == std::vector<std::pair<Point, double>>{{1, 0.0}});
  CHECK(co.tail_value == 1.0);
  CHECK(co.infinity_value == 1.0);
  const auto one = embed_simple(field, SimpleFunction::indicator(field, SetExpr::finite({1})));
  CHECK(one.exceptions == std::vector<std::pair<Point, double>>{{1, 1.0}});
  CHECK(one.tail_value == 0.0);
  CHECK(one.infinity_value == 0.0);
  CHECK(embed_simple(field, SimpleFunction{}) == ModelFunction{});
}

TEST_CASE("indicators embed as 0/1 functions") {
  testgen::Rng rng(21);
  const auto& field = kHalving.field();
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> pts;
    for (Point p = 1; p <= 12; ++p)
      if (testgen::below(rng, 2)) pts.push_back(p);
    const auto e = testgen::below(rng, 2) ? SetExpr::finite(pts) : SetExpr::cofinite(pts);
    const auto g = embed_simple(field, SimpleFunction::indicator(field, e));
    for (const auto& [p, v] : g.exceptions) CHECK((v == 0.0 || v == 1.0));
    CHECK((g.tail_value == 0.0 || g.tail_value == 1.0));
    CHECK(g.infinity_value == g.tail_value);
  }
}

TEST_CASE("embedding commutes with lattice and linear operations") {
  testgen::Rng rng(22);
  const auto& field = kHalving.field();
  for (int t = 0; t < 300; ++t) {
    const auto f = testgen::cofinite_function(rng, field, true);
    const auto g = testgen::cofinite_function(rng, field, true);
    const auto ef = embed_simple(field, f), eg = embed_simple(field, g);
    CHECK(embed_simple(field, combine(field, f, g, PointwiseOp::Max)) ==
          canonical(pointwise(ef, eg, [](double a, double b) { return std::max(a, b); })));
    CHECK(embed_simple(field, combine(field, f, g, PointwiseOp::Min)) ==
          canonical(pointwise(ef, eg, [](double a, double b) { return std::min(a, b); })));
    CHECK(embed_simple(field, combine(field, f, g, PointwiseOp::Add)) == canonical(pointwise(ef, eg, std::plus<double>{})));
    CHECK(embed_simple(field, combine(field, f, g, PointwiseOp::Mul)) ==
          canonical(pointwise(ef, eg, std::multiplies<double>{})));
  }
}

TEST_CASE("embedding sequences") {
  const auto g = embed_sequence(prefix_indicators());
  CHECK(g.exceptions.size() == 64);
  CHECK(g.tail_value == 0.0);
  CHECK(g.infinity_value == 0.0);
  CHECK(model_norm(kModel, g, ModelNormSpec::integral()) == 1.0 - std::ldexp(1.0, -64));
  const FieldOfSets field = kHalving.field();
  const auto co = SimpleFunction::indicator(field, SetExpr::cofinite({1}));
  SimpleFunctionSequence constant{[co](std::size_t) { return co; }, kDefaultHorizon, kHalving};
  CHECK(embed_sequence(constant) == embed_simple(field, co));
  SimpleFunctionSequence rising{[field](std::size_t n) {
                                  return SimpleFunction::indicator(field, field.universe(),
                                                                   1.0 - std::ldexp(1.0, -static_cast<int>(n)));
                                },
                                kDefaultHorizon, kHalving};
  const auto r = embed_sequence(rising);
  CHECK(r.exceptions.empty());
  CHECK(r.tail_value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.infinity_value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(model_norm(kModel, r, ModelNormSpec::integral()) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("co-finite values that keep moving are rejected") {
  const Charge mu = Charge::finite_cofinite(CofiniteWeights::geometric(0.5, 0.5), 1.0);
  const FieldOfSets field = mu.field();
  SimpleFunctionSequence flip{[field](std::size_t n) {
                                return SimpleFunction::indicator(field, SetExpr::cofinite(prefix(n)), static_cast<double>(n % 2));
                              },
                              30, mu};
  try {
    embed_sequence(flip, 1e-4);
    FAIL("expected TailNotConvergent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TailNotConvergent);
  }
  SimpleFunctionSequence jump{[field](std::size_t n) {
                                return SimpleFunction::indicator(field, field.universe(), static_cast<double>(n % 2));
                              },
                              30, mu};
  CHECK_THROWS_AS(embed_sequence(jump), Error);
}

TEST_CASE("model norms") {
  const auto& field = kHalving.field();
  const auto all = embed_simple(field, SimpleFunction::indicator(field, field.universe()));
  CHECK(model_norm(kModel, all, ModelNormSpec::integral()) == 5.0);
  CHECK(model_norm(kModel, ModelFunction{}, ModelNormSpec::lp(2)) == 0.0);
  const auto two_one = embed_simple(field, SimpleFunction::make(field, {{2.0, SetExpr::finite({1})}, {1.0, SetExpr::finite({2})}}));
  CHECK(model_norm(kModel, two_one, ModelNormSpec::f_norm()) == 0.75);
  CHECK(model_norm(kModel, two_one, ModelNormSpec::lp(1)) == 1.25);
}

TEST_CASE("isometry on the standard examples") {
  const auto rep = verify_isometry(prefix_indicators(), kSpaces);
  CHECK(rep.all_ok());
  CHECK(rep.multiplication_preserved);
  CHECK(rep.order_preserved);
  const auto& field = kHalving.field();
  const auto f = SimpleFunction::make(field, {{-1.5, SetExpr::finite({2})}, {2.5, SetExpr::cofinite({1, 2})}});
  SimpleFunctionSequence constant{[f](std::size_t) { return f; }, kDefaultHorizon, kHalving};
  const auto c = verify_isometry(constant, kSpaces);
  CHECK(c.all_ok());
  CHECK(c.max_discrepancy <= 1e-12);
}

TEST_CASE("isometry on random accepted sequences") {
  testgen::Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const auto seq = testgen::accepted_sequence(rng, kHalving);
    const auto rep = verify_isometry(seq, kSpaces);
    for (const auto& row : rep.rows) CHECK_MESSAGE(row.ok, row.space);
    CHECK(rep.multiplication_preserved);
    CHECK(rep.order_preserved);
  }
}

TEST_CASE("point masses miss the mass at infinity") {
  double sum = 0.0;
  for (Point n = 1; n <= 200; ++n) {
    const std::vector<Point> one = {n};
    sum += kModel.measure_finite(one);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  const double whole = kHalving.measure(kHalving.field().universe());
  CHECK(whole - sum == doctest::Approx(kModel.infinity_mass()).epsilon(1e-15));
  CHECK(kModel.infinity_mass() == 4.0);
  const std::vector<Point> first = {1, 2, 3};
  CHECK(kModel.measure_finite(first) + kModel.measure_cofinite_image(first) == kModel.total());
}
