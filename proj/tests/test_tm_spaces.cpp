#include <doctest.h>

#include <cmath>

#include "apcharge/error.hpp"
#include "apcharge/tm_spaces.hpp"

using namespace apcharge;

namespace {

const Charge kHalving = Charge::halving_cofinite();

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

SimpleFunctionSequence constant(const Charge& mu, SimpleFunction f, std::size_t horizon = kDefaultHorizon) {
  return {[f](std::size_t) { return f; }, horizon, mu};
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("ladder and horizon") {
  auto seq = prefix_indicators(32);
  CHECK(seq.ladder() == std::pair<std::size_t, std::size_t>{16, 32});
  CHECK_THROWS_AS(seq.at(0), Error);
  CHECK_THROWS_AS(seq.at(33), Error);
  seq.horizon = 3;
  CHECK(kind_of([&] { seq.ladder(); }) == ErrorKind::HorizonTooSmall);
}

TEST_CASE("prefix indicators are Cauchy in charge") {
  const auto d = is_cauchy(prefix_indicators(32), 0.1, std::ldexp(1.0, -16));
  CHECK(d.residual == doctest::Approx(1.52585562318563461e-5).epsilon(1e-14));
  CHECK(d.converged);
  CHECK(is_cauchy(constant(kHalving, SimpleFunction::indicator(kHalving.field(), SetExpr::finite({1}))), 0.1).residual == 0.0);
}

TEST_CASE("alternating atoms are not Cauchy") {
  const Charge mu = Charge::on_atoms({0, 1}, {0.3, 0.3});
  const FieldOfSets field = mu.field();
  SimpleFunctionSequence seq{[field](std::size_t n) { return SimpleFunction::indicator(field, SetExpr::finite({n % 2})); }, 10,
                             mu};
  const auto d = is_cauchy(seq, 0.5);
  CHECK(d.residual == doctest::Approx(0.6));
  CHECK_FALSE(d.converged);
}

TEST_CASE("prefix indicators have no limit among simple functions") {
  const auto seq = prefix_indicators(32);
  const auto& field = kHalving.field();
  const auto d = converges_to(seq, SimpleFunction::indicator(field, field.universe()), 0.1);
  CHECK(d.residual >= 4.0);
  CHECK_FALSE(d.converged);
  for (std::size_t k = 0; k < 16; ++k) {
    const auto cand = converges_to(seq, SimpleFunction::indicator(field, SetExpr::finite(prefix(k))), 0.1);
    CHECK(cand.residual == doctest::Approx(std::ldexp(1.0, -static_cast<int>(k)) - std::ldexp(1.0, -32)).epsilon(1e-14));
    CHECK_FALSE(cand.converged);
  }
}

TEST_CASE("converges_to on convergent sequences") {
  const auto& field = kHalving.field();
  const auto f = SimpleFunction::indicator(field, SetExpr::finite({1}));
  CHECK(converges_to(constant(kHalving, f), f, 0.1).residual == 0.0);
  SimpleFunctionSequence seq{
      [field](std::size_t n) { return SimpleFunction::indicator(field, SetExpr::finite({1}), 1.0 - std::ldexp(1.0, -static_cast<int>(n))); },
      8, kHalving};
  CHECK(converges_to(seq, f, 0.1).converged);
}

TEST_CASE("F-norm of sequences") {
  const auto n = tmdot_norm(prefix_indicators(32));
  CHECK(n.estimate == 1.0 - std::ldexp(1.0, -32));
  CHECK(tmdot_norm(constant(kHalving, SimpleFunction{})).estimate == 0.0);
  const auto f = SimpleFunction::make(kHalving.field(), {{2.0, SetExpr::finite({1})}, {1.0, SetExpr::finite({2})}});
  CHECK(tmdot_norm(constant(kHalving, f)).estimate == 0.75);
}

TEST_CASE("order") {
  CHECK(order_geq_zero(prefix_indicators()));
  const Charge mu = Charge::on_atoms({1, 2}, {0.3, 0.7});
  CHECK_FALSE(order_geq_zero(constant(mu, SimpleFunction::indicator(mu.field(), SetExpr::finite({1}), -1.0))));
  const FieldOfSets field = mu.field();
  SimpleFunctionSequence shrinking{[field](std::size_t n) {
                                     return SimpleFunction::indicator(field, field.universe(),
                                                                      -std::ldexp(1.0, -static_cast<int>(n)));
                                   },
                                   kDefaultHorizon, mu};
  CHECK(order_geq_zero(shrinking));
}

TEST_CASE("integrals of sequences") {
  const auto i = integrate_sequence(prefix_indicators());
  CHECK(i.estimate == 1.0 - std::ldexp(1.0, -64));
  CHECK(i.converged);
  CHECK(integrate_sequence(constant(kHalving, SimpleFunction{})).estimate == 0.0);
  CHECK(integrate_sequence(constant(kHalving, SimpleFunction::indicator(kHalving.field(), SetExpr::finite({1})))).estimate ==
        0.5);
  const Charge mu = Charge::on_atoms({0, 1}, {0.3, 0.3});
  const FieldOfSets field = mu.field();
  SimpleFunctionSequence alt{[field](std::size_t n) { return SimpleFunction::indicator(field, SetExpr::finite({n % 2})); }, 10,
                             mu};
  CHECK(kind_of([&] { integrate_sequence(alt); }) == ErrorKind::NotCauchy);
  SimpleFunctionSequence growing{
      [field](std::size_t n) { return SimpleFunction::indicator(field, SetExpr::finite({0}), static_cast<double>(n)); }, 10, mu};
  CHECK(kind_of([&] { integrate_sequence(growing); }) == ErrorKind::NotCauchy);
}

TEST_CASE("L1 Cauchy failure with a Cauchy-in-charge sequence") {
  std::vector<Point> atoms;
  std::vector<double> weights;
  for (Point k = 1; k <= 64; ++k) {
    atoms.push_back(k);
    weights.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  }
  const Charge mu = Charge::on_atoms(atoms, weights);
  const FieldOfSets field = mu.field();
  SimpleFunctionSequence spikes{[field](std::size_t n) {
                                  return SimpleFunction::indicator(field, SetExpr::finite({n}),
                                                                   std::ldexp(1.0, static_cast<int>(n)));
                                },
                                64, mu};
  CHECK(kind_of([&] { integrate_sequence(spikes); }) == ErrorKind::NotCauchyL1);
  CHECK(kind_of([&] { ldot_p_norm(spikes, 1.0); }) == ErrorKind::NotCauchyLp);
}

TEST_CASE("L^p norms of sequences") {
  CHECK(ldot_p_norm(prefix_indicators(), 1.0).estimate == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ldot_p_norm(prefix_indicators(), 2.0).estimate == doctest::Approx(1.0).epsilon(1e-15));
  const Charge mu = Charge::on_atoms({1, 2}, {0.5, 0.5});
  CHECK(ldot_p_norm(constant(mu, SimpleFunction::indicator(mu.field(), mu.field().universe(), 3.0)), kInf).estimate == 3.0);
}

TEST_CASE("Lorentz norms of sequences") {
  const auto n = ldot_pq_norm(prefix_indicators(), LorentzParams::make(2, 1));
  CHECK(n.estimate == doctest::Approx(2.0 * std::sqrt(1.0 - std::ldexp(1.0, -64))).epsilon(1e-15));
  CHECK(ldot_pq_norm(constant(kHalving, SimpleFunction{}), LorentzParams::make(2, 1)).estimate == 0.0);
}

TEST_CASE("concentrating spikes are not Lorentz Cauchy") {
  std::vector<Point> atoms;
  std::vector<double> weights;
  for (Point k = 1; k <= 32; ++k) {
    atoms.push_back(k);
    weights.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  }
  const Charge mu = Charge::on_atoms(atoms, weights);
  const FieldOfSets field = mu.field();
  const double p = 2.0;
  SimpleFunctionSequence seq{[field, mu, p](std::size_t n) {
                               const double m = mu.measure(SetExpr::finite({n}));
                               return SimpleFunction::indicator(field, SetExpr::finite({n}), std::pow(m, -2.0 / p));
                             },
                             32, mu};
  CHECK(is_cauchy(seq, 0.1, 1e-3).converged);
  CHECK(kind_of([&] { ldot_pq_norm(seq, LorentzParams::make(p, 1)); }) == ErrorKind::NotCauchyLorentz);
}

TEST_CASE("Lorentz norms do not depend on the representative") {
  const auto f = prefix_indicators();
  const FieldOfSets field = kHalving.field();
  SimpleFunctionSequence g{[field](std::size_t n) {
                             auto base = SimpleFunction::indicator(field, SetExpr::finite(prefix(n)));
                             auto bump = SimpleFunction::indicator(field, SetExpr::finite({3 * n}), 2.0);
                             return combine(field, base, bump, PointwiseOp::Add);
                           },
                           kDefaultHorizon, kHalving};
  CHECK(equivalent(f, g, 0.1, 1e-12));
  for (const auto& lp : {LorentzParams::make(2, 1), LorentzParams::make(3, kInf), LorentzParams::make(1.5, 2)}) {
    const auto a = ldot_pq_norm(f, lp);
    const auto b = ldot_pq_norm(g, lp);
    CHECK(std::abs(a.estimate - b.estimate) <= a.residual + b.residual + 1e-9);
  }
}
