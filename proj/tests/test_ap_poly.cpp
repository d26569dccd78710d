#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apcharge/ap_poly.hpp"
#include "apcharge/error.hpp"
#include "apcharge/inequalities.hpp"
#include "generators.hpp"

using namespace apcharge;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

const TrigPolynomial kTwoCos = TrigPolynomial::make({{1.0, 1.0}, {-1.0, 1.0}});

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

double coefficient_sq_sum(const TrigPolynomial& p) {
  double s = 0.0;
  for (const auto& t : p.terms()) s += std::norm(t.coeff);
  return s;
}

}  // namespace

TEST_CASE("canonical form") {
  const auto p = TrigPolynomial::make({{2.0, 1.0}, {1.0, 2.0}, {2.0 + 1e-13, 3.0}, {5.0, 0.0}});
  REQUIRE(p.size() == 2);
  CHECK(p.terms()[0] == TrigTerm{1.0, 2.0});
  CHECK(p.terms()[1].coeff == Complex(4.0));
  CHECK(TrigPolynomial::make({{1.0, 0.0}}).is_zero());
}

TEST_CASE("evaluation matches term sums") {
  testgen::Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    const auto p = gen_random_poly(rng(), 6, 8.0, 1.0, GeneratorMode::GenericReal);
    for (double x : {-13.7, 0.0, 0.25, 99.5}) {
      Complex want = 0.0;
      for (const auto& term : p.terms()) want += term.coeff * std::polar(1.0, term.freq * x);
      CHECK(std::abs(p(x) - want) <= 1e-13);
    }
  }
}

TEST_CASE("arithmetic") {
  const auto e1 = TrigPolynomial::exponential(1.0);
  const auto em1 = TrigPolynomial::exponential(-1.0);
  CHECK(e1 * em1 == TrigPolynomial::constant(1.0));
  CHECK(conj(TrigPolynomial::exponential(sqrt2, 2.0)) == TrigPolynomial::exponential(-sqrt2, 2.0));
  CHECK(kTwoCos * kTwoCos == TrigPolynomial::make({{2.0, 1.0}, {0.0, 2.0}, {-2.0, 1.0}}));
  CHECK((kTwoCos - kTwoCos).is_zero());
  CHECK(scale(kTwoCos, 0.5) + scale(kTwoCos, 0.5) == kTwoCos);
}

TEST_CASE("mean value and coefficients") {
  CHECK(mean_value(TrigPolynomial::make({{0.0, 3.0}, {1.0, 1.0}})) == Complex(3.0));
  CHECK(mean_value(TrigPolynomial::exponential(1.0)) == Complex(0.0));
  CHECK(mean_value(TrigPolynomial::exponential(sqrt2) * TrigPolynomial::exponential(-sqrt2)) == Complex(1.0));
  const auto p = TrigPolynomial::make({{sqrt2, 3.0}, {1.0, 2.0}});
  CHECK(fourier_coefficient(p, sqrt2) == Complex(3.0));
  CHECK(fourier_coefficient(p, pi) == Complex(0.0));
  const auto close = TrigPolynomial::make({{1.0, 1.0}, {1.0 + 1.5e-12, 1.0}});
  REQUIRE(close.size() == 2);
  CHECK(kind_of([&] { fourier_coefficient(close, 1.0 + 0.8e-12); }) == ErrorKind::AmbiguousFrequency);
}

TEST_CASE("orthonormality and linearity of coefficients") {
  testgen::Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    const auto p = gen_random_poly(rng(), 5, 8.0, 1.0, GeneratorMode::GenericReal);
    const auto q = gen_random_poly(rng(), 5, 8.0, 1.0, GeneratorMode::GenericReal);
    for (const auto& a : p.terms()) {
      for (const auto& b : p.terms()) {
        CHECK(fourier_coefficient(TrigPolynomial::exponential(a.freq), b.freq) == Complex(a.freq == b.freq ? 1.0 : 0.0));
      }
    }
    const Complex alpha(0.5, -1.0), beta(2.0, 0.25);
    const auto combo = scale(p, alpha) + scale(q, beta);
    for (const auto& term : combo.terms()) {
      const Complex want = alpha * fourier_coefficient(p, term.freq) + beta * fourier_coefficient(q, term.freq);
      CHECK(std::abs(fourier_coefficient(combo, term.freq) - want) <= 1e-15);
    }
  }
}

TEST_CASE("classical coefficients for periodic polynomials") {
  const auto p = TrigPolynomial::make({{2.0, Complex(0.5, 0.25)}, {-1.0, 1.0}, {3.0, Complex(0, -1)}});
  for (int n : {-1, 2, 3, 5}) {
    const auto re = numerics::make_batch([&](double x) { return (p(x) * std::polar(1.0, -n * x)).real(); });
    const auto im = numerics::make_batch([&](double x) { return (p(x) * std::polar(1.0, -n * x)).imag(); });
    const double r = numerics::adaptive_simpson(re, 0, 2 * pi, {1e-13, 64, 48}).value / (2 * pi);
    const double i = numerics::adaptive_simpson(im, 0, 2 * pi, {1e-13, 64, 48}).value / (2 * pi);
    CHECK(std::abs(Complex(r, i) - fourier_coefficient(p, n)) <= 1e-12);
  }
}

TEST_CASE("common period") {
  CHECK(*common_period(TrigPolynomial::make({{1, 1.0}, {2, 1.0}, {-1, 1.0}})) == doctest::Approx(2 * pi));
  CHECK_FALSE(common_period(TrigPolynomial::make({{1, 1.0}, {sqrt2, 1.0}})));
  CHECK(*common_period(TrigPolynomial::make({{2.0 / 3, 1.0}, {0.5, 1.0}})) == doctest::Approx(12 * pi));
  CHECK(*common_period(TrigPolynomial::constant(2.0)) == doctest::Approx(2 * pi));
}

TEST_CASE("windowed means") {
  const auto cos2 = numerics::make_batch([](double x) { return std::cos(x) * std::cos(x); });
  const auto m = windowed_mean(cos2, {64, 8, 1e-8, 2.0});
  CHECK(m.value == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(m.value - 0.5) <= m.residual + 1e-12);
  const auto one = windowed_mean(numerics::make_batch([](double) { return 1.0; }));
  CHECK(one.value == 1.0);
  CHECK(one.residual == 0.0);
  const auto c = windowed_mean(numerics::make_batch([](double x) { return std::cos(x); }));
  CHECK(std::abs(c.value) <= 1e-3);
  const auto growing = numerics::make_batch([](double x) { return std::abs(x); });
  CHECK(kind_of([&] { windowed_mean(growing); }) == ErrorKind::NotConverging);
}

TEST_CASE("exact and windowed means agree on periodic polynomials") {
  testgen::Rng rng(43);
  for (int t = 0; t < 10; ++t) {
    const auto p = gen_random_poly(rng(), 4, 5.0, 1.0, GeneratorMode::IntegerLattice);
    const auto exact = abs_pow_mean(p, 1.5);
    REQUIRE(exact.exact);
    const auto windowed = windowed_mean(modulus_pow_function(p, 1.5), {64 * pi, 4, 1e-8, p.frequency_span()});
    CHECK(std::abs(windowed.value - exact.value) <= 1e-8);
  }
}

TEST_CASE("B^q means and norms") {
  CHECK(abs_pow_mean(TrigPolynomial::exponential(1.0), 7).value == 1.0);
  CHECK(abs_pow_mean(kTwoCos, 2).value == doctest::Approx(2.0).epsilon(1e-12));
  const auto inc = TrigPolynomial::make({{1.0, 1.0}, {sqrt2, 1.0}});
  const auto w = abs_pow_mean(inc, 2);
  CHECK_FALSE(w.exact);
  CHECK(std::abs(w.value - 2.0) <= w.residual + 1e-9);
  CHECK(b_norm(TrigPolynomial::exponential(3.0), 2.5) == 1.0);
  CHECK(b_norm(kTwoCos, 2) == doctest::Approx(sqrt2).epsilon(1e-12));
  CHECK(b_norm(kTwoCos, 1) == doctest::Approx(4 / pi).epsilon(1e-10));
  CHECK(abs_pow_mean(TrigPolynomial{}, 2).value == 0.0);
}

TEST_CASE("Parseval on random polynomials") {
  testgen::Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    const auto p = gen_campaign_poly(rng(), {});
    CHECK(std::abs(abs_pow_mean(p, 2).value - coefficient_sq_sum(p)) <= 1e-9);
  }
  for (int t = 0; t < 5; ++t) {
    GeneratorSettings g;
    g.mode = GeneratorMode::GenericReal;
    g.max_terms = 4;
    const auto p = gen_campaign_poly(rng(), g);
    const auto m = abs_pow_mean(p, 2);
    CHECK(std::abs(m.value - coefficient_sq_sum(p)) <= m.residual + 1e-9);
  }
}

TEST_CASE("Lorentz norms against gamma") {
  const auto e = TrigPolynomial::exponential(1.0);
  CHECK(lorentz_gamma_norm(e, LorentzParams::make(2, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lorentz_gamma_norm(e, LorentzParams::make(3, 1)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(lorentz_gamma_norm(kTwoCos, LorentzParams::make(2, 2)) - sqrt2) <= 2e-3);
  testgen::Rng rng(45);
  for (int t = 0; t < 6; ++t) {
    const auto p = gen_random_poly(rng(), 1 + t % 4, 4.0, 1.0, GeneratorMode::IntegerLattice);
    for (double q : {1.25, 1.5, 2.0}) {
      CHECK(std::abs(lorentz_gamma_norm(p, LorentzParams::make(q, q)) - b_norm(p, q)) <= 5e-3);
    }
  }
}

TEST_CASE("polynomial text and JSON") {
  const auto p = parse_poly("1,0@1;1,0@-1");
  CHECK(p == kTwoCos);
  CHECK(parse_poly("2@0.5") == TrigPolynomial::exponential(0.5, 2.0));
  const auto q = TrigPolynomial::make({{sqrt2, Complex(0.1, -0.3)}, {-2.5, 3.0}});
  CHECK(parse_poly(format_poly(q)) == q);
  CHECK(poly_from_json(to_json(q)) == q);
  CHECK(kind_of([] { parse_poly("1,0"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_poly("a@1"); }) == ErrorKind::ParseError);
}
