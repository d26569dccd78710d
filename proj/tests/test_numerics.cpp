#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"
#include "apcharge/numerics/interval_list.hpp"
#include "apcharge/numerics/quadrature.hpp"
#include "apcharge/numerics/rational.hpp"

using namespace apcharge;
using namespace apcharge::numerics;

TEST_CASE("compensated sum recovers cancelled terms") {
  std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(xs) == 2.0);
  CompensatedSum s;
  for (int i = 0; i < 10; ++i) s += 0.1;
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("rational approximation walks convergents") {
  auto r = rational_approximation(0.75, 1e-12, 100);
  REQUIRE(r);
  CHECK(*r == Fraction{3, 4});
  auto pi = rational_approximation(std::numbers::pi, 1e-6, 1000);
  REQUIRE(pi);
  CHECK(*pi == Fraction{355, 113});
  CHECK_FALSE(rational_approximation(std::numbers::pi, 1e-12, 1000));
}

TEST_CASE("commensurate_ratio rejects sqrt 2 at the default tolerance") {
  CHECK_FALSE(commensurate_ratio(std::numbers::sqrt2, 1e-9, 1'000'000));
  auto r = commensurate_ratio(2.5, 1e-9, 1'000'000);
  REQUIRE(r);
  CHECK(*r == Fraction{5, 2});
  auto third = commensurate_ratio(1.0 / 3.0, 1e-9, 1'000'000);
  REQUIRE(third);
  CHECK(*third == Fraction{1, 3});
}

TEST_CASE("common_multiple tiles both periods") {
  auto m = common_multiple(2.0, 3.0);
  REQUIRE(m);
  CHECK(m->period == 6.0);
  CHECK(m->copies_of_first == 3);
  CHECK(m->copies_of_second == 2);
  CHECK_FALSE(common_multiple(1.0, std::numbers::sqrt2));
}

TEST_CASE("interval lists stay canonical") {
  IntervalList a({{2, 3}, {0, 1}, {1, 1.5}});
  REQUIRE(a.pieces().size() == 2);
  CHECK(a.pieces()[0] == Interval{0, 1.5});
  CHECK(a.measure() == 2.5);
  IntervalList b({{1, 2.5}});
  CHECK(a.unite(b) == IntervalList({{0, 3}}));
  CHECK(a.intersect(b) == IntervalList({{1, 1.5}, {2, 2.5}}));
  CHECK(a.subtract(b) == IntervalList({{0, 1}, {2.5, 3}}));
  CHECK(a.complement_within(-1, 4) == IntervalList({{-1, 0}, {1.5, 2}, {3, 4}}));
  CHECK(a.measure_within(0.5, 2.5) == 1.5);
  CHECK(a.contains(0.0));
  CHECK_FALSE(a.contains(1.5));
  CHECK(a.shifted(1.0) == IntervalList({{1, 2.5}, {3, 4}}));
  CHECK(a.hull() == Interval{0, 3});
}

TEST_CASE("interval algebra matches membership on random lists") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> cut(0, 40);
  auto random_list = [&] {
    std::vector<Interval> v;
    for (int i = 0; i < 4; ++i) {
      int a = cut(rng), b = cut(rng);
      if (a > b) std::swap(a, b);
      v.push_back({a / 4.0, b / 4.0});
    }
    return IntervalList(v);
  };
  for (int t = 0; t < 200; ++t) {
    const auto a = random_list(), b = random_list();
    const auto u = a.unite(b), i = a.intersect(b), d = a.subtract(b);
    for (int k = 0; k < 41; ++k) {
      const double x = k / 4.0 + 0.125;
      CHECK(u.contains(x) == (a.contains(x) || b.contains(x)));
      CHECK(i.contains(x) == (a.contains(x) && b.contains(x)));
      CHECK(d.contains(x) == (a.contains(x) && !b.contains(x)));
    }
    CHECK(u.measure() + i.measure() == doctest::Approx(a.measure() + b.measure()).epsilon(1e-15));
  }
}

TEST_CASE("adaptive simpson") {
  auto f = make_batch([](double x) { return std::abs(std::cos(x)); });
  const auto r = adaptive_simpson(f, 0.0, std::numbers::pi, {1e-12, 16, 48});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
  auto poly = make_batch([](double x) { return x * x * x; });
  CHECK(adaptive_simpson(poly, 0.0, 2.0).value == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("adaptive simpson reports failure past max depth") {
  auto jump = make_batch([](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; });
  CHECK_THROWS_AS(adaptive_simpson(jump, 0.0, 1.0, {1e-300, 2, 6}), Error);
}
