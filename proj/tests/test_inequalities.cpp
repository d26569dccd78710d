#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "apcharge/error.hpp"
#include "apcharge/inequalities.hpp"
#include "apcharge/report_format.hpp"

using namespace apcharge;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

const TrigPolynomial kTwoCos = TrigPolynomial::make({{1.0, 1.0}, {-1.0, 1.0}});

// Oracles computed with 30-digit quadrature ahead of time.
constexpr double kPaleySpotLhs = 1.4283691389251392679;
constexpr double kPaleySpotRhs = 1.3529987270358830709;
constexpr double kPaleySpotRatio = 1.0557061957141496170;

}  // namespace

TEST_CASE("generator contract") {
  const auto p = gen_random_poly(42, 3, 8.0, 1.0, GeneratorMode::IntegerLattice);
  REQUIRE(p.size() == 3);
  for (const auto& t : p.terms()) {
    CHECK(t.freq == std::round(t.freq));
    CHECK(std::abs(t.freq) <= 8.0);
    CHECK(std::abs(t.coeff) <= 1.0);
  }
  CHECK(gen_random_poly(42, 3, 8.0, 1.0, GeneratorMode::IntegerLattice) == p);
  CHECK_FALSE(gen_random_poly(43, 3, 8.0, 1.0, GeneratorMode::IntegerLattice) == p);
  const auto one = gen_random_poly(7, 1, 8.0, 1.0, GeneratorMode::GenericReal);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one(0.0)) == doctest::Approx(std::abs(one(12.3))).epsilon(1e-14));
  const auto g = gen_random_poly(9, 8, 8.0, 1.0, GeneratorMode::GenericReal);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.terms()[i].freq - g.terms()[i - 1].freq > 10 * kFreqEps);
  CHECK_THROWS_AS(gen_random_poly(1, 40, 8.0, 1.0, GeneratorMode::IntegerLattice), Error);
  std::set<std::size_t> sizes;
  for (std::uint64_t s = 0; s < 100; ++s) sizes.insert(gen_campaign_poly(s, {}).size());
  CHECK(*sizes.begin() == 1);
  CHECK(*sizes.rbegin() == 8);
}

TEST_CASE("Bessel checks") {
  const auto r = check_bessel(kTwoCos, 1e-6);
  CHECK(r.lhs == 2.0);
  CHECK(r.rhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(r.violation);
  const auto inc = check_bessel(TrigPolynomial::make({{sqrt2, 1.0}, {1.0, 1.0}}), 1e-6);
  CHECK(inc.lhs == 2.0);
  CHECK(std::abs(inc.rhs - 2.0) <= inc.residual + 1e-9);
  CHECK_FALSE(inc.violation);
  const auto zero = check_bessel(TrigPolynomial{}, 1e-6);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.skipped);
}

TEST_CASE("Hausdorff-Young checks") {
  const auto q2 = check_hausdorff_young(kTwoCos, 2.0, 1e-6);
  CHECK(q2.lhs == doctest::Approx(sqrt2).epsilon(1e-15));
  CHECK(q2.rhs == doctest::Approx(sqrt2).epsilon(1e-12));
  CHECK(q2.ratio == doctest::Approx(1.0).epsilon(1e-12));
  const auto q1 = check_hausdorff_young(kTwoCos, 1.0, 1e-6);
  CHECK(q1.lhs == 1.0);
  CHECK(q1.rhs == doctest::Approx(4 / pi).epsilon(1e-10));
  CHECK(q1.ratio == doctest::Approx(pi / 4).epsilon(1e-10));
  const auto q15 = check_hausdorff_young(kTwoCos, 1.5, 1e-6);
  CHECK(q15.lhs == doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
  const auto single = TrigPolynomial::exponential(2.5, Complex(0.3, 0.4));
  for (double q : {1.0, 1.3, 2.0}) {
    const auto r = check_hausdorff_young(single, q, 1e-6);
    CHECK(r.lhs == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.rhs == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK_THROWS_AS(check_hausdorff_young(kTwoCos, 2.5, 1e-6), Error);
}

TEST_CASE("Paley checks") {
  const auto q2 = check_paley(kTwoCos, 2.0, 1e-6);
  CHECK(q2.lhs == doctest::Approx(sqrt2).epsilon(1e-15));
  CHECK(q2.ratio == doctest::Approx(1.0).epsilon(1e-12));
  const auto spot = check_paley(kTwoCos, 1.5, 1e-6);
  CHECK(std::abs(spot.lhs - kPaleySpotLhs) <= 1e-12);
  CHECK(std::abs(spot.rhs - kPaleySpotRhs) <= 1e-9);
  CHECK(std::abs(spot.ratio - kPaleySpotRatio) <= 1e-9);
  const auto single = TrigPolynomial::exponential(-1.0, 3.0);
  CHECK(check_paley(single, 1.25, 1e-6).ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(check_paley(kTwoCos, 1.0, 1e-6), Error);
}

TEST_CASE("single coefficient bound") {
  const auto r = check_l1_bound(kTwoCos, 1.0, 1e-6);
  CHECK(r.lhs == 1.0);
  CHECK(r.rhs == doctest::Approx(4 / pi).epsilon(1e-10));
  CHECK_FALSE(r.violation);
  const auto e = check_l1_bound(TrigPolynomial::exponential(1.0), 1.0, 1e-6);
  CHECK(e.lhs == 1.0);
  CHECK(e.rhs == 1.0);
  CHECK_FALSE(e.violation);
  CHECK(check_l1_bound(kTwoCos, 3.0, 1e-6).lhs == 0.0);
}

TEST_CASE("Lorentz-Paley checks") {
  const auto e = TrigPolynomial::exponential(1.0);
  for (auto [p, q] : {std::pair{1.5, 1.0}, std::pair{1.5, 3.0}, std::pair{1.25, 2.0}}) {
    const auto r = check_lorentz_paley(e, p, q, 1e-6);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.rhs == doctest::Approx(std::pow(p / q, 1 / q)).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(std::pow(q / p, 1 / q)).epsilon(1e-12));
  }
  for (double p : {1.25, 1.5}) {
    const auto lp = check_lorentz_paley(kTwoCos, p, p, 1e-6);
    const auto pa = check_paley(kTwoCos, p, 1e-6);
    CHECK(std::abs(lp.ratio - pa.ratio) <= 5e-3);
  }
  CHECK(check_lorentz_paley(TrigPolynomial{}, 1.5, 1.0, 1e-6).skipped);
}

TEST_CASE("names") {
  for (auto i : {Inequality::Bessel, Inequality::HausdorffYoung, Inequality::Paley, Inequality::L1Bound,
                 Inequality::LorentzPaley}) {
    CHECK(parse_inequality(inequality_name(i)) == i);
  }
  CHECK(parse_inequality("hy") == Inequality::HausdorffYoung);
  CHECK(parse_inequality("lp") == Inequality::LorentzPaley);
  CHECK_THROWS_AS(parse_inequality("young"), Error);
  CHECK(has_unit_constant(Inequality::Bessel));
  CHECK_FALSE(has_unit_constant(Inequality::Paley));
}

TEST_CASE("campaigns") {
  CampaignConfig hy;
  hy.q = 2.0;
  hy.trials = 1000;
  const auto r = run_campaign(hy);
  CHECK(r.violations == 0);
  CHECK(r.failures == 0);
  CHECK(r.max_ratio <= 1 + 1e-6);
  CHECK(r.pass);
  CHECK(r.records.size() == 1000);

  CampaignConfig pa;
  pa.inequality = Inequality::Paley;
  pa.q = 1.5;
  pa.trials = 200;
  const auto rp = run_campaign(pa);
  CHECK(std::isfinite(rp.max_ratio));
  CHECK(rp.empirical_constant == rp.max_ratio);
  CHECK(rp.last_quartile_max <= rp.max_ratio);
  REQUIRE(rp.spot);
  CHECK(std::abs(rp.spot->lhs - kPaleySpotLhs) <= 1e-12);
  CHECK(rp.pass);

  CampaignConfig be;
  be.inequality = Inequality::Bessel;
  be.trials = 10;
  be.generator.mode = GeneratorMode::GenericReal;
  be.generator.max_terms = 4;
  const auto rb = run_campaign(be);
  CHECK(rb.violations == 0);
  CHECK(rb.pass);
}

TEST_CASE("campaign validation") {
  CampaignConfig c;
  c.trials = 0;
  CHECK_THROWS_AS(run_campaign(c), Error);
  c.trials = 5;
  c.q = 3.0;
  CHECK_THROWS_AS(run_campaign(c), Error);
  c.inequality = Inequality::LorentzPaley;
  c.p = 2.5;
  CHECK_THROWS_AS(run_campaign(c), Error);
}

TEST_CASE("campaigns are deterministic across thread counts") {
  CampaignConfig c;
  c.inequality = Inequality::Paley;
  c.q = 1.25;
  c.trials = 40;
  c.base_seed = 99;
  c.threads = 1;
  const auto a = to_json(run_campaign(c)).dump();
  c.threads = 4;
  const auto b = to_json(run_campaign(c)).dump();
  CHECK(a == b);
  CHECK(to_json(run_campaign(c)).dump() == b);
}
