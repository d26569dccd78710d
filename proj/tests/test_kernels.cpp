#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "apcharge/error.hpp"
#include "apcharge/kernels/kernels.hpp"

using namespace apcharge;
using namespace apcharge::kernels;

namespace {

struct Terms {
  std::vector<double> freq, re, im;
  TrigTermsView view() const { return {freq, re, im}; }
};

Terms random_terms(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Terms t;
  for (std::size_t k = 0; k < n; ++k) {
    t.freq.push_back(8.0 * u(rng));
    t.re.push_back(u(rng));
    t.im.push_back(u(rng));
  }
  return t;
}

std::vector<double> random_points(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("scalar trig_eval matches std::exp") {
  std::mt19937_64 rng(1);
  const auto t = random_terms(rng, 5);
  const auto x = random_points(rng, 37, 50.0);
  std::vector<double> re(x.size()), im(x.size());
  scalar::trig_eval(t.view(), x, re, im);
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::complex<double> z = 0.0;
    for (std::size_t k = 0; k < t.freq.size(); ++k) z += std::complex<double>(t.re[k], t.im[k]) * std::polar(1.0, t.freq[k] * x[j]);
    CHECK(re[j] == doctest::Approx(z.real()).epsilon(1e-14));
    CHECK(im[j] == doctest::Approx(z.imag()).epsilon(1e-14));
  }
}

TEST_CASE("avx2 kernels agree with scalar") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("avx2 not available on this machine; skipping");
    return;
  }
  std::mt19937_64 rng(2);
  for (double scale : {1.0, 100.0, 1e6, 1e9}) {
    for (std::size_t n_terms : {1u, 3u, 8u}) {
      const auto t = random_terms(rng, n_terms);
      const auto x = random_points(rng, 1027, scale);
      std::vector<double> re_s(x.size()), im_s(x.size()), re_v(x.size()), im_v(x.size());
      scalar::trig_eval(t.view(), x, re_s, im_s);
      avx2::trig_eval(t.view(), x, re_v, im_v);
      double bound = 0.0;
      for (std::size_t k = 0; k < n_terms; ++k) bound += std::hypot(t.re[k], t.im[k]);
      // Arguments up to 8e9 carry an absolute phase error of a few ulps.
      const double tol = 1e-15 * bound * std::max(64.0, 8.0 * scale * 1e-2);
      for (std::size_t j = 0; j < x.size(); ++j) {
        CHECK(std::abs(re_s[j] - re_v[j]) <= tol);
        CHECK(std::abs(im_s[j] - im_v[j]) <= tol);
      }
      for (double power : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        std::vector<double> m_s(x.size()), m_v(x.size());
        scalar::trig_modulus_pow(t.view(), x, power, m_s);
        avx2::trig_modulus_pow(t.view(), x, power, m_v);
        for (std::size_t j = 0; j < x.size(); ++j) {
          CHECK(std::abs(m_s[j] - m_v[j]) <= power * tol * std::pow(bound, power) + 1e-300);
        }
      }
    }
  }
  std::vector<double> xs = random_points(rng, 1001, 1e3);
  xs.push_back(1e18);
  xs.push_back(-1e18);
  CHECK(avx2::sum(xs) == scalar::sum(xs));
}

TEST_CASE("dispatch can be forced") {
  const Isa before = active_isa();
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  if (isa_available(Isa::Avx2)) {
    force_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Avx2);
  } else {
    CHECK_THROWS_AS(force_isa(Isa::Avx2), Error);
  }
  force_isa(before);
  CHECK(isa_name(Isa::Scalar) == "scalar");
}

TEST_CASE("modulus power of a single exponential is flat") {
  std::vector<double> freq = {3.0}, re = {0.6}, im = {0.8};
  std::vector<double> x = {0.0, 0.1, 1.0, 10.0, 100.0};
  std::vector<double> out(x.size());
  trig_modulus_pow({freq, re, im}, x, 3.0, out);
  for (double v : out) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}
