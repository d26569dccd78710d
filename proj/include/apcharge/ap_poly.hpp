#pragma once

// Almost periodic trigonometric polynomials sum_k a_k exp(i eta_k x) with
// arbitrary real frequencies: exact arithmetic and coefficients, and means
// of |P|^q either over one common period or over growing windows.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "apcharge/kernels/kernels.hpp"
#include "apcharge/lorentz.hpp"
#include "apcharge/numerics/quadrature.hpp"

namespace apcharge {

using Complex = std::complex<double>;

// Frequencies closer than this are the same frequency.
inline constexpr double kFreqEps = 1e-12;

struct TrigTerm {
  double freq = 0.0;
  Complex coeff{0.0, 0.0};
  friend bool operator==(const TrigTerm&, const TrigTerm&) = default;
};

class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  // Sorts by frequency, merges runs of frequencies within kFreqEps of the
  // first in the run, and drops coefficients that are exactly zero.
  static TrigPolynomial make(std::vector<TrigTerm> terms);
  static TrigPolynomial exponential(double freq, Complex coeff = 1.0) { return make({{freq, coeff}}); }
  static TrigPolynomial constant(Complex c) { return make({{0.0, c}}); }

  std::span<const TrigTerm> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::vector<Complex> coefficients() const;
  // sum_k |a_k|, an upper bound for sup |P|.
  double coefficient_l1() const noexcept;
  // max eta - min eta: the highest frequency present in |P|^2.
  double frequency_span() const noexcept;

  Complex operator()(double x) const noexcept;
  kernels::TrigTermsView view() const noexcept { return {freq_, re_, im_}; }

  friend bool operator==(const TrigPolynomial& a, const TrigPolynomial& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<TrigTerm> terms_;
  std::vector<double> freq_;
  std::vector<double> re_;
  std::vector<double> im_;
};

TrigPolynomial operator+(const TrigPolynomial& p, const TrigPolynomial& q);
TrigPolynomial operator-(const TrigPolynomial& p, const TrigPolynomial& q);
TrigPolynomial operator*(const TrigPolynomial& p, const TrigPolynomial& q);
TrigPolynomial scale(const TrigPolynomial& p, Complex c);
// conj(P)(x) = conj(P(x)): frequencies negate, coefficients conjugate.
TrigPolynomial conj(const TrigPolynomial& p);

// Coefficient at frequency 0.
Complex mean_value(const TrigPolynomial& p);
// a(eta; P). AmbiguousFrequency if eta is within kFreqEps of two stored
// frequencies.
Complex fourier_coefficient(const TrigPolynomial& p, double eta);

// 2 pi / omega when every frequency is an integer multiple of a common
// omega, ratios checked with commensurate_ratio(1e-9, 1e6). Constants get
// 2 pi. nullopt when no such omega exists or its multipliers exceed 1e6.
std::optional<double> common_period(const TrigPolynomial& p);

struct MeanEstimate {
  double value = 0.0;
  bool exact = false;
  double residual = 0.0;
};

struct WindowOptions {
  double tau0 = 64.0;
  int doublings = 8;
  double tol = 1e-8;
  // Largest angular frequency in g; sets the initial quadrature panels.
  double max_frequency = 1.0;
};

// (1/2 tau) int_{-tau}^{tau} g on tau_j = tau0 * 2^j. The residual is the
// largest of the last gap, max_j |m_j - m_last| tau_j / (tau_last - tau_j)
// (the error at tau_last if it were C / tau), and 2 K / tau_last with
// K = max tau |m(tau) - m_last| over ladder rungs and dense samples up to
// tau_last / 2 (the error if tau (m(tau) - mean) is bounded and oscillating).
// NotConverging when the ladder part, taken rung by rung, grows over the
// last three doublings.
MeanEstimate windowed_mean(const numerics::BatchFunction& g, const WindowOptions& options = {});

// x -> |P(x)|^power through the dispatched kernels.
numerics::BatchFunction modulus_pow_function(const TrigPolynomial& p, double power);

// int |P|^q dgamma: one common period by adaptive quadrature (exact = true)
// or windowed_mean otherwise.
MeanEstimate abs_pow_mean(const TrigPolynomial& p, double q, double tol = 1e-10);
double b_norm(const TrigPolynomial& p, double q, double tol = 1e-10);

struct GammaNormOptions {
  std::size_t levels = 512;
  std::size_t grid = 4096;  // cells per period for the distribution scan
  double tol = 1e-9;        // crossing bisection width
};

// Lorentz norm of |P| against gamma from the tabulated distribution
// gamma_{|P|}(s) = lambda({|P| > s} n [0, T)) / T. Without a common period
// the distribution is taken over [-tau, tau) for two window sizes and
// IncommensurableUnsupported is raised when they disagree by more than 1%.
double lorentz_gamma_norm(const TrigPolynomial& p, const LorentzParams& params, const GammaNormOptions& options = {});

// "re,im@freq;re,im@freq" (the ",im" part may be omitted).
TrigPolynomial parse_poly(std::string_view text);
std::string format_poly(const TrigPolynomial& p);
nlohmann::json to_json(const TrigPolynomial& p);
TrigPolynomial poly_from_json(const nlohmann::json& j);

}  // namespace apcharge
