#pragma once

// Decreasing rearrangements and Lorentz (quasi-)norms. Everything here is a
// finite sum: sequences are finite and distributions are step functions.

#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "apcharge/charge.hpp"

namespace apcharge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LorentzParams {
  double p = 2.0;
  double q = 2.0;  // kInf allowed

  // Throws InvalidArgument unless p in (0, inf) and q in (0, inf].
  static LorentzParams make(double p, double q);
  bool q_infinite() const noexcept { return q == kInf; }
  // 1/p + 1/p' = 1, only for p > 1.
  std::optional<double> p_conjugate() const noexcept;
};

struct RearrangedSeq {
  std::vector<double> values;  // nonincreasing, >= 0
};

RearrangedSeq rearrange_seq(std::span<const double> a);
RearrangedSeq rearrange_seq(std::span<const std::complex<double>> a);

// (sum_n [n^{1/p} a*_n]^q / n)^{1/q}, or sup_n n^{1/p} a*_n when q = inf.
double seq_lorentz_norm(const RearrangedSeq& a, const LorentzParams& params);
double seq_lorentz_norm(std::span<const double> a, const LorentzParams& params);
double seq_lorentz_norm(std::span<const std::complex<double>> a, const LorentzParams& params);

// (p int_0^inf mu(s)^{q/p} s^{q-1} ds)^{1/q}; sup_s s mu(s)^{1/p} for q = inf.
double lorentz_norm_from_distribution(const StepDistribution& d, const LorentzParams& params);

// f*(t) = inf{s : mu(s) <= t} as a step function. The result has the same
// shape as a distribution (nonincreasing, right-continuous), so it reuses
// StepDistribution: f* = v_j on [s_{j-1}, s_j).
StepDistribution rearrangement_from_distribution(const StepDistribution& d);

// Lebesgue distribution of a nonincreasing step function on [0, inf).
// Applied to f* it recovers mu_f.
StepDistribution lebesgue_distribution(const StepDistribution& step);

// (int_0^inf [t^{1/p} f*(t)]^q dt/t)^{1/q}; sup_t t^{1/p} f*(t) for q = inf.
double lorentz_norm_from_rearrangement(const StepDistribution& fstar, const LorentzParams& params);

// Distribution of |f|^r given that of f.
StepDistribution distribution_of_power(const StepDistribution& d, double r);

// ((p/q) int_0^inf mu_{|f|^q}(t)^{q/p} dt)^{1/q}, from mu_{|f|^q}.
double lorentz_norm_from_power_distribution(const StepDistribution& d_pow_q, const LorentzParams& params);

// int_0^inf |a(t)^{q/p} - b(t)^{q/p}| t^{q-1} dt for q < inf, and
// sup_t t |a(t)^{1/p} - b(t)^{1/p}| for q = inf.
double lorentz_gap(const StepDistribution& a, const StepDistribution& b, const LorentzParams& params);

// (1/q) int_0^inf |a(t)^{q/p} - b(t)^{q/p}| dt where a, b are the
// distributions of |f|^q and |g|^q.
double lorentz_gap_power(const StepDistribution& a_pow_q, const StepDistribution& b_pow_q,
                         const LorentzParams& params);

}  // namespace apcharge
