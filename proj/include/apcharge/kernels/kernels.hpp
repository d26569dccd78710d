#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and, where the target supports it, a vector variant with
// the same signature. The unqualified entry points dispatch at runtime to the
// best available instruction set; APCHARGE_SIMD=scalar|avx2 overrides the
// choice.

#include <span>
#include <string_view>

namespace apcharge::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
// For tests and benchmarks. Throws Error{InvalidArgument} if unavailable.
void force_isa(Isa isa);

// Structure-of-arrays view of sum_k (re_k + i im_k) exp(i freq_k x).
struct TrigTermsView {
  std::span<const double> freq;
  std::span<const double> re;
  std::span<const double> im;
};

// out_re[j] + i out_im[j] = P(x[j]).
void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im);

// out[j] = |P(x[j])|^power, power > 0. power 1 and 2 avoid pow().
void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out);

// Compensated sum.
double sum(std::span<const double> xs) noexcept;

namespace scalar {
void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im);
void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out);
double sum(std::span<const double> xs) noexcept;
}  // namespace scalar

namespace avx2 {
void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im);
void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out);
double sum(std::span<const double> xs) noexcept;
}  // namespace avx2

}  // namespace apcharge::kernels
