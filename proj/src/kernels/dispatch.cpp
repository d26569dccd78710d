#include <atomic>
#include <cstdlib>
#include <string>

#include "apcharge/error.hpp"
#include "apcharge/kernels/kernels.hpp"

namespace apcharge::kernels {

#ifndef APCHARGE_WITH_AVX2
// Link-time stand-ins so the avx2 namespace always resolves; never selected
// because isa_available(Avx2) is false in such builds.
namespace avx2 {
void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im) {
  scalar::trig_eval(terms, x, out_re, out_im);
}
void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out) {
  scalar::trig_modulus_pow(terms, x, power, out);
}
double sum(std::span<const double> xs) noexcept { return scalar::sum(xs); }
}  // namespace avx2
#endif

namespace {

Isa detect() noexcept {
  Isa best = Isa::Scalar;
  if (isa_available(Isa::Avx2)) best = Isa::Avx2;
  if (const char* env = std::getenv("APCHARGE_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return best;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(APCHARGE_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::InvalidArgument, "instruction set " + std::string(isa_name(isa)) + " is not available");
  }
  selected().store(isa, std::memory_order_relaxed);
}

void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im) {
  if (active_isa() == Isa::Avx2) {
    avx2::trig_eval(terms, x, out_re, out_im);
  } else {
    scalar::trig_eval(terms, x, out_re, out_im);
  }
}

void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out) {
  if (active_isa() == Isa::Avx2) {
    avx2::trig_modulus_pow(terms, x, power, out);
  } else {
    scalar::trig_modulus_pow(terms, x, power, out);
  }
}

double sum(std::span<const double> xs) noexcept {
  return active_isa() == Isa::Avx2 ? avx2::sum(xs) : scalar::sum(xs);
}

}  // namespace apcharge::kernels
