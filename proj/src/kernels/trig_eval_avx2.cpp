#include <immintrin.h>

#include <cmath>

#include "apcharge/kernels/kernels.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge::kernels::avx2 {

namespace {

// Beyond this the three-part Cody-Waite reduction loses accuracy and the
// quadrant no longer fits in int32; such lanes go through libm.
constexpr double kMaxReducedArg = 1.0e8;

// pi/2 split so that n * kPio2Hi is exact for |n| < 2^29.
constexpr double kPio2Hi = 1.57079625129699707031E0;
constexpr double kPio2Mid = 7.54978941586159635335E-8;
constexpr double kPio2Lo = 5.39030285815811905290E-15;
constexpr double kTwoOverPi = 0.63661977236758134308;

// Minimax coefficients on [-pi/4, pi/4] (Cephes).
constexpr double kSinCoef[6] = {1.58962301576546568060E-10, -2.50507477628578072866E-8, 2.75573136213857245213E-6,
                                -1.98412698295895385996E-4, 8.33333333332211858878E-3,  -1.66666666666666307295E-1};
constexpr double kCosCoef[6] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9, -2.75573141792967388112E-7,
                                2.48015872888517045348E-5,   -1.38888888888730564116E-3, 4.16666666666665929218E-2};

inline __m256d horner6(__m256d z, const double (&c)[6]) {
  __m256d acc = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i) acc = _mm256_fmadd_pd(acc, z, _mm256_set1_pd(c[i]));
  return acc;
}

inline void sincos_pd(__m256d x, __m256d* sin_out, __m256d* cos_out) {
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Lo), r);
  const __m256d z = _mm256_mul_pd(r, r);

  const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(r, z), horner6(z, kSinCoef), r);
  const __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(z, z), horner6(z, kCosCoef),
                                    _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  const __m128i q32 = _mm256_cvtpd_epi32(n);
  const __m256i q = _mm256_cvtepi32_epi64(q32);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sin_neg = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(q, two), 62));
  const __m256d cos_neg =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62));

  const __m256d sin_base = _mm256_blendv_pd(s, c, swap);
  const __m256d cos_base = _mm256_blendv_pd(c, s, swap);
  *sin_out = _mm256_xor_pd(sin_base, sin_neg);
  *cos_out = _mm256_xor_pd(cos_base, cos_neg);
}

inline bool needs_fallback(__m256d phase) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d mag = _mm256_and_pd(phase, abs_mask);
  // NaN compares false under _CMP_LE_OQ, so NaN lanes also fall back.
  const __m256d ok = _mm256_cmp_pd(mag, _mm256_set1_pd(kMaxReducedArg), _CMP_LE_OQ);
  return _mm256_movemask_pd(ok) != 0xF;
}

inline void sincos_lanes_libm(__m256d phase, __m256d* s, __m256d* c) {
  alignas(32) double p[4], sv[4], cv[4];
  _mm256_store_pd(p, phase);
  for (int i = 0; i < 4; ++i) {
    sv[i] = std::sin(p[i]);
    cv[i] = std::cos(p[i]);
  }
  *s = _mm256_load_pd(sv);
  *c = _mm256_load_pd(cv);
}

inline void eval4(const TrigTermsView& terms, __m256d x, __m256d* re_out, __m256d* im_out) {
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  for (std::size_t k = 0; k < terms.freq.size(); ++k) {
    const __m256d phase = _mm256_mul_pd(_mm256_set1_pd(terms.freq[k]), x);
    __m256d s, c;
    if (needs_fallback(phase)) {
      sincos_lanes_libm(phase, &s, &c);
    } else {
      sincos_pd(phase, &s, &c);
    }
    const __m256d ar = _mm256_set1_pd(terms.re[k]);
    const __m256d ai = _mm256_set1_pd(terms.im[k]);
    re = _mm256_fmadd_pd(ar, c, re);
    re = _mm256_fnmadd_pd(ai, s, re);
    im = _mm256_fmadd_pd(ar, s, im);
    im = _mm256_fmadd_pd(ai, c, im);
  }
  *re_out = re;
  *im_out = im;
}

}  // namespace

void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im) {
  const std::size_t n = x.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d re, im;
    eval4(terms, _mm256_loadu_pd(x.data() + j), &re, &im);
    _mm256_storeu_pd(out_re.data() + j, re);
    _mm256_storeu_pd(out_im.data() + j, im);
  }
  if (j < n) {
    scalar::trig_eval(terms, x.subspan(j), out_re.subspan(j), out_im.subspan(j));
  }
}

void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d re, im;
    eval4(terms, _mm256_loadu_pd(x.data() + j), &re, &im);
    const __m256d m2 = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
    if (power == 2.0) {
      _mm256_storeu_pd(out.data() + j, m2);
    } else if (power == 1.0) {
      _mm256_storeu_pd(out.data() + j, _mm256_sqrt_pd(m2));
    } else {
      alignas(32) double tmp[4];
      _mm256_store_pd(tmp, m2);
      for (int i = 0; i < 4; ++i) out[j + i] = std::pow(tmp[i], 0.5 * power);
    }
  }
  if (j < n) {
    scalar::trig_modulus_pow(terms, x.subspan(j), power, out.subspan(j));
  }
}

double sum(std::span<const double> xs) noexcept {
  const std::size_t n = xs.size();
  if (n < 16) return numerics::compensated_sum(xs);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d v = _mm256_loadu_pd(xs.data() + j);
    const __m256d t = _mm256_add_pd(acc, v);
    const __m256d acc_big =
        _mm256_cmp_pd(_mm256_and_pd(acc, abs_mask), _mm256_and_pd(v, abs_mask), _CMP_GE_OQ);
    const __m256d if_acc = _mm256_add_pd(_mm256_sub_pd(acc, t), v);
    const __m256d if_v = _mm256_add_pd(_mm256_sub_pd(v, t), acc);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(if_v, if_acc, acc_big));
    acc = t;
  }
  alignas(32) double lanes[4], comps[4];
  _mm256_store_pd(lanes, acc);
  _mm256_store_pd(comps, comp);
  numerics::CompensatedSum total;
  for (int i = 0; i < 4; ++i) total.add(lanes[i]);
  for (int i = 0; i < 4; ++i) total.add(comps[i]);
  for (; j < n; ++j) total.add(xs[j]);
  return total.value();
}

}  // namespace apcharge::kernels::avx2
