#include <cmath>

#include "apcharge/kernels/kernels.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge::kernels::scalar {

void trig_eval(const TrigTermsView& terms, std::span<const double> x, std::span<double> out_re,
               std::span<double> out_im) {
  const std::size_t n_terms = terms.freq.size();
  for (std::size_t j = 0; j < x.size(); ++j) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
      const double phase = terms.freq[k] * x[j];
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      re += terms.re[k] * c - terms.im[k] * s;
      im += terms.re[k] * s + terms.im[k] * c;
    }
    out_re[j] = re;
    out_im[j] = im;
  }
}

void trig_modulus_pow(const TrigTermsView& terms, std::span<const double> x, double power, std::span<double> out) {
  const std::size_t n_terms = terms.freq.size();
  for (std::size_t j = 0; j < x.size(); ++j) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
      const double phase = terms.freq[k] * x[j];
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      re += terms.re[k] * c - terms.im[k] * s;
      im += terms.re[k] * s + terms.im[k] * c;
    }
    const double m2 = re * re + im * im;
    if (power == 2.0) {
      out[j] = m2;
    } else if (power == 1.0) {
      out[j] = std::sqrt(m2);
    } else {
      out[j] = std::pow(m2, 0.5 * power);
    }
  }
}

double sum(std::span<const double> xs) noexcept { return numerics::compensated_sum(xs); }

}  // namespace apcharge::kernels::scalar
