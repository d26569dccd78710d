#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace apcharge::numerics {

// Vectorised integrand: fills y[i] = f(x[i]). Implementations are expected to
// be pure, since the quadrature may evaluate points in any batch layout.
using BatchFunction = std::function<void(std::span<const double> x, std::span<double> y)>;

BatchFunction make_batch(std::function<double(double)> scalar);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  // Uniform panels to start from; oscillatory integrands need several per
  // period or the first Simpson estimate can agree with itself by accident.
  std::size_t initial_panels = 16;
  int max_depth = 48;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

// Adaptive Simpson with Richardson correction, refined breadth-first so that
// every refinement round is one batched call to the integrand. The tolerance
// is spread over [a, b] in proportion to panel width.
// Throws Error{QuadratureFailure} if a panel exceeds max_depth.
QuadratureResult adaptive_simpson(const BatchFunction& f, double a, double b, const QuadratureOptions& options = {});

}  // namespace apcharge::numerics
