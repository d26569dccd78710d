#include "apcharge/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge::numerics {

namespace {

struct Panel {
  double a, b;
  double fa, fm, fb;
  double whole;
  int depth;
};

constexpr std::size_t kBlockPanels = 4096;

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

}  // namespace

BatchFunction make_batch(std::function<double(double)> scalar) {
  return [fn = std::move(scalar)](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = fn(x[i]);
  };
}

QuadratureResult adaptive_simpson(const BatchFunction& f, double a, double b, const QuadratureOptions& options) {
  QuadratureResult result;
  if (!(b > a)) return result;
  if (!(options.abs_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature tolerance must be positive");

  const double total_width = b - a;
  const std::size_t n_panels = std::max<std::size_t>(1, options.initial_panels);
  const double h = total_width / static_cast<double>(n_panels);

  CompensatedSum value;
  CompensatedSum error;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<Panel> active;
  std::vector<Panel> next;

  // Blocks bound the breadth-first frontier for long oscillatory ranges.
  for (std::size_t block_start = 0; block_start < n_panels; block_start += kBlockPanels) {
    const std::size_t block_end = std::min(n_panels, block_start + kBlockPanels);
    const std::size_t count = block_end - block_start;

    xs.resize(2 * count + 1);
    for (std::size_t i = 0; i <= 2 * count; ++i) {
      const std::size_t global = 2 * block_start + i;
      xs[i] = (global == 2 * n_panels) ? b : a + 0.5 * h * static_cast<double>(global);
    }
    ys.resize(xs.size());
    f(xs, ys);
    result.evaluations += xs.size();

    active.clear();
    for (std::size_t i = 0; i < count; ++i) {
      Panel p{xs[2 * i], xs[2 * i + 2], ys[2 * i], ys[2 * i + 1], ys[2 * i + 2], 0.0, 0};
      p.whole = simpson(p.a, p.b, p.fa, p.fm, p.fb);
      active.push_back(p);
    }

    while (!active.empty()) {
      xs.resize(2 * active.size());
      for (std::size_t i = 0; i < active.size(); ++i) {
        const Panel& p = active[i];
        const double m = 0.5 * (p.a + p.b);
        xs[2 * i] = 0.5 * (p.a + m);
        xs[2 * i + 1] = 0.5 * (m + p.b);
      }
      ys.resize(xs.size());
      f(xs, ys);
      result.evaluations += xs.size();

      next.clear();
      for (std::size_t i = 0; i < active.size(); ++i) {
        const Panel& p = active[i];
        const double m = 0.5 * (p.a + p.b);
        const double flm = ys[2 * i];
        const double frm = ys[2 * i + 1];
        const double left = simpson(p.a, m, p.fa, flm, p.fm);
        const double right = simpson(m, p.b, p.fm, frm, p.fb);
        const double refined = left + right;
        const double diff = refined - p.whole;
        const double panel_tol = options.abs_tol * (p.b - p.a) / total_width;
        if (!std::isfinite(refined)) {
          throw Error(ErrorKind::QuadratureFailure, "non-finite integrand value near x=" + std::to_string(m));
        }
        if (std::fabs(diff) <= 15.0 * panel_tol || m <= p.a || m >= p.b) {
          value.add(refined + diff / 15.0);
          error.add(std::fabs(diff) / 15.0);
          continue;
        }
        if (p.depth + 1 >= options.max_depth) {
          throw Error(ErrorKind::QuadratureFailure,
                      "refinement depth limit reached on [" + std::to_string(p.a) + ", " + std::to_string(p.b) + ")");
        }
        next.push_back(Panel{p.a, m, p.fa, flm, p.fm, left, p.depth + 1});
        next.push_back(Panel{m, p.b, p.fm, frm, p.fb, right, p.depth + 1});
      }
      active.swap(next);
    }
  }

  result.value = value.value();
  result.error_estimate = error.value();
  return result;
}

}  // namespace apcharge::numerics
