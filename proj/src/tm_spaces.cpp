#include "apcharge/tm_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "apcharge/error.hpp"

namespace apcharge {

SimpleFunction SimpleFunctionSequence::at(std::size_t n) const {
  if (n < 1 || n > horizon) {
    throw Error(ErrorKind::InvalidArgument, "sequence index " + std::to_string(n) + " outside 1.." + std::to_string(horizon));
  }
  return generator(n);
}

std::pair<std::size_t, std::size_t> SimpleFunctionSequence::ladder() const {
  if (horizon < 4) throw Error(ErrorKind::HorizonTooSmall, "horizon must be at least 4, got " + std::to_string(horizon));
  return {horizon / 2, horizon};
}

SetExpr level_set_above(const FieldOfSets& field, const SimpleFunction& h, double delta) {
  SetExpr out = field.empty_set();
  for (const auto& t : h.terms()) {
    if (std::fabs(t.value) > delta) out = field.unite(out, t.set);
  }
  return out;
}

namespace {

LimitDiagnostic finish(double estimate, double residual, std::pair<std::size_t, std::size_t> idx, double tol) {
  return LimitDiagnostic{estimate, residual, idx, residual <= tol};
}

SimpleFunction abs_pow(const FieldOfSets& field, const SimpleFunction& f, double p) {
  return apply(field, f, [p](double v) { return std::pow(std::fabs(v), p); });
}

}  // namespace

LimitDiagnostic is_cauchy(const SimpleFunctionSequence& seq, double delta, double tol) {
  const auto idx = seq.ladder();
  const FieldOfSets& field = seq.charge.field();
  const auto d = combine(field, seq.at(idx.second), seq.at(idx.first), PointwiseOp::Sub);
  const double r = seq.charge.outer(level_set_above(field, d, delta));
  return finish(r, r, idx, tol);
}

LimitDiagnostic converges_to(const SimpleFunctionSequence& seq, const SimpleFunction& f, double delta, double tol) {
  const auto idx = seq.ladder();
  const FieldOfSets& field = seq.charge.field();
  const auto d = combine(field, f, seq.at(idx.second), PointwiseOp::Sub);
  const double r = seq.charge.outer(level_set_above(field, d, delta));
  return finish(r, r, {idx.second, idx.second}, tol);
}

bool equivalent(const SimpleFunctionSequence& a, const SimpleFunctionSequence& b, double delta, double tol) {
  const std::size_t n = std::min(a.ladder().second, b.ladder().second);
  const FieldOfSets& field = a.charge.field();
  const auto d = combine(field, a.at(n), b.at(n), PointwiseOp::Sub);
  return a.charge.outer(level_set_above(field, d, delta)) <= tol;
}

LimitDiagnostic tmdot_norm(const SimpleFunctionSequence& seq, double tol) {
  const auto idx = seq.ladder();
  const double hi = f_metric_norm(seq.charge, seq.at(idx.second));
  const double lo = f_metric_norm(seq.charge, seq.at(idx.first));
  return finish(hi, std::fabs(hi - lo), idx, tol);
}

bool order_geq_zero(const SimpleFunctionSequence& seq, double tol) {
  const auto idx = seq.ladder();
  const FieldOfSets& field = seq.charge.field();
  auto neg_norm = [&](std::size_t n) {
    return f_metric_norm(seq.charge, apply(field, seq.at(n), [](double v) { return v < 0.0 ? -v : 0.0; }));
  };
  const double last = neg_norm(idx.second);
  return last <= tol && last <= neg_norm(idx.first);
}

LimitDiagnostic integrate_sequence(const SimpleFunctionSequence& seq, double tol) {
  const auto cauchy = is_cauchy(seq, tol, tol);
  if (!cauchy.converged) {
    throw Error(ErrorKind::NotCauchy, "sequence is not Cauchy in charge at the horizon (residual " +
                                          std::to_string(cauchy.residual) + ")");
  }
  const auto idx = seq.ladder();
  const FieldOfSets& field = seq.charge.field();
  const auto fn = seq.at(idx.second);
  const auto gap = combine_with(field, fn, seq.at(idx.first), [](double a, double b) { return std::fabs(a - b); });
  const double residual = integrate_simple(seq.charge, gap);
  if (residual > tol) {
    throw Error(ErrorKind::NotCauchyL1, "L1 Cauchy residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return finish(integrate_simple(seq.charge, fn), residual, idx, tol);
}

LimitDiagnostic ldot_p_norm(const SimpleFunctionSequence& seq, double p, double tol) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
  const auto idx = seq.ladder();
  const FieldOfSets& field = seq.charge.field();
  const auto fn = seq.at(idx.second);
  const auto fm = seq.at(idx.first);
  if (p == kInf) {
    auto essential_bound = [&](const SimpleFunction& f) {
      std::vector<double> levels{0.0};
      for (const auto& t : f.terms()) levels.push_back(std::fabs(t.value));
      std::sort(levels.begin(), levels.end());
      for (double c : levels) {
        if (seq.charge.outer(level_set_above(field, f, c)) <= tol) return c;
      }
      return levels.back();
    };
    const double hi = essential_bound(fn);
    return finish(hi, std::fabs(hi - essential_bound(fm)), idx, tol);
  }
  const auto gap = combine_with(field, abs_pow(field, fn, p), abs_pow(field, fm, p),
                                [](double a, double b) { return std::fabs(a - b); });
  const double residual = integrate_simple(seq.charge, gap);
  if (residual > tol) {
    throw Error(ErrorKind::NotCauchyLp, "L^p Cauchy residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return finish(std::pow(integrate_simple(seq.charge, abs_pow(field, fn, p)), 1.0 / p), residual, idx, tol);
}

LimitDiagnostic ldot_pq_norm(const SimpleFunctionSequence& seq, const LorentzParams& params, double tol) {
  const auto idx = seq.ladder();
  const auto dn = distribution_simple(seq.charge, seq.at(idx.second));
  const auto dm = distribution_simple(seq.charge, seq.at(idx.first));
  const double residual = lorentz_gap(dn, dm, params);
  if (residual > tol) {
    throw Error(ErrorKind::NotCauchyLorentz, "Lorentz Cauchy residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return finish(lorentz_norm_from_distribution(dn, params), residual, idx, tol);
}

}  // namespace apcharge
