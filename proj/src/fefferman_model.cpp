#include "apcharge/fefferman_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge {

CofiniteModelSpace CofiniteModelSpace::from_charge(const Charge& mu) {
  if (mu.field().variant() != FieldOfSets::Variant::FiniteCofinite) {
    throw Error(ErrorKind::InvalidArgument, "the model space needs a finite/co-finite charge");
  }
  CofiniteModelSpace s;
  s.weights_ = mu.cofinite_weights();
  s.total_ = mu.total();
  return s;
}

double CofiniteModelSpace::measure_finite(std::span<const Point> points) const {
  numerics::CompensatedSum acc;
  for (Point n : points) acc.add(weights_.weight(n));
  return acc.value();
}

double CofiniteModelSpace::measure_cofinite_image(std::span<const Point> excluded) const {
  return total_ - measure_finite(excluded);
}

double ModelFunction::at(Point n) const noexcept {
  const auto it = std::lower_bound(exceptions.begin(), exceptions.end(), n,
                                   [](const auto& e, Point x) { return e.first < x; });
  if (it != exceptions.end() && it->first == n) return it->second;
  return tail_value;
}

ModelFunction canonical(ModelFunction g) {
  std::sort(g.exceptions.begin(), g.exceptions.end());
  g.exceptions.erase(std::unique(g.exceptions.begin(), g.exceptions.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     g.exceptions.end());
  std::erase_if(g.exceptions, [&](const auto& e) { return e.second == g.tail_value; });
  return g;
}

ModelFunction pointwise(const ModelFunction& g, const ModelFunction& h,
                        const std::function<double(double, double)>& op) {
  std::vector<Point> pts;
  for (const auto& e : g.exceptions) pts.push_back(e.first);
  for (const auto& e : h.exceptions) pts.push_back(e.first);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  ModelFunction out;
  out.tail_value = op(g.tail_value, h.tail_value);
  out.infinity_value = op(g.infinity_value, h.infinity_value);
  for (Point n : pts) out.exceptions.emplace_back(n, op(g.at(n), h.at(n)));
  return canonical(std::move(out));
}

ModelFunction embed_simple(const FieldOfSets& field, const SimpleFunction& f) {
  if (field.variant() != FieldOfSets::Variant::FiniteCofinite) {
    throw Error(ErrorKind::InvalidArgument, "embedding is defined for the finite/co-finite field");
  }
  const PointwiseForm form = pointwise(field, f);
  ModelFunction g;
  g.exceptions = form.points;
  g.tail_value = form.rest;
  g.infinity_value = form.rest;
  return canonical(std::move(g));
}

ModelFunction embed_sequence(const SimpleFunctionSequence& seq, double tol) {
  const auto cauchy = is_cauchy(seq, tol, tol);
  if (!cauchy.converged) {
    throw Error(ErrorKind::NotCauchy, "cannot embed: Cauchy residual " + std::to_string(cauchy.residual) +
                                          " exceeds tolerance");
  }
  const FieldOfSets& field = seq.charge.field();
  const auto [lo, hi] = seq.ladder();
  const ModelFunction last = embed_simple(field, seq.at(hi));
  const ModelFunction mid = embed_simple(field, seq.at(lo));
  if (std::fabs(last.infinity_value - mid.infinity_value) > tol) {
    throw Error(ErrorKind::TailNotConvergent, "co-finite values move by " +
                                                  std::to_string(std::fabs(last.infinity_value - mid.infinity_value)) +
                                                  " along the ladder");
  }
  return last;
}

std::string ModelNormSpec::name() const {
  std::ostringstream os;
  auto fmt = [](double x) {
    if (x == kInf) return std::string("inf");
    std::ostringstream s;
    s << x;
    return s.str();
  };
  switch (kind) {
    case Kind::Integral: return "integral";
    case Kind::Lp: os << "L" << fmt(p); return os.str();
    case Kind::Lorentz: os << "L" << fmt(p) << "," << fmt(q); return os.str();
    case Kind::FNorm: return "F";
  }
  return "?";
}

std::vector<std::pair<double, double>> model_levels(const CofiniteModelSpace& space, const ModelFunction& g) {
  std::vector<std::pair<double, double>> levels;
  numerics::CompensatedSum listed;
  for (const auto& [n, v] : g.exceptions) {
    const double w = space.weights().weight(n);
    listed.add(w);
    levels.emplace_back(v, w);
  }
  const double tail_mass = space.weights().total() - listed.value();
  if (tail_mass < -1e-12) {
    throw Error(ErrorKind::TruncationBoundExceedsTol, "remaining point mass is negative beyond 1e-12");
  }
  levels.emplace_back(g.tail_value, std::max(0.0, tail_mass));
  levels.emplace_back(g.infinity_value, space.infinity_mass());
  return levels;
}

double model_norm(const CofiniteModelSpace& space, const ModelFunction& g, const ModelNormSpec& spec) {
  const auto levels = model_levels(space, g);
  switch (spec.kind) {
    case ModelNormSpec::Kind::Integral: {
      numerics::CompensatedSum acc;
      for (const auto& [v, m] : levels) acc.add(v * m);
      return acc.value();
    }
    case ModelNormSpec::Kind::Lp: {
      if (!(spec.p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
      if (spec.p == kInf) {
        double best = 0.0;
        for (const auto& [v, m] : levels) {
          if (m > 0.0) best = std::max(best, std::fabs(v));
        }
        return best;
      }
      numerics::CompensatedSum acc;
      for (const auto& [v, m] : levels) acc.add(std::pow(std::fabs(v), spec.p) * m);
      return std::pow(acc.value(), 1.0 / spec.p);
    }
    case ModelNormSpec::Kind::Lorentz:
    case ModelNormSpec::Kind::FNorm: {
      std::vector<std::pair<double, double>> abs_levels;
      for (const auto& [v, m] : levels) abs_levels.emplace_back(std::fabs(v), m);
      const auto d = StepDistribution::from_levels(std::move(abs_levels));
      if (spec.kind == ModelNormSpec::Kind::FNorm) return f_metric_norm(d);
      return lorentz_norm_from_distribution(d, LorentzParams::make(spec.p, spec.q));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown norm kind");
}

bool IsometryReport::all_ok() const noexcept {
  return multiplication_preserved && order_preserved &&
         std::all_of(rows.begin(), rows.end(), [](const IsometryRow& r) { return r.ok; });
}

IsometryReport verify_isometry(const SimpleFunctionSequence& seq, std::span<const ModelNormSpec> spaces, double tol) {
  const auto space = CofiniteModelSpace::from_charge(seq.charge);
  const FieldOfSets& field = seq.charge.field();
  const ModelFunction g = embed_sequence(seq, tol);

  IsometryReport report;
  for (const auto& spec : spaces) {
    LimitDiagnostic charge_side;
    switch (spec.kind) {
      case ModelNormSpec::Kind::Integral: charge_side = integrate_sequence(seq, tol); break;
      case ModelNormSpec::Kind::Lp: charge_side = ldot_p_norm(seq, spec.p, tol); break;
      case ModelNormSpec::Kind::Lorentz: charge_side = ldot_pq_norm(seq, LorentzParams::make(spec.p, spec.q), tol); break;
      case ModelNormSpec::Kind::FNorm: charge_side = tmdot_norm(seq, tol); break;
    }
    IsometryRow row;
    row.space = spec.name();
    row.charge_side = charge_side.estimate;
    row.model_side = model_norm(space, g, spec);
    row.discrepancy = std::fabs(row.charge_side - row.model_side);
    row.residual = charge_side.residual;
    row.ok = row.discrepancy <= row.residual + 1e-9;
    report.max_discrepancy = std::max(report.max_discrepancy, row.discrepancy);
    report.rows.push_back(std::move(row));
  }

  const auto fn = seq.at(seq.ladder().second);
  const auto squared = embed_simple(field, combine(field, fn, fn, PointwiseOp::Mul));
  const auto e = embed_simple(field, fn);
  report.multiplication_preserved = squared == pointwise(e, e, std::multiplies<double>{});

  if (order_geq_zero(seq, tol)) {
    const auto negative = pointwise(g, g, [](double a, double) { return a < 0.0 ? -a : 0.0; });
    report.order_preserved = model_norm(space, negative, ModelNormSpec::f_norm()) <= tol;
  } else {
    report.order_preserved = true;
  }
  return report;
}

}  // namespace apcharge
