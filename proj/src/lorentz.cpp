#include "apcharge/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge {

LorentzParams LorentzParams::make(double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "Lorentz exponent p must lie in (0, inf)");
  if (!(q > 0.0)) throw Error(ErrorKind::InvalidArgument, "Lorentz exponent q must lie in (0, inf]");
  return LorentzParams{p, q};
}

std::optional<double> LorentzParams::p_conjugate() const noexcept {
  if (!(p > 1.0)) return std::nullopt;
  return p / (p - 1.0);
}

namespace {

void validate(const LorentzParams& params) { (void)LorentzParams::make(params.p, params.q); }

RearrangedSeq sorted_desc(std::vector<double> v) {
  std::stable_sort(v.begin(), v.end(), std::greater<>{});
  return RearrangedSeq{std::move(v)};
}

std::vector<double> merged_cuts(const StepDistribution& a, const StepDistribution& b) {
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), a.breakpoints().begin(), a.breakpoints().end());
  cuts.insert(cuts.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

RearrangedSeq rearrange_seq(std::span<const double> a) {
  std::vector<double> v;
  v.reserve(a.size());
  for (double x : a) v.push_back(std::fabs(x));
  return sorted_desc(std::move(v));
}

RearrangedSeq rearrange_seq(std::span<const std::complex<double>> a) {
  std::vector<double> v;
  v.reserve(a.size());
  for (const auto& z : a) v.push_back(std::abs(z));
  return sorted_desc(std::move(v));
}

double seq_lorentz_norm(const RearrangedSeq& a, const LorentzParams& params) {
  validate(params);
  const double inv_p = 1.0 / params.p;
  if (params.q_infinite()) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      best = std::max(best, std::pow(static_cast<double>(i + 1), inv_p) * a.values[i]);
    }
    return best;
  }
  const double q = params.q;
  const double weight_exp = q / params.p - 1.0;
  numerics::CompensatedSum acc;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == 0.0) continue;
    acc.add(std::pow(static_cast<double>(i + 1), weight_exp) * std::pow(a.values[i], q));
  }
  return std::pow(acc.value(), 1.0 / q);
}

double seq_lorentz_norm(std::span<const double> a, const LorentzParams& params) {
  return seq_lorentz_norm(rearrange_seq(a), params);
}

double seq_lorentz_norm(std::span<const std::complex<double>> a, const LorentzParams& params) {
  return seq_lorentz_norm(rearrange_seq(a), params);
}

double lorentz_norm_from_distribution(const StepDistribution& d, const LorentzParams& params) {
  validate(params);
  if (d.empty()) return 0.0;
  const auto c = d.values();
  if (params.q_infinite()) {
    double best = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) best = std::max(best, d.right(i) * std::pow(c[i], 1.0 / params.p));
    return best;
  }
  const double q = params.q;
  const double r = q / params.p;
  numerics::CompensatedSum acc;
  for (std::size_t i = 0; i < d.size(); ++i) {
    acc.add(std::pow(c[i], r) * (std::pow(d.right(i), q) - std::pow(d.left(i), q)));
  }
  return std::pow(params.p * acc.value() / q, 1.0 / q);
}

StepDistribution rearrangement_from_distribution(const StepDistribution& d) {
  const std::size_t m = d.size();
  std::vector<double> breakpoints(m);
  std::vector<double> values(m);
  for (std::size_t k = 0; k < m; ++k) {
    breakpoints[k] = d.values()[m - 1 - k];
    values[k] = d.right(m - 1 - k);
  }
  return StepDistribution::from_steps(std::move(breakpoints), std::move(values));
}

StepDistribution lebesgue_distribution(const StepDistribution& step) { return rearrangement_from_distribution(step); }

double lorentz_norm_from_rearrangement(const StepDistribution& fstar, const LorentzParams& params) {
  validate(params);
  if (fstar.empty()) return 0.0;
  const auto v = fstar.values();
  if (params.q_infinite()) {
    double best = 0.0;
    for (std::size_t j = 0; j < fstar.size(); ++j) {
      best = std::max(best, std::pow(fstar.right(j), 1.0 / params.p) * v[j]);
    }
    return best;
  }
  const double q = params.q;
  const double r = q / params.p;
  numerics::CompensatedSum acc;
  for (std::size_t j = 0; j < fstar.size(); ++j) {
    acc.add(std::pow(v[j], q) * (std::pow(fstar.right(j), r) - std::pow(fstar.left(j), r)));
  }
  return std::pow(acc.value() * params.p / q, 1.0 / q);
}

StepDistribution distribution_of_power(const StepDistribution& d, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidArgument, "power must be positive and finite");
  std::vector<double> breakpoints;
  for (double t : d.breakpoints()) breakpoints.push_back(std::pow(t, r));
  return StepDistribution::from_steps(std::move(breakpoints), {d.values().begin(), d.values().end()});
}

double lorentz_norm_from_power_distribution(const StepDistribution& d_pow_q, const LorentzParams& params) {
  validate(params);
  if (params.q_infinite()) throw Error(ErrorKind::InvalidArgument, "the power route needs q < inf");
  const double r = params.q / params.p;
  numerics::CompensatedSum acc;
  for (std::size_t i = 0; i < d_pow_q.size(); ++i) {
    acc.add(std::pow(d_pow_q.values()[i], r) * (d_pow_q.right(i) - d_pow_q.left(i)));
  }
  return std::pow(params.p / params.q * acc.value(), 1.0 / params.q);
}

double lorentz_gap(const StepDistribution& a, const StepDistribution& b, const LorentzParams& params) {
  validate(params);
  const auto cuts = merged_cuts(a, b);
  if (params.q_infinite()) {
    const double e = 1.0 / params.p;
    double best = 0.0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      const double lo = cuts[k - 1];
      best = std::max(best, cuts[k] * std::fabs(std::pow(a(lo), e) - std::pow(b(lo), e)));
    }
    return best;
  }
  const double q = params.q;
  const double e = q / params.p;
  numerics::CompensatedSum acc;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = cuts[k - 1];
    acc.add(std::fabs(std::pow(a(lo), e) - std::pow(b(lo), e)) * (std::pow(cuts[k], q) - std::pow(lo, q)) / q);
  }
  return acc.value();
}

double lorentz_gap_power(const StepDistribution& a_pow_q, const StepDistribution& b_pow_q,
                         const LorentzParams& params) {
  validate(params);
  if (params.q_infinite()) throw Error(ErrorKind::InvalidArgument, "the power route needs q < inf");
  const auto cuts = merged_cuts(a_pow_q, b_pow_q);
  const double e = params.q / params.p;
  numerics::CompensatedSum acc;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = cuts[k - 1];
    acc.add(std::fabs(std::pow(a_pow_q(lo), e) - std::pow(b_pow_q(lo), e)) * (cuts[k] - lo));
  }
  return acc.value() / params.q;
}

}  // namespace apcharge
