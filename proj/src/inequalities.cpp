#include "apcharge/inequalities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"

namespace apcharge {

namespace {

constexpr double kSkipBelow = 1e-12;

// Fixed mappings from the engine's raw output, so a seed means the same
// polynomial on every standard library.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

Complex random_coefficient(std::mt19937_64& rng, double bound) {
  const double r = bound * std::sqrt(unit_uniform(rng));
  const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
  return std::polar(r, theta);
}

// d(m^{1/q}) for an uncertainty dm in m.
double root_residual(double m, double dm, double q) {
  if (dm == 0.0) return 0.0;
  if (m <= dm) return std::pow(dm, 1.0 / q);
  return std::pow(m, 1.0 / q - 1.0) / q * dm;
}

TrialRecord make_record(const TrigPolynomial& p, double lhs, double rhs, double residual) {
  TrialRecord r;
  r.poly = format_poly(p);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = residual;
  r.skipped = !(rhs >= kSkipBelow);
  r.ratio = r.skipped ? 0.0 : lhs / rhs;
  return r;
}

double conjugate(double q) { return q == 1.0 ? kInf : q / (q - 1.0); }

}  // namespace

TrigPolynomial gen_random_poly(std::uint64_t seed, std::size_t n_terms, double freq_range, double coeff_bound,
                               GeneratorMode mode) {
  if (!(freq_range > 0.0) || !(coeff_bound > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "frequency range and coefficient bound must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> freqs;
  if (mode == GeneratorMode::IntegerLattice) {
    const auto r = static_cast<std::int64_t>(std::floor(freq_range));
    const auto slots = static_cast<std::uint64_t>(2 * r + 1);
    if (n_terms > slots) throw Error(ErrorKind::InvalidArgument, "not enough integer frequencies in range");
    while (freqs.size() < n_terms) {
      const double f = static_cast<double>(static_cast<std::int64_t>(below(rng, slots)) - r);
      if (std::find(freqs.begin(), freqs.end(), f) == freqs.end()) freqs.push_back(f);
    }
  } else {
    while (freqs.size() < n_terms) {
      const double f = freq_range * (2.0 * unit_uniform(rng) - 1.0);
      const bool clear = std::all_of(freqs.begin(), freqs.end(), [f](double g) { return std::fabs(f - g) > 10.0 * kFreqEps; });
      if (clear) freqs.push_back(f);
    }
  }
  std::vector<TrigTerm> terms;
  for (double f : freqs) {
    Complex c = random_coefficient(rng, coeff_bound);
    while (c == Complex(0.0, 0.0)) c = random_coefficient(rng, coeff_bound);
    terms.push_back({f, c});
  }
  return TrigPolynomial::make(std::move(terms));
}

TrigPolynomial gen_campaign_poly(std::uint64_t seed, const GeneratorSettings& settings) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t n = 1 + static_cast<std::size_t>(below(rng, std::max<std::size_t>(1, settings.max_terms)));
  return gen_random_poly(seed, n, settings.freq_range, settings.coeff_bound, settings.mode);
}

TrialRecord check_bessel(const TrigPolynomial& p, double tol) {
  numerics::CompensatedSum lhs;
  for (const auto& t : p.terms()) lhs.add(std::norm(t.coeff));
  const auto mean = abs_pow_mean(p, 2.0, std::min(1e-10, tol / 10.0));
  TrialRecord r = make_record(p, lhs.value(), mean.value, mean.residual);
  r.violation = r.lhs > r.rhs + tol + r.residual || std::fabs(r.lhs - r.rhs) > tol + r.residual;
  return r;
}

TrialRecord check_hausdorff_young(const TrigPolynomial& p, double q, double tol) {
  if (!(q >= 1.0 && q <= 2.0)) throw Error(ErrorKind::InvalidArgument, "Hausdorff-Young needs q in [1, 2]");
  const double qp = conjugate(q);
  double lhs = 0.0;
  if (qp == kInf) {
    for (const auto& t : p.terms()) lhs = std::max(lhs, std::abs(t.coeff));
  } else {
    numerics::CompensatedSum acc;
    for (const auto& t : p.terms()) acc.add(std::pow(std::abs(t.coeff), qp));
    lhs = std::pow(acc.value(), 1.0 / qp);
  }
  const auto mean = abs_pow_mean(p, q);
  TrialRecord r = make_record(p, lhs, std::pow(mean.value, 1.0 / q), root_residual(mean.value, mean.residual, q));
  r.violation = r.lhs > r.rhs * (1.0 + tol) + r.residual;
  return r;
}

TrialRecord check_paley(const TrigPolynomial& p, double q, double tol) {
  (void)tol;
  if (!(q > 1.0 && q <= 2.0)) throw Error(ErrorKind::InvalidArgument, "the Paley inequality needs q in (1, 2]");
  const auto coeffs = p.coefficients();
  const double lhs = seq_lorentz_norm(std::span<const Complex>(coeffs), LorentzParams::make(conjugate(q), q));
  const auto mean = abs_pow_mean(p, q);
  return make_record(p, lhs, std::pow(mean.value, 1.0 / q), root_residual(mean.value, mean.residual, q));
}

TrialRecord check_l1_bound(const TrigPolynomial& p, double eta, double tol) {
  const double lhs = std::abs(fourier_coefficient(p, eta));
  const auto mean = abs_pow_mean(p, 1.0);
  TrialRecord r = make_record(p, lhs, mean.value, mean.residual);
  r.violation = r.lhs > r.rhs + r.residual + tol;
  return r;
}

TrialRecord check_lorentz_paley(const TrigPolynomial& p, double lp, double lq, double tol) {
  (void)tol;
  if (!(lp > 1.0 && lp < 2.0)) throw Error(ErrorKind::InvalidArgument, "the Lorentz-Paley bound needs p in (1, 2)");
  const auto coeffs = p.coefficients();
  const double lhs = seq_lorentz_norm(std::span<const Complex>(coeffs), LorentzParams::make(conjugate(lp), lq));
  const double rhs = lorentz_gamma_norm(p, LorentzParams::make(lp, lq));
  return make_record(p, lhs, rhs, 0.0);
}

std::string inequality_name(Inequality ineq) {
  switch (ineq) {
    case Inequality::Bessel: return "bessel";
    case Inequality::HausdorffYoung: return "hausdorff_young";
    case Inequality::Paley: return "paley";
    case Inequality::L1Bound: return "l1_bound";
    case Inequality::LorentzPaley: return "lorentz_paley";
  }
  return "unknown";
}

Inequality parse_inequality(std::string_view name) {
  if (name == "bessel") return Inequality::Bessel;
  if (name == "hausdorff_young" || name == "hy") return Inequality::HausdorffYoung;
  if (name == "paley") return Inequality::Paley;
  if (name == "l1_bound") return Inequality::L1Bound;
  if (name == "lorentz_paley" || name == "lp") return Inequality::LorentzPaley;
  throw Error(ErrorKind::InvalidArgument, "unknown inequality '" + std::string(name) + "'");
}

bool has_unit_constant(Inequality ineq) {
  return ineq == Inequality::Bessel || ineq == Inequality::HausdorffYoung || ineq == Inequality::L1Bound;
}

namespace {

TrialRecord run_check(const CampaignConfig& c, const TrigPolynomial& p) {
  switch (c.inequality) {
    case Inequality::Bessel: return check_bessel(p, c.tol);
    case Inequality::HausdorffYoung: return check_hausdorff_young(p, c.q, c.tol);
    case Inequality::Paley: return check_paley(p, c.q, c.tol);
    case Inequality::L1Bound: {
      // The coefficient of largest modulus, first on ties.
      double eta = 0.0;
      double best = -1.0;
      for (const auto& t : p.terms()) {
        if (std::abs(t.coeff) > best) {
          best = std::abs(t.coeff);
          eta = t.freq;
        }
      }
      return check_l1_bound(p, eta, c.tol);
    }
    case Inequality::LorentzPaley: return check_lorentz_paley(p, c.p, c.q, c.tol);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown inequality");
}

std::size_t thread_count(const CampaignConfig& c) {
  std::size_t n = c.threads;
  if (n == 0) {
    if (const char* env = std::getenv("APCHARGE_THREADS")) n = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, c.trials));
}

}  // namespace

InequalityReport run_campaign(const CampaignConfig& config) {
  if (config.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  // Surface bad parameters once, up front, rather than as per-trial failures.
  if (config.inequality == Inequality::HausdorffYoung && !(config.q >= 1.0 && config.q <= 2.0)) {
    throw Error(ErrorKind::InvalidArgument, "Hausdorff-Young needs q in [1, 2]");
  }
  if (config.inequality == Inequality::Paley && !(config.q > 1.0 && config.q <= 2.0)) {
    throw Error(ErrorKind::InvalidArgument, "the Paley inequality needs q in (1, 2]");
  }
  if (config.inequality == Inequality::LorentzPaley) {
    if (!(config.p > 1.0 && config.p < 2.0)) throw Error(ErrorKind::InvalidArgument, "the Lorentz-Paley bound needs p in (1, 2)");
    (void)LorentzParams::make(config.p, config.q);
  }

  std::vector<TrialRecord> records(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1)) {
      const std::uint64_t seed = config.base_seed + i;
      TrialRecord rec;
      try {
        rec = run_check(config, gen_campaign_poly(seed, config.generator));
      } catch (const Error& e) {
        rec.poly = format_poly(gen_campaign_poly(seed, config.generator));
        rec.error = e.what();
      }
      rec.seed = seed;
      records[i] = std::move(rec);
    }
  };
  const std::size_t n_threads = thread_count(config);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  InequalityReport rep;
  rep.name = inequality_name(config.inequality);
  rep.unit_constant = has_unit_constant(config.inequality);
  rep.base_seed = config.base_seed;
  rep.trials = config.trials;
  if (config.inequality == Inequality::LorentzPaley) {
    rep.p = config.p;
    rep.q = config.q;
    rep.q_prime = conjugate(config.p);
  } else if (config.inequality == Inequality::HausdorffYoung || config.inequality == Inequality::Paley) {
    rep.p = conjugate(config.q);
    rep.q = config.q;
    rep.q_prime = conjugate(config.q);
  } else {
    rep.p = config.inequality == Inequality::Bessel ? 2.0 : 1.0;
    rep.q = rep.p;
    if (rep.p > 1.0) rep.q_prime = conjugate(rep.p);
  }
  rep.note = "trials draw trigonometric polynomials only; general B^q elements are outside this harness";

  numerics::CompensatedSum ratio_sum;
  std::size_t counted = 0;
  const std::size_t quartile_start = config.trials - config.trials / 4;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrialRecord& r = records[i];
    if (!r.error.empty()) {
      ++rep.failures;
      continue;
    }
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    if (r.violation) ++rep.violations;
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    if (i >= quartile_start) rep.last_quartile_max = std::max(rep.last_quartile_max, r.ratio);
    ratio_sum.add(r.ratio);
    ++counted;
  }
  rep.mean_ratio = counted ? ratio_sum.value() / static_cast<double>(counted) : 0.0;
  rep.empirical_constant = rep.max_ratio;

  const TrigPolynomial two_cos = TrigPolynomial::make({{1.0, 1.0}, {-1.0, 1.0}});
  try {
    TrialRecord spot = config.inequality == Inequality::L1Bound ? check_l1_bound(two_cos, 1.0, config.tol)
                                                                 : run_check(config, two_cos);
    spot.seed = 0;
    rep.spot = std::move(spot);
  } catch (const Error& e) {
    TrialRecord spot;
    spot.poly = format_poly(two_cos);
    spot.error = e.what();
    rep.spot = std::move(spot);
  }

  if (rep.unit_constant) {
    rep.pass = rep.violations == 0 && rep.failures == 0;
  } else {
    rep.pass = rep.failures == 0 && std::isfinite(rep.max_ratio) && rep.last_quartile_max <= rep.max_ratio;
  }
  if (config.keep_records) rep.records = std::move(records);
  return rep;
}

}  // namespace apcharge
