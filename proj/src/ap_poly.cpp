#include "apcharge/ap_poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>

#include "apcharge/density_charge.hpp"
#include "apcharge/error.hpp"
#include "apcharge/numerics/compensated.hpp"
#include "apcharge/numerics/rational.hpp"

namespace apcharge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// More oscillations per period than this and the single-period quadrature
// is no cheaper than the windowed route.
constexpr double kMaxPeriodOscillations = 1e5;

}  // namespace

// --------------------------------------------------------- TrigPolynomial

TrigPolynomial TrigPolynomial::make(std::vector<TrigTerm> terms) {
  for (const auto& t : terms) {
    if (!std::isfinite(t.freq) || !std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw Error(ErrorKind::InvalidArgument, "frequencies and coefficients must be finite");
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const TrigTerm& a, const TrigTerm& b) { return a.freq < b.freq; });
  TrigPolynomial p;
  for (std::size_t i = 0; i < terms.size();) {
    const double anchor = terms[i].freq;
    Complex acc = 0.0;
    std::size_t k = i;
    for (; k < terms.size() && terms[k].freq - anchor <= kFreqEps; ++k) acc += terms[k].coeff;
    if (acc != Complex(0.0, 0.0)) p.terms_.push_back({anchor, acc});
    i = k;
  }
  for (const auto& t : p.terms_) {
    p.freq_.push_back(t.freq);
    p.re_.push_back(t.coeff.real());
    p.im_.push_back(t.coeff.imag());
  }
  return p;
}

std::vector<Complex> TrigPolynomial::coefficients() const {
  std::vector<Complex> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.coeff);
  return out;
}

double TrigPolynomial::coefficient_l1() const noexcept {
  numerics::CompensatedSum acc;
  for (const auto& t : terms_) acc.add(std::abs(t.coeff));
  return acc.value();
}

double TrigPolynomial::frequency_span() const noexcept {
  return terms_.empty() ? 0.0 : terms_.back().freq - terms_.front().freq;
}

Complex TrigPolynomial::operator()(double x) const noexcept {
  const double xs[1] = {x};
  double re[1], im[1];
  kernels::scalar::trig_eval(view(), xs, re, im);
  return {re[0], im[0]};
}

TrigPolynomial operator+(const TrigPolynomial& p, const TrigPolynomial& q) {
  std::vector<TrigTerm> all(p.terms().begin(), p.terms().end());
  all.insert(all.end(), q.terms().begin(), q.terms().end());
  return TrigPolynomial::make(std::move(all));
}

TrigPolynomial operator-(const TrigPolynomial& p, const TrigPolynomial& q) { return p + scale(q, -1.0); }

TrigPolynomial operator*(const TrigPolynomial& p, const TrigPolynomial& q) {
  std::vector<TrigTerm> all;
  all.reserve(p.size() * q.size());
  for (const auto& a : p.terms()) {
    for (const auto& b : q.terms()) all.push_back({a.freq + b.freq, a.coeff * b.coeff});
  }
  return TrigPolynomial::make(std::move(all));
}

TrigPolynomial scale(const TrigPolynomial& p, Complex c) {
  std::vector<TrigTerm> all;
  for (const auto& a : p.terms()) all.push_back({a.freq, a.coeff * c});
  return TrigPolynomial::make(std::move(all));
}

TrigPolynomial conj(const TrigPolynomial& p) {
  std::vector<TrigTerm> all;
  for (const auto& a : p.terms()) all.push_back({-a.freq, std::conj(a.coeff)});
  return TrigPolynomial::make(std::move(all));
}

Complex mean_value(const TrigPolynomial& p) { return fourier_coefficient(p, 0.0); }

Complex fourier_coefficient(const TrigPolynomial& p, double eta) {
  const TrigTerm* hit = nullptr;
  for (const auto& t : p.terms()) {
    if (std::fabs(t.freq - eta) <= kFreqEps) {
      if (hit) {
        std::ostringstream os;
        os.precision(17);
        os << "frequency " << eta << " matches both " << hit->freq << " and " << t.freq;
        throw Error(ErrorKind::AmbiguousFrequency, os.str());
      }
      hit = &t;
    }
  }
  return hit ? hit->coeff : Complex(0.0, 0.0);
}

std::optional<double> common_period(const TrigPolynomial& p) {
  std::vector<double> freqs;
  for (const auto& t : p.terms()) {
    if (t.freq != 0.0) freqs.push_back(t.freq);
  }
  if (freqs.empty()) return kTwoPi;
  const double ref = *std::min_element(freqs.begin(), freqs.end(),
                                       [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  constexpr std::int64_t kMaxDen = 1'000'000;
  std::vector<numerics::Fraction> ratios;
  std::int64_t lcm = 1;
  for (double f : freqs) {
    const auto r = numerics::commensurate_ratio(f / ref, 1e-9, kMaxDen);
    if (!r) return std::nullopt;
    ratios.push_back(*r);
    lcm = std::lcm(lcm, r->denominator);
    if (lcm > kMaxDen) return std::nullopt;
  }
  std::int64_t g = 0;
  for (const auto& r : ratios) {
    const std::int64_t m = r.numerator * (lcm / r.denominator);
    if (std::llabs(m) > kMaxDen) return std::nullopt;
    g = std::gcd(g, std::llabs(m));
  }
  const double omega = std::fabs(ref) * static_cast<double>(g) / static_cast<double>(lcm);
  return kTwoPi / omega;
}

// -------------------------------------------------------------- means

constexpr int kEnvelopeSlices = 64;

MeanEstimate windowed_mean(const numerics::BatchFunction& g, const WindowOptions& options) {
  if (!(options.tau0 > 0.0) || options.doublings < 0 || !(options.tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "need tau0 > 0, doublings >= 0 and tol > 0");
  }
  auto integrate = [&](double a, double b, double abs_tol) {
    numerics::QuadratureOptions q;
    q.abs_tol = abs_tol;
    const double oscillations = (b - a) * std::max(options.max_frequency, 1.0) / kTwoPi;
    q.initial_panels = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(8.0 * oscillations)));
    return numerics::adaptive_simpson(g, a, b, q).value;
  };

  std::vector<double> taus;
  std::vector<double> means;
  // (tau, mean) inside the second to last doubling.
  std::vector<std::pair<double, double>> slices;
  numerics::CompensatedSum integral;
  double prev_tau = 0.0;
  double tau = options.tau0;
  for (int j = 0; j <= options.doublings; ++j, tau *= 2.0) {
    // Quadrature error in the mean stays below tol/4 at every rung.
    const double abs_tol = 0.25 * options.tol * tau;
    if (j == 0) {
      integral.add(integrate(-tau, tau, 2.0 * abs_tol));
    } else if (j != options.doublings - 1) {
      integral.add(integrate(-tau, -prev_tau, abs_tol));
      integral.add(integrate(prev_tau, tau, abs_tol));
    } else {
      const double step = (tau - prev_tau) / kEnvelopeSlices;
      for (int k = 1; k <= kEnvelopeSlices; ++k) {
        const double lo = prev_tau + (k - 1) * step, hi = k == kEnvelopeSlices ? tau : prev_tau + k * step;
        integral.add(integrate(-hi, -lo, abs_tol / kEnvelopeSlices));
        integral.add(integrate(lo, hi, abs_tol / kEnvelopeSlices));
        if (k < kEnvelopeSlices) slices.emplace_back(hi, integral.value() / (2.0 * hi));
      }
    }
    taus.push_back(tau);
    means.push_back(integral.value() / (2.0 * tau));
    prev_tau = tau;
  }

  // Ladder residual as it stood after rung k.
  auto residual_at = [&](std::size_t k) {
    double r = k > 0 ? std::fabs(means[k] - means[k - 1]) : 0.0;
    for (std::size_t j = 0; j < k; ++j) r = std::max(r, std::fabs(means[j] - means[k]) * taus[j] / (taus[k] - taus[j]));
    return r;
  };
  MeanEstimate est;
  est.value = means.back();
  const std::size_t last = means.size() - 1;
  const double ladder = residual_at(last);
  if (last >= 4) {
    const double r0 = residual_at(last - 3), r1 = residual_at(last - 2), r2 = residual_at(last - 1);
    if (r0 < r1 && r1 < r2 && r2 < ladder && ladder > options.tol) {
      throw Error(ErrorKind::NotConverging, "window mean residuals grew over the last three doublings");
    }
  }
  // K = max s |m(s) - m_last| over s <= tau_last / 2 bounds half of
  // sup s |m(s) - mean|, which bounds tau_last times the error.
  double envelope = 0.0;
  for (std::size_t j = 0; j < last; ++j) envelope = std::max(envelope, taus[j] * std::fabs(means[j] - est.value));
  for (const auto& [t, m] : slices) envelope = std::max(envelope, t * std::fabs(m - est.value));
  est.residual = std::max(ladder, 2.0 * envelope / taus[last]);
  return est;
}

numerics::BatchFunction modulus_pow_function(const TrigPolynomial& p, double power) {
  auto poly = std::make_shared<const TrigPolynomial>(p);
  return [poly, power](std::span<const double> x, std::span<double> y) {
    kernels::trig_modulus_pow(poly->view(), x, power, y);
  };
}

MeanEstimate abs_pow_mean(const TrigPolynomial& p, double q, double tol) {
  if (!(q > 0.0) || !std::isfinite(q)) throw Error(ErrorKind::InvalidArgument, "q must be positive and finite");
  if (p.is_zero()) return {0.0, true, 0.0};
  if (p.size() == 1) return {std::pow(std::abs(p.terms()[0].coeff), q), true, 0.0};
  const double span = p.frequency_span();
  const auto period = common_period(p);
  if (period && *period * span / kTwoPi <= kMaxPeriodOscillations) {
    numerics::QuadratureOptions opts;
    opts.abs_tol = tol * *period;
    const double oscillations = *period * span / kTwoPi;
    opts.initial_panels = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(8.0 * oscillations)));
    const auto r = numerics::adaptive_simpson(modulus_pow_function(p, q), 0.0, *period, opts);
    return {r.value / *period, true, 0.0};
  }
  WindowOptions w;
  w.tol = std::max(tol, 1e-8);
  w.max_frequency = span;
  return windowed_mean(modulus_pow_function(p, q), w);
}

double b_norm(const TrigPolynomial& p, double q, double tol) { return std::pow(abs_pow_mean(p, q, tol).value, 1.0 / q); }

// ----------------------------------------------------------- gamma norms

namespace {

// Largest |P| on [lo, hi): best grid samples polished by golden section.
double sup_modulus(const TrigPolynomial& p, double lo, double hi, std::size_t cells) {
  const auto f = modulus_pow_function(p, 2.0);
  std::vector<double> xs(cells + 1);
  std::vector<double> ys(cells + 1);
  const double h = (hi - lo) / static_cast<double>(cells);
  for (std::size_t j = 0; j <= cells; ++j) xs[j] = lo + h * static_cast<double>(j);
  f(xs, ys);
  std::vector<std::size_t> order(ys.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min<std::size_t>(8, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return ys[a] > ys[b]; });
  double best = ys[order[0]];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k = 0; k < top; ++k) {
    double a = xs[order[k]] - h;
    double b = xs[order[k]] + h;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double pt[2] = {c, d};
    double val[2];
    f(pt, val);
    for (int it = 0; it < 60; ++it) {
      if (val[0] > val[1]) {
        b = d;
        d = c;
        val[1] = val[0];
        c = b - inv_phi * (b - a);
        const double one[1] = {c};
        f(one, std::span<double>(val, 1));
      } else {
        a = c;
        c = d;
        val[0] = val[1];
        d = a + inv_phi * (b - a);
        const double one[1] = {d};
        f(one, std::span<double>(val + 1, 1));
      }
    }
    best = std::max({best, val[0], val[1]});
  }
  return std::sqrt(best);
}

struct TabulatedNorm {
  LorentzParams params;
  double upper = 0.0;
  std::vector<double> nodes;  // u = s^q (or s when q = inf)
  std::vector<double> levels;

  TabulatedNorm(const LorentzParams& prm, double sup, std::size_t count) : params(prm), upper(sup) {
    const double exponent = params.q_infinite() ? 1.0 : params.q;
    const double top = std::pow(upper, exponent);
    const std::size_t n = std::max<std::size_t>(count, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = top * 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
      nodes.push_back(u);
      levels.push_back(std::pow(u, 1.0 / exponent));
    }
  }

  double evaluate(std::span<const double> gamma) const {
    if (params.q_infinite()) {
      double best = 0.0;
      for (std::size_t i = 0; i < levels.size(); ++i) best = std::max(best, levels[i] * std::pow(gamma[i], 1.0 / params.p));
      return best;
    }
    const double e = params.q / params.p;
    numerics::CompensatedSum acc;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      acc.add(0.5 * (std::pow(gamma[i - 1], e) + std::pow(gamma[i], e)) * (nodes[i] - nodes[i - 1]));
    }
    return std::pow(params.p / params.q * acc.value(), 1.0 / params.q);
  }
};

}  // namespace

double lorentz_gamma_norm(const TrigPolynomial& p, const LorentzParams& params_in, const GammaNormOptions& options) {
  const LorentzParams params = LorentzParams::make(params_in.p, params_in.q);
  if (p.is_zero()) return 0.0;
  if (p.size() == 1) {
    return lorentz_norm_from_distribution(StepDistribution::from_steps({std::abs(p.terms()[0].coeff)}, {1.0}), params);
  }
  const double span = p.frequency_span();
  const auto modulus = modulus_pow_function(p, 1.0);
  auto cells_for = [&](double length) {
    const double oscillations = length * span / kTwoPi;
    return std::max(options.grid, static_cast<std::size_t>(std::ceil(16.0 * oscillations)));
  };

  const auto period = common_period(p);
  if (period && *period * span / kTwoPi <= kMaxPeriodOscillations) {
    const std::size_t cells = cells_for(*period);
    const double sup = std::min(p.coefficient_l1(), sup_modulus(p, 0.0, *period, cells) * (1.0 + 1e-12));
    const TabulatedNorm table(params, sup, options.levels);
    const auto gamma = periodic_distribution(modulus, *period, table.levels, {cells, options.tol});
    return table.evaluate(gamma);
  }

  auto windowed = [&](double tau) {
    const std::size_t cells = cells_for(2.0 * tau);
    numerics::BatchFunction shifted = [&modulus, tau](std::span<const double> x, std::span<double> y) {
      std::vector<double> moved(x.begin(), x.end());
      for (double& v : moved) v -= tau;
      modulus(moved, y);
    };
    const double sup = std::min(p.coefficient_l1(), sup_modulus(p, -tau, tau, cells) * (1.0 + 1e-12));
    const TabulatedNorm table(params, sup, options.levels);
    const auto gamma = periodic_distribution(shifted, 2.0 * tau, table.levels, {cells, options.tol});
    return table.evaluate(gamma);
  };
  const double coarse = windowed(1024.0);
  const double fine = windowed(2048.0);
  if (std::fabs(fine - coarse) > 1e-2 * std::max(fine, 1e-300)) {
    throw Error(ErrorKind::IncommensurableUnsupported,
                "windowed distribution estimates differ by more than 1% between tau = 1024 and 2048");
  }
  return fine;
}

// ------------------------------------------------------------------ text

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string shortest(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

TrigPolynomial parse_poly(std::string_view text) {
  std::vector<TrigTerm> terms;
  if (trim(text).empty()) throw Error(ErrorKind::ParseError, "empty polynomial");
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view item = trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (item.empty()) continue;
    const auto at = item.find('@');
    if (at == std::string_view::npos) throw Error(ErrorKind::ParseError, "term '" + std::string(item) + "' lacks '@freq'");
    const std::string_view coeff = item.substr(0, at);
    const auto comma = coeff.find(',');
    const double re = parse_number(coeff.substr(0, comma));
    const double im = comma == std::string_view::npos ? 0.0 : parse_number(coeff.substr(comma + 1));
    terms.push_back({parse_number(item.substr(at + 1)), {re, im}});
  }
  return TrigPolynomial::make(std::move(terms));
}

std::string format_poly(const TrigPolynomial& p) {
  std::string out;
  for (const auto& t : p.terms()) {
    if (!out.empty()) out += ';';
    out += shortest(t.coeff.real()) + ',' + shortest(t.coeff.imag()) + '@' + shortest(t.freq);
  }
  return out;
}

nlohmann::json to_json(const TrigPolynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) terms.push_back({{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"freq", t.freq}});
  return {{"terms", terms}};
}

TrigPolynomial poly_from_json(const nlohmann::json& j) {
  try {
    std::vector<TrigTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("freq").get<double>(), {t.value("re", 0.0), t.value("im", 0.0)}});
    }
    return TrigPolynomial::make(std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed polynomial JSON: ") + e.what());
  }
}

}  // namespace apcharge
