#include "apcharge/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "apcharge/ap_poly.hpp"
#include "apcharge/density_charge.hpp"
#include "apcharge/error.hpp"
#include "apcharge/fefferman_model.hpp"
#include "apcharge/inequalities.hpp"
#include "apcharge/report_format.hpp"

namespace apcharge {
namespace {

using nlohmann::json;

struct Flags {
  std::string poly;
  std::string set;
  std::string space = "b";
  std::string p = "1.5";
  std::string q = "2";
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string format;
  std::string out;
  std::string ineq = "hausdorff_young";
  std::size_t max_terms = 8;
  double freq_range = 8.0;
  std::string mode = "integer";
  std::size_t horizon = kDefaultHorizon;
  std::string config;
};

double parse_exponent(const std::string& text, const char* name) {
  if (text == "inf" || text == "infinity") return kInf;
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be a number or 'inf'");
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be > 0");
  return v;
}

std::string config_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw Error(ErrorKind::ParseError, "config values must be strings or numbers");
}

// Keys of the --config file fill options that were not given on the
// command line.
struct ConfigSlot {
  const CLI::App* sub;
  CLI::Option* opt;
  std::function<void(const json&)> set;
};
using ConfigSlots = std::vector<ConfigSlot>;

void apply_config(const std::string& path, const CLI::App* sub, const ConfigSlots& slots) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config file must hold a JSON object");
  for (const auto& [owner, opt, set] : slots) {
    if (owner != sub || opt->count() > 0) continue;
    const std::string key = opt->get_single_name();
    if (!j.contains(key)) continue;
    try {
      set(j.at(key));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, "config key '" + key + "': " + e.what());
    }
  }
}

std::string number_text(double x) { return format_text_number(x); }

std::string emit_json(const json& j) { return j.dump(2) + "\n"; }

std::string coeffs_output(const TrigPolynomial& p, ReportFormat format) {
  const auto period = common_period(p);
  switch (format) {
    case ReportFormat::Json: {
      json terms = json::array();
      for (const auto& t : p.terms()) {
        terms.push_back({{"freq", t.freq}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"abs", std::abs(t.coeff)}});
      }
      return emit_json({{"terms", terms}, {"period", period ? json(*period) : json(nullptr)}});
    }
    case ReportFormat::Csv: {
      std::string s = "freq,re,im,abs\n";
      for (const auto& t : p.terms()) {
        json row = json::array({t.freq, t.coeff.real(), t.coeff.imag(), std::abs(t.coeff)});
        s += row[0].dump() + ',' + row[1].dump() + ',' + row[2].dump() + ',' + row[3].dump() + '\n';
      }
      return s;
    }
    case ReportFormat::Text: {
      std::string s;
      for (const auto& t : p.terms()) {
        s += number_text(t.freq) + "  " + number_text(t.coeff.real()) + "  " + number_text(t.coeff.imag()) + '\n';
      }
      s += "period  " + (period ? number_text(*period) : std::string("none")) + '\n';
      return s;
    }
  }
  return {};
}

std::string scalar_output(const std::string& key, double value, json extra, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      extra[key] = number_json(value);
      return emit_json(extra);
    case ReportFormat::Csv: {
      json v = number_json(value);
      return key + "\n" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
    case ReportFormat::Text: return number_text(value) + "\n";
  }
  return {};
}

struct DemoSequence {
  std::string name;
  SimpleFunctionSequence seq;
};

std::vector<DemoSequence> demo_sequences(const Charge& mu, std::size_t horizon) {
  const FieldOfSets& field = mu.field();
  auto prefix = [](std::size_t n) {
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = i + 1;
    return pts;
  };
  std::vector<DemoSequence> out;
  out.push_back({"indicator (0,n]", {[field, prefix](std::size_t n) {
                                       return SimpleFunction::indicator(field, SetExpr::finite(prefix(n)));
                                     },
                                     horizon, mu}});
  out.push_back({"indicator N minus (0,n]", {[field, prefix](std::size_t n) {
                                                return SimpleFunction::indicator(field, SetExpr::cofinite(prefix(n)));
                                              },
                                              horizon, mu}});
  out.push_back({"-2 on {1,2}, 3 on n > 2", {[field](std::size_t) {
                                                return SimpleFunction::make(field, {{-2.0, SetExpr::finite({1, 2})},
                                                                                    {3.0, SetExpr::cofinite({1, 2})}});
                                              },
                                              horizon, mu}});
  return out;
}

int embed_demo(const Flags& flags, ReportFormat format, std::string& text) {
  const Charge mu = Charge::halving_cofinite();
  const std::vector<ModelNormSpec> spaces = {ModelNormSpec::integral(), ModelNormSpec::lp(1.0), ModelNormSpec::lp(2.0),
                                             ModelNormSpec::lorentz(2.0, 1.0), ModelNormSpec::lorentz(3.0, kInf),
                                             ModelNormSpec::f_norm()};
  bool all_ok = true;
  json seqs = json::array();
  std::string csv = "sequence,space,charge_side,model_side,discrepancy,residual,ok\n";
  std::string table;
  for (const auto& demo : demo_sequences(mu, flags.horizon)) {
    const IsometryReport rep = verify_isometry(demo.seq, spaces, flags.tol);
    all_ok = all_ok && rep.all_ok();
    json rows = json::array();
    table += demo.name + "\n";
    for (const auto& r : rep.rows) {
      rows.push_back({{"space", r.space},
                      {"charge_side", number_json(r.charge_side)},
                      {"model_side", number_json(r.model_side)},
                      {"discrepancy", number_json(r.discrepancy)},
                      {"residual", number_json(r.residual)},
                      {"ok", r.ok}});
      csv += '"' + demo.name + "\"," + r.space + ',' + json(r.charge_side).dump() + ',' + json(r.model_side).dump() + ',' +
             json(r.discrepancy).dump() + ',' + json(r.residual).dump() + ',' + (r.ok ? "true" : "false") + '\n';
      std::string space = "  " + r.space;
      space.resize(std::max<std::size_t>(space.size() + 1, 16), ' ');
      table += space + number_text(r.charge_side) + "  " + number_text(r.model_side) + "  " + number_text(r.discrepancy) +
               (r.ok ? "" : "  FAIL") + '\n';
    }
    seqs.push_back({{"sequence", demo.name},
                    {"rows", rows},
                    {"multiplication_preserved", rep.multiplication_preserved},
                    {"order_preserved", rep.order_preserved},
                    {"max_discrepancy", rep.max_discrepancy}});
  }
  switch (format) {
    case ReportFormat::Json:
      text = emit_json({{"charge", to_json(mu)},
                        {"horizon", flags.horizon},
                        {"infinity_mass", mu.mass_at_infinity()},
                        {"sequences", seqs},
                        {"all_ok", all_ok}});
      break;
    case ReportFormat::Csv: text = csv; break;
    case ReportFormat::Text: text = table; break;
  }
  return all_ok ? kExitOk : kExitViolation;
}

int campaign_exit(const InequalityReport& rep) {
  if (rep.violations > 0) return kExitViolation;
  if (rep.failures > 0) return kExitNumerical;
  return rep.pass ? kExitOk : kExitViolation;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Charges, Lorentz norms and coefficient inequalities for almost periodic polynomials", "apcharge"};
  app.require_subcommand(1);
  Flags f;

  auto* coeffs = app.add_subcommand("coeffs", "Fourier coefficients and common period of a polynomial");
  auto* norm = app.add_subcommand("norm", "B^q mean norm or Lorentz norm of a polynomial against gamma");
  auto* gamma = app.add_subcommand("gamma", "Density charge of a set");
  auto* verify = app.add_subcommand("verify", "Run an inequality campaign and print the summary report");
  auto* campaign = app.add_subcommand("campaign", "Run an inequality campaign with per-trial records");
  auto* demo = app.add_subcommand("embed-demo", "Charge-side against model-side norms for sample sequences");

  ConfigSlots slots;
  auto add_string = [&](CLI::App* sub, const std::string& name, std::string& target, const std::string& help) {
    slots.push_back({sub, sub->add_option(name, target, help), [&target](const json& v) { target = config_string(v); }});
  };
  auto add_common = [&](CLI::App* sub, const std::string& default_format) {
    f.format.clear();
    add_string(sub, "--format", f.format, "json, csv or text (default " + default_format + ")");
    add_string(sub, "--out", f.out, "write output to this file");
    sub->add_option("--config", f.config, "JSON file supplying flag values; flags take precedence");
  };
  auto add_campaign = [&](CLI::App* sub) {
    add_string(sub, "--ineq", f.ineq, "bessel, hausdorff_young, paley, l1_bound or lorentz_paley");
    add_string(sub, "--p", f.p, "Lorentz-Paley p");
    add_string(sub, "--q", f.q, "inequality exponent q");
    slots.push_back({sub, sub->add_option("--trials", f.trials, "number of trials"),
                       [&f](const json& v) { f.trials = v.get<std::size_t>(); }});
    slots.push_back({sub, sub->add_option("--seed", f.seed, "base seed"),
                       [&f](const json& v) { f.seed = v.get<std::uint64_t>(); }});
    slots.push_back({sub, sub->add_option("--tol", f.tol, "tolerance"), [&f](const json& v) { f.tol = v.get<double>(); }});
    slots.push_back({sub, sub->add_option("--max-terms", f.max_terms, "maximum terms per random polynomial"),
                       [&f](const json& v) { f.max_terms = v.get<std::size_t>(); }});
    slots.push_back({sub, sub->add_option("--freq-range", f.freq_range, "frequencies drawn from [-r, r]"),
                       [&f](const json& v) { f.freq_range = v.get<double>(); }});
    add_string(sub, "--mode", f.mode, "integer or generic frequencies");
    add_common(sub, "json");
  };

  add_string(coeffs, "--poly", f.poly, "polynomial 're,im@freq;...'");
  add_common(coeffs, "text");
  add_string(norm, "--poly", f.poly, "polynomial 're,im@freq;...'");
  add_string(norm, "--space", f.space, "b or lorentz");
  add_string(norm, "--p", f.p, "Lorentz p");
  add_string(norm, "--q", f.q, "exponent q (> 0 or inf)");
  add_common(norm, "text");
  add_string(gamma, "--set", f.set, "set 'period=q;trace=[a,b)...;plus=...;minus=...'");
  add_common(gamma, "text");
  add_campaign(verify);
  add_campaign(campaign);
  slots.push_back({demo, demo->add_option("--horizon", f.horizon, "sequence horizon N"),
                     [&f](const json& v) { f.horizon = v.get<std::size_t>(); }});
  slots.push_back({demo, demo->add_option("--tol", f.tol, "limit tolerance"), [&f](const json& v) { f.tol = v.get<double>(); }});
  add_common(demo, "json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  std::string text;
  int code = kExitOk;
  try {
    if (!f.config.empty()) apply_config(f.config, sub, slots);
    const bool campaign_like = name == "verify" || name == "campaign";
    const ReportFormat format =
        parse_format(f.format.empty() ? (campaign_like || name == "embed-demo" ? "json" : "text") : f.format);

    if (name == "coeffs") {
      if (f.poly.empty()) throw Error(ErrorKind::InvalidArgument, "--poly is required");
      text = coeffs_output(parse_poly(f.poly), format);
    } else if (name == "norm") {
      if (f.poly.empty()) throw Error(ErrorKind::InvalidArgument, "--poly is required");
      const TrigPolynomial p = parse_poly(f.poly);
      const double q = parse_exponent(f.q, "q");
      json extra = {{"space", f.space}, {"q", number_json(q)}};
      double value = 0.0;
      if (f.space == "b") {
        if (std::isinf(q)) throw Error(ErrorKind::InvalidArgument, "the b space needs a finite q");
        value = b_norm(p, q);
      } else if (f.space == "lorentz") {
        const double lp = parse_exponent(f.p, "p");
        extra["p"] = number_json(lp);
        value = lorentz_gamma_norm(p, LorentzParams::make(lp, q));
      } else {
        throw Error(ErrorKind::InvalidArgument, "--space must be b or lorentz");
      }
      text = scalar_output("norm", value, std::move(extra), format);
    } else if (name == "gamma") {
      if (f.set.empty()) throw Error(ErrorKind::InvalidArgument, "--set is required");
      const DensitySet e = parse_density_set(f.set);
      text = scalar_output("gamma", gamma_eval(e), {{"set", format_density_set(e)}}, format);
    } else if (campaign_like) {
      CampaignConfig config;
      config.inequality = parse_inequality(f.ineq);
      config.q = parse_exponent(f.q, "q");
      config.p = parse_exponent(f.p, "p");
      if (f.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
      config.trials = f.trials;
      config.base_seed = f.seed;
      config.tol = f.tol;
      config.generator.max_terms = f.max_terms;
      config.generator.freq_range = f.freq_range;
      if (f.mode == "integer") {
        config.generator.mode = GeneratorMode::IntegerLattice;
      } else if (f.mode == "generic") {
        config.generator.mode = GeneratorMode::GenericReal;
      } else {
        throw Error(ErrorKind::InvalidArgument, "--mode must be integer or generic");
      }
      InequalityReport rep = run_campaign(config);
      code = campaign_exit(rep);
      if (name == "verify" && format != ReportFormat::Csv) rep.records.clear();
      text = format_report(rep, format);
    } else {
      if (f.horizon < 4) throw Error(ErrorKind::HorizonTooSmall, "horizon must be >= 4");
      code = embed_demo(f, format, text);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (is_numerical(e.kind())) return kExitNumerical;
    err << sub->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  if (!f.out.empty()) {
    std::ofstream file(f.out, std::ios::binary);
    if (!file || !(file << text)) {
      err << "error: cannot write '" << f.out << "'\n";
      return kExitUsage;
    }
  } else {
    out << text;
  }
  return code;
}

}  // namespace apcharge
