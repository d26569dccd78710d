#pragma once

// Randomised checks of coefficient inequalities for trigonometric
// polynomials against the density charge, and seeded campaigns over them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apcharge/ap_poly.hpp"

namespace apcharge {

enum class GeneratorMode { IntegerLattice, GenericReal };

struct GeneratorSettings {
  std::size_t max_terms = 8;  // campaigns draw 1..max_terms terms per trial
  double freq_range = 8.0;    // frequencies in [-freq_range, freq_range]
  double coeff_bound = 1.0;   // |a_k| <= coeff_bound
  GeneratorMode mode = GeneratorMode::IntegerLattice;
};

// Deterministic in all arguments. Integer mode draws distinct integers;
// generic mode draws reals at pairwise distance > 10 kFreqEps.
TrigPolynomial gen_random_poly(std::uint64_t seed, std::size_t n_terms, double freq_range, double coeff_bound,
                               GeneratorMode mode);
// Term count drawn from the same seed, then gen_random_poly.
TrigPolynomial gen_campaign_poly(std::uint64_t seed, const GeneratorSettings& settings);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::string poly;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double residual = 0.0;
  bool skipped = false;    // rhs < 1e-12
  bool violation = false;  // only for inequalities with constant 1
  std::string error;       // numerical failure message, trial not counted
};

TrialRecord check_bessel(const TrigPolynomial& p, double tol);
// q in [1, 2]; lhs is the l^{q'} norm of the coefficients (sup at q = 1).
TrialRecord check_hausdorff_young(const TrigPolynomial& p, double q, double tol);
// q in (1, 2]; lhs is the l^{q',q} Lorentz norm of the coefficients.
TrialRecord check_paley(const TrigPolynomial& p, double q, double tol);
TrialRecord check_l1_bound(const TrigPolynomial& p, double eta, double tol);
// p in (1, 2), q in (0, inf]; lhs is the l^{p',q} norm of the coefficients,
// rhs the L^{p,q}(gamma) norm of P.
TrialRecord check_lorentz_paley(const TrigPolynomial& p, double lp, double lq, double tol);

enum class Inequality { Bessel, HausdorffYoung, Paley, L1Bound, LorentzPaley };

std::string inequality_name(Inequality ineq);
// Accepts the names above plus "hy" and "lp" shorthands. InvalidArgument
// otherwise.
Inequality parse_inequality(std::string_view name);
bool has_unit_constant(Inequality ineq);

struct CampaignConfig {
  Inequality inequality = Inequality::HausdorffYoung;
  double p = 1.5;  // Lorentz-Paley only
  double q = 2.0;
  std::size_t trials = 100;
  std::uint64_t base_seed = 0;
  GeneratorSettings generator;
  double tol = 1e-6;
  bool keep_records = true;
  // 0: APCHARGE_THREADS if set, else the hardware concurrency.
  std::size_t threads = 0;
};

struct InequalityReport {
  std::string name;
  double p = 0.0;
  double q = 0.0;
  std::optional<double> q_prime;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  std::size_t failures = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double empirical_constant = 0.0;
  double last_quartile_max = 0.0;
  std::uint64_t base_seed = 0;
  bool unit_constant = false;
  bool pass = false;
  std::string note;
  std::optional<TrialRecord> spot;  // 2 cos x at the campaign parameters
  std::vector<TrialRecord> records;
};

// Trial i uses seed base_seed + i. Identical configs give identical
// reports whatever the thread count.
InequalityReport run_campaign(const CampaignConfig& config);

}  // namespace apcharge
