#pragma once

// Sequences of simple functions standing in for elements of the completion
// of a charge space. Limits are only ever observed at a finite horizon, on
// the two-point ladder (floor(N/2), N), and come with a residual.

#include <cstddef>
#include <functional>
#include <utility>

#include "apcharge/charge.hpp"
#include "apcharge/lorentz.hpp"

namespace apcharge {

inline constexpr double kDefaultSequenceTol = 1e-6;
inline constexpr std::size_t kDefaultHorizon = 64;

struct SimpleFunctionSequence {
  std::function<SimpleFunction(std::size_t)> generator;  // defined on 1..horizon, pure
  std::size_t horizon = kDefaultHorizon;
  Charge charge;

  // Throws InvalidArgument outside 1..horizon.
  SimpleFunction at(std::size_t n) const;
  // Throws HorizonTooSmall if horizon < 4.
  std::pair<std::size_t, std::size_t> ladder() const;
};

struct LimitDiagnostic {
  double estimate = 0.0;
  double residual = 0.0;
  std::pair<std::size_t, std::size_t> indices_used{0, 0};
  bool converged = false;
};

// {|h| > delta} as a set of the field.
SetExpr level_set_above(const FieldOfSets& field, const SimpleFunction& h, double delta);

// mu*({|f_N - f_{N/2}| > delta}).
LimitDiagnostic is_cauchy(const SimpleFunctionSequence& seq, double delta, double tol = kDefaultSequenceTol);
// mu*({|f - f_N| > delta}).
LimitDiagnostic converges_to(const SimpleFunctionSequence& seq, const SimpleFunction& f, double delta,
                             double tol = kDefaultSequenceTol);
// mu*({|f_N - g_N| > delta}) <= tol: the two sequences represent the same
// element as far as the horizon can tell.
bool equivalent(const SimpleFunctionSequence& a, const SimpleFunctionSequence& b, double delta,
                double tol = kDefaultSequenceTol);

// ||f_N||_F with residual | ||f_N||_F - ||f_{N/2}||_F |.
LimitDiagnostic tmdot_norm(const SimpleFunctionSequence& seq, double tol = kDefaultSequenceTol);

// ||f_N^-||_F <= tol and the negative-part norms do not grow on the ladder.
bool order_geq_zero(const SimpleFunctionSequence& seq, double tol = kDefaultSequenceTol);

// int f_N dmu. Throws NotCauchy if the sequence fails is_cauchy at
// delta = tol, NotCauchyL1 if int |f_N - f_{N/2}| dmu > tol.
LimitDiagnostic integrate_sequence(const SimpleFunctionSequence& seq, double tol = kDefaultSequenceTol);

// ||f_N||_p, residual int ||f_N|^p - |f_{N/2}|^p| dmu (NotCauchyLp above
// tol). For p = inf: the least level value C with mu*({|f_N| > C}) <= tol,
// residual the change of that value along the ladder.
LimitDiagnostic ldot_p_norm(const SimpleFunctionSequence& seq, double p, double tol = kDefaultSequenceTol);

// Lorentz norm of f_N from its distribution, residual lorentz_gap of the
// ladder distributions (NotCauchyLorentz above tol).
LimitDiagnostic ldot_pq_norm(const SimpleFunctionSequence& seq, const LorentzParams& params,
                             double tol = kDefaultSequenceTol);

}  // namespace apcharge
